#include <iostream>
#include <string>
#include <vector>

#include "cldiv/cli.hpp"

int main(int argc, char ** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return cldiv::run(args, std::cout, std::cerr);
}
