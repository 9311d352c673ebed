#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cldiv/cli.hpp"
#include "cldiv/types.hpp"
#include "json.hpp"

using namespace cldiv;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(std::string const & text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"')
                quoted = !quoted;
            else if (ch == ',' && !quoted) {
                cells.push_back(cell);
                cell.clear();
            } else
                cell += ch;
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("parse_count")
{
    CHECK(parse_count("1000") == 1000);
    CHECK(parse_count("10^6") == 1'000'000);
    CHECK(parse_count("1e6") == 1'000'000);
    CHECK(parse_count("3e2") == 300);
    CHECK(parse_count("2^10") == 1024);
    CHECK_THROWS_AS(parse_count("x"), DomainError);
    CHECK_THROWS_AS(parse_count("-5"), DomainError);
    CHECK_THROWS_AS(parse_count("10^30"), SizeError);
}

TEST_CASE("classgroup")
{
    auto r = cli({"classgroup", "--D", "23"});
    CHECK(r.code == exit_ok);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][2] == "3");
    CHECK(rows[1][5] == "(1,1,6);(2,-1,3);(2,1,3)");
    CHECK(parse_csv(cli({"classgroup", "--D", "1"}).out)[1][2] == "1");
    auto bad = cli({"classgroup", "--D", "12"});
    CHECK(bad.code == exit_usage);
    CHECK_FALSE(bad.err.empty());
    CHECK(cli({"classgroup", "--D", "10^8", "--cap", "10^6"}).code == exit_budget);
    auto j = nlohmann::json::parse(cli({"classgroup", "--D", "47", "--format", "json"}).out);
    CHECK(j["h"] == 5);
    CHECK(j["forms"].size() == 5);
}

TEST_CASE("special")
{
    auto r = cli({"special", "--A", "1", "--B", "4", "--g", "4"});
    CHECK(r.code == exit_ok);
    CHECK(parse_csv(r.out)[1][3] == "true");
    auto none = cli({"special", "--A", "0", "--B", "2", "--g", "4"});
    CHECK(none.code == exit_negative);
    CHECK(parse_csv(none.out)[1][3] == "false");
    CHECK(cli({"special", "--A", "1", "--B", "0", "--g", "4"}).code == exit_usage);
    CHECK(cli({"special", "--A", "1", "--B", "4", "--g", "5"}).code == exit_usage);
    CHECK(cli({"special", "--A=-1", "--B", "8", "--g", "4"}).code != exit_usage);
}

TEST_CASE("usage errors")
{
    CHECK(cli({}).code == exit_usage);
    CHECK(cli({"nosuch"}).code == exit_usage);
    CHECK(cli({"classgroup"}).code == exit_usage);
    CHECK(cli({"census", "--A", "1", "--B", "4", "--g", "4"}).code == exit_usage);
    CHECK(cli({"census", "--X", "100", "--format", "xml"}).code == exit_usage);
    CHECK(cli({"construct", "--X", "100", "--shards", "0"}).code == exit_usage);
    CHECK(cli({"--help"}).code == exit_ok);
}

TEST_CASE("construct")
{
    auto r = cli({"construct", "--A", "1", "--B", "4", "--g", "4", "--X", "5000"});
    CHECK(r.code == exit_ok);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == std::vector<std::string>{"m", "t", "D", "squarefree"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        u64 m = std::stoull(rows[i][0]), t = std::stoull(rows[i][1]);
        CHECK(std::stoull(rows[i][2]) == 2 * m * m - t * t);
    }
    auto s8 = cli({"construct", "--A", "1", "--B", "4", "--g", "4", "--X", "5000", "--shards",
                   "8"});
    CHECK(s8.out == r.out);
    CHECK(cli({"construct", "--A", "1", "--B", "4", "--g", "4", "--X", "10^5", "--cap", "10"})
                  .code == exit_budget);

    auto c1 = cli({"construct", "--A", "1", "--B", "4", "--g", "6", "--X", "10^6", "--mode",
                   "all", "--T", "15", "--format", "json"});
    CHECK(c1.code == exit_ok);
    auto j = nlohmann::json::parse(c1.out);
    CHECK(j["case"] == 1);
    CHECK(j["split"]["total"] == j["tuples"].size());
    CHECK(j["config"].count("shards") == 0);
}

TEST_CASE("census")
{
    std::vector<std::string> base = {"census", "--A", "1", "--B", "4", "--g", "4", "--grid",
                                     "10^3,10^4"};
    auto r = cli(base);
    CHECK(r.code == exit_ok);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][5] == "90");
    CHECK(rows[2][5] == "1039");
    CHECK(std::stoull(rows[1][5]) <= std::stoull(rows[2][5]));

    auto sharded = base;
    sharded.insert(sharded.end(), {"--shards", "8"});
    CHECK(cli(sharded).out == r.out);

    auto jb = base;
    jb.insert(jb.end(), {"--format", "json"});
    auto j = nlohmann::json::parse(cli(jb).out);
    auto const & header = rows[0];
    for (std::size_t i = 0; i < j["rows"].size(); ++i) {
        auto const & row = j["rows"][i];
        for (std::size_t k = 0; k < header.size(); ++k) {
            std::string const & key = header[k];
            std::string want = rows[i + 1][k];
            if (row.contains(key)) {
                auto const & v = row[key];
                CHECK(want == (v.is_boolean() ? (v.get<bool>() ? "true" : "false")
                                              : v.is_string() ? v.get<std::string>()
                                                              : v.dump()));
            } else {
                auto const & v = j[key];
                CHECK(want == (v.is_string() ? v.get<std::string>() : v.dump()));
            }
        }
    }

    auto empty = cli({"census", "--A", "0", "--B", "4", "--g", "4", "--grid", "100,1000"});
    CHECK(empty.code == exit_ok);
    for (auto const & row : parse_csv(empty.out))
        if (row[0] != "g") {
            CHECK(row[5] == "0");
            CHECK(row[7] == "0");
        }
    CHECK(cli({"census", "--A", "1", "--B", "4", "--g", "4", "--X", "10^7"}).code ==
          exit_budget);
}

TEST_CASE("census writes both formats next to --out")
{
    auto dir = std::filesystem::temp_directory_path() / "cldiv_cli_test";
    std::filesystem::create_directories(dir);
    auto out = dir / "report.csv";
    auto r = cli({"census", "--A", "1", "--B", "4", "--g", "4", "--X", "2000", "--out",
                  out.string()});
    CHECK(r.code == exit_ok);
    CHECK(r.out.empty());
    CHECK(std::filesystem::exists(out));
    CHECK(std::filesystem::exists(dir / "report.json"));
    std::ifstream f(dir / "report.json");
    auto j = nlohmann::json::parse(f);
    CHECK(j["rows"].size() == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("fit")
{
    auto r = cli({"fit", "--points", "100:10,10000:100"});
    CHECK(r.code == exit_ok);
    CHECK(parse_csv(r.out)[1][1] == "0.500000");
    CHECK(cli({"fit", "--points", "100:10"}).code == exit_usage);
    CHECK(cli({"fit", "--points", "100"}).code == exit_usage);
}

TEST_CASE("screen")
{
    auto r = cli({"screen", "--curve", "27a4", "--X", "10^4"});
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("corollary_exponent=7/8") != std::string::npos);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] ==
          std::vector<std::string>{"D", "h", "certificate", "A", "B", "admissible", "twist_sign"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stoull(rows[i][1]) % 3 == 0);
        CHECK(rows[i][5] == "true");
        CHECK(rows[i][6] == "1");
    }
    auto again = cli({"screen", "--curve", "27a4", "--X", "10^4", "--shards", "8"});
    CHECK(again.out == r.out);

    auto e2 = cli({"screen", "--curve", "175a2", "--X", "1000"});
    CHECK(e2.code == exit_negative);
    CHECK(e2.out.find("corollary_exponent=3/4") != std::string::npos);
    CHECK(e2.out.find("unsatisfiable") != std::string::npos);

    auto e3 = cli({"screen", "--curve", "574i1", "--case", "3", "--d", "3", "--X", "10^4"});
    CHECK(e3.code == exit_ok);
    CHECK(e3.out.find("corollary_exponent=11/16") != std::string::npos);

    CHECK(cli({"screen", "--curve", "11a1", "--X", "100"}).code == exit_usage);
    CHECK(cli({"screen", "--curve", "574i1", "--case", "3", "--X", "100"}).code == exit_usage);
    auto ds = cli({"screen", "--curve", "27a4", "--X", "3000", "--dataset",
                   std::string(CLDIV_DATA_DIR) + "/curves.txt"});
    CHECK(ds.out == cli({"screen", "--curve", "27a4", "--X", "3000"}).out);
}
