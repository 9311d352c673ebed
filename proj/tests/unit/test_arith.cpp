#include "doctest.h"

#include <algorithm>
#include <random>

#include "cldiv/arith.hpp"
#include "oracles.hpp"

using namespace cldiv;

namespace {

std::vector<std::pair<u64, int>> plain(Factorization const & f)
{
    std::vector<std::pair<u64, int>> out;
    for (auto const & pp : f)
        out.emplace_back(static_cast<u64>(pp.prime), pp.exponent);
    return out;
}

}  // namespace

TEST_CASE("factorize small values")
{
    CHECK(factorize(1).empty());
    CHECK(plain(factorize(60)) == std::vector<std::pair<u64, int>>{{2, 2}, {3, 1}, {5, 1}});
    CHECK(plain(factorize(10403)) == oracle::factor(10403));
    CHECK(plain(factorize(10403)) == std::vector<std::pair<u64, int>>{{101, 1}, {103, 1}});
}

TEST_CASE("factorize reconstructs sampled integers up to 10^7")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<u64> pick(1, 10'000'000);
    for (int i = 0; i < 100'000; ++i) {
        u64 n = pick(rng);
        auto f = factorize(n);
        CHECK_MESSAGE(f.value() == n, n);
        u128 last = 0;
        for (auto const & pp : f) {
            CHECK(pp.prime > last);
            CHECK(pp.exponent >= 1);
            last = pp.prime;
        }
    }
}

TEST_CASE("factorize large semiprimes and the cap")
{
    u64 p = 4'294'967'291ULL, q = 4'294'967'279ULL;
    auto f = factorize(static_cast<u128>(p) * q);
    REQUIRE(f.size() == 2);
    CHECK(static_cast<u64>(f.factors()[0].prime) == q);
    CHECK(static_cast<u64>(f.factors()[1].prime) == p);
    u128 big = (u128{1} << 94) + 1;
    CHECK_THROWS_AS(factorize(big), SizeError);
    CHECK(factorize(u128{1} << 94).valuation(2) == 94);
}

TEST_CASE("is_prime against trial division")
{
    for (u64 n = 0; n < 20'000; ++n)
        CHECK_MESSAGE(is_prime(n) == oracle::is_prime(n), n);
    CHECK(is_prime(u128{18446744073709551557ULL}));
    CHECK_FALSE(is_prime(u128{3215031751}));  // strong pseudoprime to 2, 3, 5, 7
}

TEST_CASE("is_squarefree")
{
    CHECK(is_squarefree(1));
    CHECK_FALSE(is_squarefree(12));
    CHECK(is_squarefree(97));
    for (u64 n = 1; n < 5000; ++n)
        CHECK(is_squarefree(n) == oracle::squarefree(n));
}

TEST_CASE("jacobi examples and Euler criterion")
{
    CHECK(jacobi(2, 7) == 1);
    CHECK(jacobi(0, 9) == 0);
    for (i64 a : {-5, 0, 3, 1000})
        CHECK(jacobi(a, 1) == 1);
    CHECK_THROWS_AS(jacobi(3, 8), DomainError);
    CHECK_THROWS_AS(jacobi(3, -7), DomainError);
    for (u64 p = 3; p < 500; ++p) {
        if (!oracle::is_prime(p))
            continue;
        for (u64 a = 0; a < p; ++a)
            CHECK(jacobi(static_cast<i64>(a), static_cast<i64>(p)) ==
                  oracle::euler(static_cast<i64>(a), p));
    }
}

TEST_CASE("kronecker examples")
{
    CHECK(kronecker(-4, 7) == -1);
    CHECK(kronecker(-8, 3) == 1);
    for (i64 d : {-4, 5, -23, 12})
        CHECK(kronecker(d, 1) == 1);
    for (i64 a = -30; a <= 30; ++a)
        for (u64 n = 1; n < 60; ++n)
            CHECK(kronecker(a, static_cast<i64>(n)) == oracle::kronecker(a, n));
}

TEST_CASE("kronecker is multiplicative and periodic for fundamental discriminants")
{
    auto fundamental = [](i64 d) {
        u64 n = static_cast<u64>(d < 0 ? -d : d);
        if (d % 4 == 1 || d % 4 == -3)
            return oracle::squarefree(n);
        if (d % 4 != 0)
            return false;
        i64 m = d / 4;
        i64 mm = ((m % 4) + 4) % 4;
        return (mm == 2 || mm == 3) && oracle::squarefree(n / 4);
    };
    for (i64 d = -199; d < 200; ++d) {
        if (d == 0 || d == 1 || !fundamental(d))
            continue;
        i64 period = d < 0 ? -d : d;
        for (i64 m = 1; m < 40; ++m) {
            CHECK(kronecker(d, m + period) == kronecker(d, m));
            for (i64 n = 1; n < 12; ++n)
                CHECK(kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n));
        }
    }
}

TEST_CASE("sqrt_mod")
{
    CHECK(sqrt_mod(4, 7) == 2u);
    CHECK_FALSE(sqrt_mod(3, 7).has_value());
    CHECK(sqrt_mod(0, 5) == 0u);
    CHECK_THROWS_AS(sqrt_mod(4, 15), DomainError);
    for (u64 p : {3, 5, 7, 11, 13, 17, 97, 101, 257, 65537}) {
        for (u64 a = 0; a < std::min<u64>(p, 300); ++a) {
            auto roots = oracle::sqrts(static_cast<i64>(a), p);
            auto r = sqrt_mod(static_cast<i64>(a), p);
            if (roots.empty()) {
                CHECK_FALSE(r.has_value());
            } else {
                REQUIRE(r.has_value());
                CHECK(*r == roots.front());
            }
        }
    }
}

TEST_CASE("hensel_sqrt matches exhaustive search")
{
    auto sorted = [](std::vector<u64> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(sorted(hensel_sqrt(1, 3, 2)) == std::vector<u64>{1, 8});
    CHECK(sorted(hensel_sqrt(2, 7, 1)) == oracle::sqrts(2, 7));
    CHECK(sorted(hensel_sqrt(2, 7, 1)) == std::vector<u64>{3, 4});
    CHECK(hensel_sqrt(0, 5, 1) == std::vector<u64>{0});
    for (u64 p : {2, 3, 5, 7, 11}) {
        for (int k = 1; k <= 8; ++k) {
            u64 m = 1;
            for (int i = 0; i < k; ++i)
                m *= p;
            if (m >= 10'000)
                break;
            for (u64 a = 0; a < m; a += (m > 500 ? 7 : 1))
                CHECK_MESSAGE(sorted(hensel_sqrt(static_cast<i64>(a), p, k)) ==
                                      oracle::sqrts(static_cast<i64>(a), m),
                              "a=" << a << " p=" << p << " k=" << k);
        }
    }
}

TEST_CASE("crt")
{
    std::vector<Congruence> a = {{1, 2}, {2, 3}};
    CHECK(crt(a) == Congruence{5, 6});
    std::vector<Congruence> b = {{0, 5}};
    CHECK(crt(b) == Congruence{0, 5});
    std::vector<Congruence> c = {{3, 4}, {4, 9}, {0, 5}};
    i128 expect = -1;
    for (int x = 0; x < 180; ++x)
        if (x % 4 == 3 && x % 9 == 4 && x % 5 == 0)
            expect = x;
    CHECK(crt(c) == Congruence{expect, 180});
    std::vector<Congruence> bad = {{1, 4}, {1, 6}};
    CHECK_THROWS_AS(crt(bad), DomainError);
}

TEST_CASE("squarefree_in_ap")
{
    CHECK(squarefree_in_ap(30, 1, 4) == std::vector<u64>{1, 5, 13, 17, 21, 29});
    CHECK(squarefree_in_ap(10, 0, 4).empty());
    CHECK(squarefree_in_ap(3, 3, 4) == std::vector<u64>{3});
    for (auto [A, B] : std::vector<std::pair<i64, u64>>{{1, 4}, {3, 8}, {-1, 12}, {5, 36}, {0, 1}}) {
        std::vector<u64> expect;
        for (u64 D = 1; D <= 100'000; ++D)
            if (oracle::mod(static_cast<i64>(D) - A, B) == 0 && oracle::squarefree(D))
                expect.push_back(D);
        CHECK(squarefree_in_ap(100'000, A, B) == expect);
    }
}

TEST_CASE("segments of the square-free sieve concatenate")
{
    std::vector<u64> joined;
    for (u64 lo = 1; lo <= 50'000; lo += 7'919) {
        auto part = squarefree_in_ap(lo, std::min<u64>(lo + 7'918, 50'000), 3, 8);
        joined.insert(joined.end(), part.begin(), part.end());
    }
    CHECK(joined == squarefree_in_ap(50'000, 3, 8));
}

TEST_CASE("inverse_mod and SmallPrimeTable")
{
    for (u64 m = 2; m < 200; ++m)
        for (i64 a = -50; a < 50; ++a) {
            if (std::gcd(oracle::mod(a, m), m) != 1) {
                CHECK_THROWS_AS(inverse_mod(a, m), DomainError);
                continue;
            }
            u64 inv = inverse_mod(a, m);
            CHECK(inv < m);
            CHECK(oracle::mod(a, m) * inv % m == 1);
        }
    SmallPrimeTable t(10'000);
    for (u64 n = 1; n <= 10'000; ++n)
        CHECK(plain(t.factor(n)) == oracle::factor(n));
}
