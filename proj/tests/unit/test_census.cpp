#include "doctest.h"

#include <cmath>

#include "cldiv/census.hpp"
#include "cldiv/qform.hpp"
#include "oracles.hpp"

using namespace cldiv;

TEST_CASE("epsilon")
{
    CHECK(epsilon(4) == Rational(1, 2));
    CHECK(epsilon(6) == Rational(3, 8));
    CHECK(epsilon(8) == Rational(1, 4));
    CHECK(epsilon(10) == Rational(1, 4));
    CHECK(epsilon(12) == Rational(1, 6));
    CHECK(epsilon(14) == Rational(3, 16));
    for (int g = 4; g <= 100; g += 2) {
        i64 num = g % 4 == 0 ? 2 : 3;
        i64 den = g % 4 == 0 ? g : g + 2;
        i64 k = std::gcd(num, den);
        auto e = epsilon(g);
        CHECK(e.numerator() == num / k);
        CHECK(e.denominator() == den / k);
    }
    CHECK(to_string(epsilon(6)) == "3/8");
    CHECK_THROWS_AS(epsilon(5), DomainError);
    CHECK_THROWS_AS(epsilon(2), DomainError);
}

TEST_CASE("census_exact against per-D class numbers")
{
    u64 even = 0;
    for (u64 D = 1; D <= 100; ++D)
        if (oracle::squarefree(D) && oracle::class_number(oracle::disc_of(D)) % 2 == 0)
            ++even;
    CHECK(census_exact(100, 1, 1, 2) == even);
    CHECK(census_exact(2, 1, 1, 2) == 0);
    CHECK(census_exact(2, 1, 1, 4) == 0);

    u64 last = 0;
    for (u64 X = 100; X <= 5000; X += 700) {
        u64 n = census_exact(X, 1, 4, 4);
        CHECK(n >= last);
        last = n;
    }
    CHECK_THROWS_AS(census_exact(2'000'000, 1, 4, 4), BudgetError);
    CHECK(census_exact(3000, 1, 4, 4, 4) == census_exact(3000, 1, 4, 4, 1));
}

TEST_CASE("census_exact_grid matches separate runs")
{
    std::vector<u64> grid = {500, 2000, 9000};
    auto rows = census_exact_grid(grid, 3, 8, 6);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(rows[i].count == census_exact(grid[i], 3, 8, 6));
        CHECK(rows[i].squarefree == squarefree_in_ap(grid[i], 3, 8).size());
        CHECK(rows[i].count <= rows[i].squarefree);
    }
    CHECK_THROWS_AS(census_exact_grid({100, 50}, 1, 4, 4), DomainError);
}

TEST_CASE("construction census for g = 4")
{
    auto c = census_construction(10'000, 0, 1, 4, 4);
    CHECK(c.S > 0);
    CHECK(c.S <= c.sumR);
    CHECK(c.oracle_failures == 0);
    CHECK(static_cast<double>(c.S) * c.sumR2 >= static_cast<double>(c.sumR) * c.sumR);
    u64 exact = census_exact(10'000, 1, 4, 4);
    CHECK(c.S <= exact);
    u64 sum = 0, sum2 = 0;
    for (auto [D, r] : c.multiplicity) {
        CHECK(D >= min_witness_D);
        CHECK(oracle::squarefree(D));
        CHECK(D % 4 == 1);
        sum += r;
        sum2 += r * r;
    }
    CHECK(sum == c.sumR);
    CHECK(sum2 == c.sumR2);
    CHECK(c.multiplicity.size() == c.S);

    ConstructionOptions sharded;
    sharded.shards = 4;
    auto d = census_construction(10'000, 0, 1, 4, 4, sharded);
    CHECK(d.multiplicity == c.multiplicity);
}

TEST_CASE("construction census for g = 6 over all triples")
{
    ConstructionOptions opt;
    opt.mode = WitnessMode::all_triples;
    u64 total = 0;
    for (u64 X = 1024; X <= 100'000; X = X * 11 / 10) {
        auto c = census_construction(X, max_T(X, 6), 1, 4, 6, opt);
        CHECK(c.oracle_failures == 0);
        for (auto [D, r] : c.multiplicity) {
            CHECK(has_element_of_order(discriminant_of(D), 6));
            CHECK(has_element_of_order(discriminant_of(D), 3));
        }
        total += c.S;
    }
    CHECK(total > 0);
}

TEST_CASE("report chain and CSV")
{
    CensusConfig cfg;
    cfg.g = 4;
    cfg.A = 1;
    cfg.B = 4;
    cfg.grid = {1000, 10'000};
    auto rep = census_report(cfg);
    REQUIRE(rep.rows.size() == 2);
    for (auto const & r : rep.rows) {
        CHECK(r.chain_holds);
        CHECK(r.cs_bound <= r.S);
        CHECK(r.S <= r.exact);
        CHECK(r.exact <= r.squarefree);
    }
    CHECK(rep.rows[0].exact == 90);
    CHECK(rep.rows[1].exact == 1039);
    auto csv = to_csv(rep);
    CHECK(csv.rfind("g,A,B,X,T,exact,squarefree,S,sumR,sumR2,cs_bound,non_squarefree,"
                    "below_min,g1_only,oracle_failures,chain_holds,epsilon_g,"
                    "fitted_exponent,fitted_witness_exponent\n",
                    0) == 0);
    cfg.construction.shards = 3;
    CHECK(to_csv(census_report(cfg)) == csv);
    CHECK(to_json(census_report(cfg)) == to_json(rep));
}

TEST_CASE("n_split_diagnostic partitions the tuples")
{
    auto l = lift_progression(1, 4, 6, ConstructionCase::case1);
    for (u64 X : {30'000ull, 300'000ull, 3'000'000ull}) {
        u64 T = max_T(X, 6);
        auto tuples = gen_case1_class(X, T, 6, l.A_prime, l.B_prime);
        auto s = n_split_diagnostic(X, T, 6, tuples);
        CHECK(s.total == tuples.size());
        CHECK(s.N1 == s.squarefree + s.N2 + s.N3);
        CHECK(s.N1 + s.small == s.total);
        CHECK(s.phi_average >= 0);
    }
    auto w = lemma41_triple(l.A_prime, l.B_prime, 3);
    auto z = n_split_diagnostic(100, 1, 6, w);
    CHECK(z.total == 0);
    CHECK(z.N1 == 0);
    CHECK(z.N2 == 0);
    CHECK(z.N3 == 0);
}

TEST_CASE("fit_exponent")
{
    std::vector<std::pair<double, double>> pts;
    for (int k = 2; k <= 7; ++k)
        pts.emplace_back(std::pow(10.0, k), 5.0 * std::pow(10.0, 0.625 * k));
    CHECK(std::abs(fit_exponent(pts) - 0.625) < 1e-9);
    CHECK(std::abs(fit_exponent({{10, 7}, {100, 7}, {1000, 7}})) < 1e-12);
    CHECK_THROWS_AS(fit_exponent({{10, 7}}), DomainError);
    CHECK_THROWS_AS(fit_exponent({{10, 7}, {100, 0}}), DomainError);
}
