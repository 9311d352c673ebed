#include "doctest.h"

#include <random>

#include "cldiv/qform.hpp"
#include "oracles.hpp"

using namespace cldiv;

namespace {

std::vector<u64> squarefree_up_to(u64 n)
{
    std::vector<u64> out;
    for (u64 D = 1; D <= n; ++D)
        if (oracle::squarefree(D))
            out.push_back(D);
    return out;
}

// Order by repeated composition, no use of h.
u64 naive_order(QForm const & f)
{
    QForm id = identity_form(f.discriminant());
    QForm x = reduce(f);
    u64 k = 1;
    while (x != id) {
        x = compose(x, f);
        ++k;
    }
    return k;
}

}  // namespace

TEST_CASE("discriminant_of")
{
    CHECK(discriminant_of(3).value == -3);
    CHECK(discriminant_of(1).value == -4);
    CHECK(discriminant_of(97).value == -388);
    CHECK(discriminant_of(97).source_D == 97);
    CHECK_THROWS_AS(discriminant_of(12), DomainError);
    CHECK_THROWS_AS(discriminant_of(0), DomainError);
    CHECK(discriminant_from_value(-23).source_D == 23);
    CHECK(discriminant_from_value(-20).source_D == 5);
    CHECK_THROWS_AS(discriminant_from_value(-16), DomainError);
    CHECK_THROWS_AS(discriminant_from_value(5), DomainError);
}

TEST_CASE("reduce")
{
    CHECK(reduce({1, 1, 6}) == QForm{1, 1, 6});
    auto [a, b, c] = oracle::reduce(6, 1, -23);
    CHECK(reduce({6, 1, 1}) == QForm{a, b, c});
    CHECK(reduce({6, 1, 1}) == QForm{1, 1, 6});
    CHECK(reduce({2, -1, 3}) == QForm{2, -1, 3});
    CHECK(reduce({3, 1, 2}) == QForm{2, -1, 3});
    CHECK(reduce({3, -1, 2}) == QForm{2, 1, 3});
    CHECK(reduce({2, -2, 3}) == QForm{2, 2, 3});
    CHECK_THROWS_AS(reduce({1, 3, 1}), DomainError);
}

TEST_CASE("reduction is idempotent and invariant under unimodular changes")
{
    std::mt19937_64 rng(11);
    auto Ds = squarefree_up_to(25'000);
    std::uniform_int_distribution<std::size_t> pickD(0, Ds.size() - 1);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int trial = 0; trial < 10'000; ++trial) {
        auto disc = discriminant_of(Ds[pickD(rng)]);
        auto forms = reduced_forms(disc);
        std::uniform_int_distribution<std::size_t> pickF(0, forms.size() - 1);
        QForm f = forms[pickF(rng)];
        // f(px + qy, rx + sy) with ps - qr = 1
        i64 p, q, r, s;
        do {
            p = small(rng);
            q = small(rng);
            r = small(rng);
            s = small(rng);
        } while (p * s - q * r != 1);
        QForm t{f.a * p * p + f.b * p * r + f.c * r * r,
                2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s,
                f.a * q * q + f.b * q * s + f.c * s * s};
        REQUIRE(t.discriminant() == disc.value);
        CHECK(reduce(t) == f);
        CHECK(reduce(reduce(t)) == reduce(t));
    }
}

TEST_CASE("composition in discriminant -23")
{
    QForm f{2, 1, 3};
    CHECK(compose(f, f) == QForm{2, -1, 3});
    CHECK(compose(identity_form(-23), f) == f);
    CHECK(compose(f, inverse(f)) == identity_form(-23));
    CHECK(element_order(f, factorize(3)) == 3);
    CHECK(element_order(identity_form(-23), factorize(3)) == 1);
    CHECK_THROWS_AS(compose(f, QForm{1, 1, 5}), DomainError);
}

TEST_CASE("group laws on full multiplication tables")
{
    for (u64 D : squarefree_up_to(500)) {
        auto disc = discriminant_of(D);
        if (-disc.value > 2000)
            continue;
        auto forms = reduced_forms(disc);
        QForm id = identity_form(disc.value);
        for (auto const & f : forms) {
            CHECK(compose(id, f) == f);
            CHECK(compose(f, inverse(f)) == id);
            for (auto const & g : forms) {
                QForm fg = compose(f, g);
                CHECK(fg.is_reduced());
                CHECK(fg == compose(g, f));
                for (auto const & k : forms)
                    CHECK(compose(fg, k) == compose(f, compose(g, k)));
            }
        }
    }
}

TEST_CASE("class numbers")
{
    CHECK(class_number(discriminant_of(1)) == 1);
    CHECK(class_number(discriminant_of(23)) == 3);
    CHECK(class_number(discriminant_of(47)) == 5);
    CHECK(reduced_forms(discriminant_of(23)) ==
          std::vector<QForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
    for (u64 D : squarefree_up_to(2500)) {
        auto disc = discriminant_of(D);
        CHECK_MESSAGE(class_number(disc) == oracle::class_number(disc.value), D);
    }
}

TEST_CASE("element orders divide h and match repeated composition")
{
    for (u64 D : squarefree_up_to(2500)) {
        auto disc = discriminant_of(D);
        if (-disc.value > 10'000)
            continue;
        auto s = class_group(disc);
        auto hf = factorize(s.h);
        for (auto const & f : s.reduced_forms) {
            u64 o = element_order(f, hf);
            CHECK(s.h % o == 0);
            CHECK(s.exponent % o == 0);
            if (D < 600)
                CHECK(o == naive_order(f));
            if (f.is_ambiguous() && f != identity_form(disc.value))
                CHECK(o == 2);
        }
    }
}

TEST_CASE("has_element_of_order")
{
    CHECK(has_element_of_order(discriminant_of(23), 3));
    CHECK_FALSE(has_element_of_order(discriminant_of(1), 2));
    CHECK(has_element_of_order(discriminant_from_value(-84), 2));
    for (u64 D : squarefree_up_to(3000)) {
        auto disc = discriminant_of(D);
        auto s = class_group(disc);
        for (u64 g = 2; g <= 12; ++g) {
            bool has = has_element_of_order(disc, g);
            CHECK(has == (s.exponent % g == 0));
            if (has)
                CHECK(s.h % g == 0);
        }
    }
}

TEST_CASE("two-torsion follows genus theory")
{
    for (u64 D : squarefree_up_to(10'000)) {
        auto disc = discriminant_of(D);
        if (-disc.value > 10'000)
            continue;
        auto s = class_group(disc);
        int mu = static_cast<int>(oracle::factor(static_cast<u64>(-disc.value)).size());
        CHECK(genus_character_count(disc) == mu);
        CHECK(s.two_torsion == (u64{1} << (mu - 1)));
    }
}
