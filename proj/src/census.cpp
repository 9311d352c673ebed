#include "cldiv/census.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "json.hpp"

#include "cldiv/qform.hpp"
#include "cldiv/shard.hpp"

namespace cldiv {

std::string to_string(Rational const & r)
{
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational epsilon(int g)
{
    if (g < 4 || g % 2 != 0)
        throw DomainError("epsilon: g must be even and >= 4");
    if (g % 4 == 0)
        return Rational(2, g);
    return Rational(3, g + 2);
}

namespace {

void check_class(i64 A, u64 B, char const * who)
{
    if (B == 0)
        throw DomainError(std::string(who) + ": modulus must be positive");
    u64 G = gcd(static_cast<u64>(mod(A, B)), B);
    if (!is_squarefree(G))
        throw DomainError(std::string(who) + ": gcd(A, B) is not square-free");
}

std::string fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

int odd_prime_count(u64 D)
{
    int k = 0;
    for (auto const & pp : factorize(D))
        if (pp.prime != 2)
            ++k;
    return k;
}

}  // namespace

// ------------------------------------------------------------ exact census

std::vector<ExactCensus> census_exact_grid(std::vector<u64> const & grid, i64 A, u64 B,
                                           int g, unsigned shards, u64 cap)
{
    if (grid.empty())
        throw DomainError("census_exact: empty grid");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw DomainError("census_exact: grid must be ascending");
    if (g < 1)
        throw DomainError("census_exact: g must be positive");
    check_class(A, B, "census_exact");
    u64 X = grid.back();
    if (X > cap)
        throw BudgetError("census_exact: X = " + std::to_string(X) + " exceeds the cap " +
                          std::to_string(cap) + " (raise it with --cap)");
    SmallPrimeTable table(isqrt(static_cast<u128>(4) * X / 3) + 2);
    struct Part {
        std::vector<u64> squarefree, hits;
    };
    auto segments = split_range(1, X, std::max(1u, shards));
    auto parts = run_sharded(segments.size(), shards, [&](std::size_t i) {
        Part part;
        part.squarefree = squarefree_in_ap(segments[i].lo, segments[i].hi, A, B);
        for (u64 D : part.squarefree)
            if (has_element_of_order(discriminant_of(D), static_cast<u64>(g), &table))
                part.hits.push_back(D);
        return part;
    });
    std::vector<u64> sf, hits;
    for (auto const & p : parts) {
        sf.insert(sf.end(), p.squarefree.begin(), p.squarefree.end());
        hits.insert(hits.end(), p.hits.begin(), p.hits.end());
    }
    std::vector<ExactCensus> out;
    for (u64 x : grid) {
        auto c = std::upper_bound(hits.begin(), hits.end(), x) - hits.begin();
        auto s = std::upper_bound(sf.begin(), sf.end(), x) - sf.begin();
        out.push_back({x, static_cast<u64>(c), static_cast<u64>(s)});
    }
    return out;
}

u64 census_exact(u64 X, i64 A, u64 B, int g, unsigned shards, u64 cap)
{
    return census_exact_grid({X}, A, B, g, shards, cap).front().count;
}

// ------------------------------------------------------ construction census

ConstructionCount census_construction(u64 X, u64 T, i64 A, u64 B, int g,
                                      ConstructionOptions const & opt)
{
    if (g < 4 || g % 2 != 0)
        throw DomainError("census_construction: g must be even and >= 4");
    check_class(A, B, "census_construction");
    ConstructionCount out;
    out.which = g % 4 == 0 ? ConstructionCase::case2 : ConstructionCase::case1;
    out.lift = lift_progression(A, B, g, out.which, opt.sign);
    i64 target = apply_sign(opt.sign, out.lift.A_prime);
    unsigned shards = std::max(1u, opt.shards);
    int g1 = g / 2;

    std::vector<std::vector<u64>> parts;
    if (out.which == ConstructionCase::case2) {
        auto sw = is_special(target, out.lift.B_prime, g);
        if (!sw)
            throw InvariantError("census_construction: lifted class is not special");
        u64 m_max = static_cast<u64>(iroot(X, g1));
        auto segments = split_range(1, m_max, shards);
        parts = run_sharded(segments.size(), shards, [&](std::size_t i) {
            std::vector<u64> Ds;
            for (auto const & c : gen_case2(X, g, *sw, segments[i].lo, segments[i].hi))
                Ds.push_back(c.D);
            return Ds;
        });
    } else {
        out.T = T == 0 ? default_T(X, g) : T;
        std::optional<TripleWitness> single;
        if (opt.mode == WitnessMode::single)
            single = lemma41_triple(target, out.lift.B_prime, g1);
        auto segments = split_range(out.T + 1, 2 * out.T, shards);
        parts = run_sharded(segments.size(), shards, [&](std::size_t i) {
            std::vector<u64> Ds;
            auto tuples = single ? gen_case1(X, out.T, g, *single, segments[i].lo,
                                             segments[i].hi)
                                 : gen_case1_class(X, out.T, g, target, out.lift.B_prime,
                                                   segments[i].lo, segments[i].hi);
            for (auto const & c : tuples)
                Ds.push_back(c.D);
            return Ds;
        });
    }

    u64 a0 = static_cast<u64>(mod(A, B));
    std::map<u64, u64> g1_only;
    for (auto const & part : parts)
        for (u64 D : part) {
            ++out.emitted;
            if (D > X)
                throw InvariantError("census_construction: emitted D above X");
            if (D % B != a0) {
                ++out.outside_class;
                continue;
            }
            if (!is_squarefree(D)) {
                ++out.non_squarefree;
                continue;
            }
            if (D < min_witness_D) {
                ++out.below_min;
                continue;
            }
            if (out.which == ConstructionCase::case1 && odd_prime_count(D) < 2) {
                ++g1_only[D];
                continue;
            }
            ++out.multiplicity[D];
        }
    out.g1_only = g1_only.size();
    for (auto const & [D, R] : out.multiplicity) {
        ++out.S;
        out.sumR += R;
        out.sumR2 += R * R;
    }
    if (opt.verify) {
        SmallPrimeTable table(isqrt(static_cast<u128>(4) * X / 3) + 2);
        for (auto const & [D, R] : out.multiplicity)
            if (!has_element_of_order(discriminant_of(D), static_cast<u64>(g), &table))
                ++out.oracle_failures;
        for (auto const & [D, R] : g1_only)
            if (!has_element_of_order(discriminant_of(D), static_cast<u64>(g1), &table))
                ++out.oracle_failures;
    }
    return out;
}

// -------------------------------------------------------------- N1/N2/N3

SplitDiagnostic n_split_diagnostic(u64 X, u64 T, int g,
                                   std::vector<Case1Tuple> const & tuples)
{
    SplitDiagnostic d;
    BoxParams box = box_params(X, T, g);
    double logX = std::log(static_cast<double>(X));
    d.Z = std::cbrt(static_cast<double>(X) / static_cast<double>(std::max<u64>(T, 1))) *
          std::pow(logX, 2.0 / 3.0);
    d.MN_over_T = T == 0 ? 0.0
                         : static_cast<double>(box.M) * static_cast<double>(box.N) /
                                   static_cast<double>(T);
    for (auto const & c : tuples) {
        ++d.total;
        u64 p = 0;
        for (auto const & pp : factorize(c.D))
            if (pp.exponent >= 2) {
                p = static_cast<u64>(pp.prime);
                break;
            }
        if (p == 0)
            ++d.squarefree;
        else if (static_cast<double>(p) <= logX)
            ++d.small;
        else if (static_cast<double>(p) <= d.Z)
            ++d.N2;
        else
            ++d.N3;
    }
    d.N1 = d.squarefree + d.N2 + d.N3;

    // phi_m(t^2) averaged over coprime pairs of the boxes, capped for cost
    constexpr u64 pair_cap = 200'000;
    double phi_sum = 0;
    for (u64 t = T + 1; t <= 2 * T && d.phi_pairs < pair_cap; ++t) {
        Factorization ft = factorize(t);
        for (u64 m = box.M + 1; m <= 2 * box.M && d.phi_pairs < pair_cap; ++m) {
            if (gcd(m, t) != 1)
                continue;
            u64 phi = 1;
            for (auto const & pp : ft) {
                u64 p = static_cast<u64>(pp.prime);
                int k = 2 * pp.exponent;
                u64 pk = 1;
                for (int i = 0; i < k; ++i)
                    pk *= p;
                u64 mg = powmod(m % pk, static_cast<u64>(box.g1), pk);
                phi *= hensel_sqrt_prime(mg, p, k).size();
            }
            phi_sum += static_cast<double>(phi);
            ++d.phi_pairs;
        }
    }
    if (d.phi_pairs > 0)
        d.phi_average = phi_sum / static_cast<double>(d.phi_pairs);
    return d;
}

SplitDiagnostic n_split_diagnostic(u64 X, u64 T, int g, TripleWitness const & w)
{
    return n_split_diagnostic(X, T, g, gen_case1(X, T, g, w));
}

// ------------------------------------------------------------------- fit

double fit_exponent(std::vector<std::pair<double, double>> const & points)
{
    std::vector<std::pair<double, double>> logs;
    for (auto const & [x, c] : points)
        if (x > 0 && c > 0)
            logs.emplace_back(std::log(x), std::log(c));
    if (logs.size() < 2)
        throw DomainError("fit_exponent: need at least two points with positive counts");
    double n = static_cast<double>(logs.size());
    double sx = 0, sy = 0;
    for (auto const & [x, y] : logs) {
        sx += x;
        sy += y;
    }
    double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
    for (auto const & [x, y] : logs) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0)
        throw DomainError("fit_exponent: all X values coincide");
    return sxy / sxx;
}

// ---------------------------------------------------------------- report

CountReport census_report(CensusConfig const & cfg)
{
    if (cfg.grid.empty())
        throw DomainError("census: empty grid");
    if (!std::is_sorted(cfg.grid.begin(), cfg.grid.end()) ||
        std::adjacent_find(cfg.grid.begin(), cfg.grid.end()) != cfg.grid.end())
        throw DomainError("census: grid must be strictly ascending");
    CountReport rep{cfg.g, cfg.A, cfg.B, {}, {}, std::nullopt, std::nullopt,
                    epsilon(cfg.g)};
    if (cfg.B == 0)
        throw DomainError("census: modulus must be positive");
    if (cfg.with_exact && cfg.grid.back() > cfg.cap)
        throw BudgetError("census: X = " + std::to_string(cfg.grid.back()) +
                          " exceeds the cap " + std::to_string(cfg.cap) +
                          " (raise it with --cap)");
    if (!is_squarefree(gcd(static_cast<u64>(mod(cfg.A, cfg.B)), cfg.B))) {
        // a square divides every member: the class has no square-free D at all
        rep.lift = {static_cast<i64>(mod(cfg.A, cfg.B)), cfg.B, 1};
        for (u64 X : cfg.grid) {
            CountRow row{};
            row.X = X;
            row.chain_holds = true;
            rep.rows.push_back(row);
        }
        return rep;
    }
    std::vector<ExactCensus> exact;
    if (cfg.with_exact)
        exact = census_exact_grid(cfg.grid, cfg.A, cfg.B, cfg.g, cfg.construction.shards,
                                  cfg.cap);
    bool case1 = cfg.g % 4 == 2;
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        u64 X = cfg.grid[i];
        u64 T = 0;
        if (case1) {
            switch (cfg.t_policy) {
            case TPolicy::default_T: T = default_T(X, cfg.g); break;
            case TPolicy::max_T: T = std::max<u64>(1, max_T(X, cfg.g)); break;
            case TPolicy::fixed: T = cfg.T; break;
            }
            if (T == 0)
                throw DomainError("census: T must be positive");
        }
        auto cc = census_construction(X, T, cfg.A, cfg.B, cfg.g, cfg.construction);
        rep.lift = cc.lift;
        CountRow row{};
        row.X = X;
        row.T = cc.T;
        row.S = cc.S;
        row.sumR = cc.sumR;
        row.sumR2 = cc.sumR2;
        if (cc.sumR2 > 0) {
            u128 num = static_cast<u128>(cc.sumR) * cc.sumR;
            row.cs_bound = static_cast<u64>((num + cc.sumR2 - 1) / cc.sumR2);
        }
        row.non_squarefree = cc.non_squarefree;
        row.below_min = cc.below_min;
        row.g1_only = cc.g1_only;
        row.oracle_failures = cc.oracle_failures;
        if (cfg.with_exact) {
            row.exact = exact[i].count;
            row.squarefree = exact[i].squarefree;
        } else {
            row.squarefree = squarefree_in_ap(X, cfg.A, cfg.B).size();
        }
        row.chain_holds = row.cs_bound <= row.S && row.oracle_failures == 0 &&
                          (cfg.with_exact ? row.S <= row.exact && row.exact <= row.squarefree
                                          : row.S <= row.squarefree);
        rep.rows.push_back(row);
    }
    std::vector<std::pair<double, double>> pe, pw;
    for (auto const & r : rep.rows) {
        pe.emplace_back(static_cast<double>(r.X), static_cast<double>(r.exact));
        pw.emplace_back(static_cast<double>(r.X), static_cast<double>(r.S));
    }
    auto try_fit = [](auto const & pts) -> std::optional<double> {
        try {
            return fit_exponent(pts);
        } catch (DomainError const &) {
            return std::nullopt;
        }
    };
    if (cfg.with_exact)
        rep.fitted_exponent = try_fit(pe);
    rep.fitted_witness_exponent = try_fit(pw);
    return rep;
}

namespace {

char const * const csv_columns[] = {
        "g",        "A",     "B",          "X",          "T",
        "exact",    "squarefree", "S",     "sumR",       "sumR2",
        "cs_bound", "non_squarefree", "below_min", "g1_only", "oracle_failures",
        "chain_holds", "epsilon_g", "fitted_exponent", "fitted_witness_exponent"};

std::string opt_fixed(std::optional<double> const & v)
{
    return v ? fixed6(*v) : "";
}

}  // namespace

std::string to_csv(CountReport const & r)
{
    std::string out;
    for (std::size_t i = 0; i < std::size(csv_columns); ++i) {
        if (i)
            out += ',';
        out += csv_columns[i];
    }
    out += '\n';
    for (auto const & row : r.rows) {
        std::string cells[] = {std::to_string(r.g),
                               std::to_string(r.A),
                               std::to_string(r.B),
                               std::to_string(row.X),
                               std::to_string(row.T),
                               std::to_string(row.exact),
                               std::to_string(row.squarefree),
                               std::to_string(row.S),
                               std::to_string(row.sumR),
                               std::to_string(row.sumR2),
                               std::to_string(row.cs_bound),
                               std::to_string(row.non_squarefree),
                               std::to_string(row.below_min),
                               std::to_string(row.g1_only),
                               std::to_string(row.oracle_failures),
                               row.chain_holds ? "true" : "false",
                               to_string(r.epsilon_g),
                               opt_fixed(r.fitted_exponent),
                               opt_fixed(r.fitted_witness_exponent)};
        for (std::size_t i = 0; i < std::size(cells); ++i) {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    }
    return out;
}

std::string to_json(CountReport const & r, std::string const & config_echo)
{
    using nlohmann::ordered_json;
    ordered_json j;
    if (!config_echo.empty())
        j["config"] = ordered_json::parse(config_echo);
    j["g"] = r.g;
    j["A"] = r.A;
    j["B"] = r.B;
    j["A_prime"] = r.lift.A_prime;
    j["B_prime"] = r.lift.B_prime;
    j["r"] = r.lift.r;
    j["epsilon_g"] = to_string(r.epsilon_g);
    j["fitted_exponent"] = opt_fixed(r.fitted_exponent);
    j["fitted_witness_exponent"] = opt_fixed(r.fitted_witness_exponent);
    ordered_json rows = ordered_json::array();
    for (auto const & row : r.rows)
        rows.push_back({{"X", row.X},
                        {"T", row.T},
                        {"exact", row.exact},
                        {"squarefree", row.squarefree},
                        {"S", row.S},
                        {"sumR", row.sumR},
                        {"sumR2", row.sumR2},
                        {"cs_bound", row.cs_bound},
                        {"non_squarefree", row.non_squarefree},
                        {"below_min", row.below_min},
                        {"g1_only", row.g1_only},
                        {"oracle_failures", row.oracle_failures},
                        {"chain_holds", row.chain_holds}});
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

}  // namespace cldiv
