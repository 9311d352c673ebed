#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "cldiv/construct.hpp"

namespace cldiv {

using Rational = boost::rational<i64>;

/// "num/den", or "num" when den = 1.
std::string to_string(Rational const & r);

/// 2/g when 4 | g, 3/(g+2) when g = 2 (mod 4).
Rational epsilon(int g);

inline constexpr u64 default_census_cap = 1'000'000;

struct ExactCensus {
    u64 X;
    u64 count;       // square-free D in the class with an element of order g
    u64 squarefree;  // all square-free D in the class
};

/*
 * Ground-truth counts of N_g(X; A, B) for every X in the ascending grid,
 * one pass over the class up to max(grid).  Throws BudgetError when
 * max(grid) > cap.
 */
std::vector<ExactCensus> census_exact_grid(std::vector<u64> const & grid, i64 A, u64 B,
                                           int g, unsigned shards = 1,
                                           u64 cap = default_census_cap);

u64 census_exact(u64 X, i64 A, u64 B, int g, unsigned shards = 1,
                 u64 cap = default_census_cap);

/// Which residue classes seed the case-1 generator.
enum class WitnessMode {
    single,      // the one triple built prime by prime
    all_triples  // every valid triple class modulo B'
};

/// Smallest D a construction witness may certify.
inline constexpr u64 min_witness_D = 63;

struct ConstructionCount {
    ConstructionCase which;
    ProgressionLift lift;
    u64 T = 0;             // case 1 only
    u64 emitted = 0;       // tuples produced by the generator
    u64 non_squarefree = 0;
    u64 below_min = 0;     // square-free D < 63
    u64 outside_class = 0; // D not = A (mod B); nonzero only with ClassSign::minus
    u64 g1_only = 0;       // case 1: fewer than two odd primes, certifies order g1 only
    u64 S = 0;             // distinct certified D
    u64 sumR = 0;
    u64 sumR2 = 0;
    u64 oracle_failures = 0;  // certified D failing has_element_of_order
    std::map<u64, u64> multiplicity;
};

struct ConstructionOptions {
    ClassSign sign = ClassSign::plus;
    WitnessMode mode = WitnessMode::single;
    bool verify = true;  // re-check every certified D with the class-group oracle
    unsigned shards = 1;
};

/*
 * Runs the case matching g (case 1 for g = 2 mod 4 with the given T,
 * case 2 for 4 | g; T is ignored there) and tallies multiplicities R(D)
 * over square-free 63 <= D <= X.
 */
ConstructionCount census_construction(u64 X, u64 T, i64 A, u64 B, int g,
                                      ConstructionOptions const & opt = {});

struct SplitDiagnostic {
    u64 total = 0;
    u64 squarefree = 0;
    u64 small = 0;  // smallest p with p^2 | D has p <= log X
    u64 N1 = 0;     // squarefree + N2 + N3
    u64 N2 = 0;     // log X < p <= Z
    u64 N3 = 0;     // p > Z
    double Z = 0;
    double MN_over_T = 0;
    double phi_average = 0;  // mean of #{n mod t^2 : n^2 = m^g1} over box pairs
    u64 phi_pairs = 0;
};

SplitDiagnostic n_split_diagnostic(u64 X, u64 T, int g,
                                   std::vector<Case1Tuple> const & tuples);
SplitDiagnostic n_split_diagnostic(u64 X, u64 T, int g, TripleWitness const & w);

/// Least-squares slope of log(count) against log(X).
double fit_exponent(std::vector<std::pair<double, double>> const & points);

struct CountRow {
    u64 X;
    u64 T;
    u64 exact;
    u64 squarefree;
    u64 S;
    u64 sumR;
    u64 sumR2;
    u64 cs_bound;  // ceil(sumR^2 / sumR2), 0 when sumR2 = 0
    u64 non_squarefree;
    u64 below_min;
    u64 g1_only;
    u64 oracle_failures;
    bool chain_holds;
};

enum class TPolicy { default_T, max_T, fixed };

struct CensusConfig {
    int g = 4;
    i64 A = 1;
    u64 B = 4;
    std::vector<u64> grid;
    TPolicy t_policy = TPolicy::default_T;
    u64 T = 0;  // used with TPolicy::fixed
    ConstructionOptions construction;
    u64 cap = default_census_cap;
    bool with_exact = true;
};

struct CountReport {
    int g;
    i64 A;
    u64 B;
    ProgressionLift lift;
    std::vector<CountRow> rows;
    std::optional<double> fitted_exponent;  // from the exact counts
    std::optional<double> fitted_witness_exponent;
    Rational epsilon_g;
};

CountReport census_report(CensusConfig const & cfg);

/// One header line plus one line per grid point.
std::string to_csv(CountReport const & r);
/// JSON object with the CSV fields as arrays-of-rows plus scalars.
std::string to_json(CountReport const & r, std::string const & config_echo = "");

}  // namespace cldiv
