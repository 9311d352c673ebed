#pragma once

#include <array>
#include <climits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cldiv/census.hpp"
#include "cldiv/qform.hpp"

namespace cldiv {

using BigInt = boost::multiprecision::cpp_int;

struct WeierstrassInvariants {
    BigInt b2, b4, b6, b8, c4, c6;
    BigInt discriminant;
    BigInt j_num, j_den;  // j = j_num / j_den in lowest terms, j_den > 0
};

/// Standard b/c invariants, discriminant and j; singular curves throw DomainError.
WeierstrassInvariants weierstrass_invariants(std::array<i64, 5> const & a);

/// Valuation of j when j = 0.
inline constexpr int j_valuation_infinite = INT_MAX;

/// Conductor and root number of a quadratic twist E_d, taken as data.
struct TwistData {
    i64 d;
    Factorization conductor;
    int sign;
};

struct CurveData {
    std::string label;
    int p = 0;
    std::array<i64, 5> a{};
    Factorization conductor;
    int sign = 1;
    std::map<u64, int> disc_valuations;  // every prime dividing the discriminant
    std::map<u64, int> j_valuations;     // same primes; negative allowed
    std::set<u64> tate;                  // split multiplicative primes
    std::optional<std::pair<i64, i64>> torsion_point;
    std::vector<TwistData> twists;

    /// v_q(j), 0 for primes not dividing the discriminant.
    int j_valuation(u64 q) const;
    int disc_valuation(u64 q) const;
    bool is_tate(u64 q) const { return tate.count(q) != 0; }
    /// Primes q != p with v_q(N) = 1 and (v_q(j) >= 0 or Tate).
    int alpha() const;
    TwistData const * twist(i64 d) const;
};

/// Fills the valuation maps from the a-invariants.
CurveData make_curve(std::string label, int p, std::array<i64, 5> a,
                     Factorization conductor, int sign, std::set<u64> tate,
                     std::optional<std::pair<i64, i64>> point = std::nullopt);

/*
 * Consistency problems of a curve record, empty when none: recomputed
 * valuations differ from the stored ones, a conductor prime missing from the
 * discriminant, a torsion point off the curve or of the wrong order.
 */
std::vector<std::string> validate(CurveData const & c);

/// True when P lies on the curve.
bool on_curve(std::array<i64, 5> const & a, std::pair<i64, i64> const & P);
/// Exact order of P in E(Q) if at most `limit`, else 0.
int point_order(std::array<i64, 5> const & a, std::pair<i64, i64> const & P, int limit = 16);

/// Odd q | N with q = -1 (mod p), v_q(disc) != 0 (mod p) and v_q(j) < 0.
std::set<u64> s_tilde(CurveData const & c);

/// Which integer plays Frey's d, and which field is twisted, for a D > 0.
enum class TwistConvention {
    negative,  // d = -D, twist by Q(sqrt(-D)); matches Cl(-D)
    positive   // d = D
};

inline i64 frey_d(i64 D, TwistConvention conv)
{
    return conv == TwistConvention::negative ? -D : D;
}

/// Discriminant of Q(sqrt(d)) for square-free d != 1.
i64 fundamental_discriminant(i64 d);

/*
 * Frey's conditions for a square-free d coprime to p N: (1) 2 | N implies
 * d = 3 (mod 4); (2) for q | N, q != 2, p: (d/q) = -1 if Tate at q or
 * v_q(j) >= 0, else +1; (3) v_p(j) < 0 implies (d/p) = -1.
 */
bool frey_admissible(CurveData const & c, i64 d);

/// sign(E) * chi(-N) for the character of Q(sqrt(frey_d(D))).
int twist_sign(CurveData const & c, i64 D, TwistConvention conv = TwistConvention::negative);

/// Same, routed through E_d: sign(E_d) * chi(-N(E_d)) for Q(sqrt(frey_d(D) / d)).
int twist_sign_via(TwistData const & t, i64 D,
                   TwistConvention conv = TwistConvention::negative);

enum class CorollaryCase { case1 = 1, case2 = 2, case3 = 3 };

struct LocalCondition {
    u64 prime;
    u64 modulus;
    u64 residue;
    std::string reason;
};

struct BuiltClass {
    i64 A;
    u64 B;
    CorollaryCase which;
    std::optional<i64> d;
    TwistConvention conv;
    u64 representative;  // smallest square-free member
    std::vector<LocalCondition> conditions;
};

class UnsatisfiableClass : public DomainError {
  public:
    UnsatisfiableClass(std::string const & what, u64 prime)
        : DomainError(what), prime_(prime)
    {
    }
    u64 prime() const { return prime_; }

  private:
    u64 prime_;
};

/*
 * Congruence class whose square-free members D satisfy Frey's conditions
 * for frey_d(D) and give twists of sign +1.  Residues are fixed prime by
 * prime; the first combination (ascending residues, ascending primes) whose
 * sign is +1 wins.  Throws UnsatisfiableClass naming the offending prime.
 */
BuiltClass build_class(CurveData const & c, CorollaryCase which,
                       std::optional<i64> d = std::nullopt,
                       TwistConvention conv = TwistConvention::negative);

/// Frey admissibility plus twist sign +1 for one member of a built class.
struct MemberCheck {
    bool in_class, squarefree, admissible;
    int sign;
    bool ok() const { return in_class && squarefree && admissible && sign == 1; }
};

MemberCheck check_member(CurveData const & c, BuiltClass const & cls, u64 D);

struct SampleReport {
    u64 checked = 0;
    u64 failures = 0;
    std::optional<u64> first_failure;
};

/// Random square-free members of the class below `bound`, drawn from a seeded generator.
SampleReport sample_class(CurveData const & c, BuiltClass const & cls, u64 count,
                          u64 seed, u64 bound = 1'000'000'000);

/// 1/2 + 3/(2p + 2) for p in {3, 5, 7}.
Rational corollary_exponent(int p);

struct HypothesisCheck {
    std::string name;
    bool holds;
    std::string detail;
};

std::vector<HypothesisCheck> check_hypotheses(CurveData const & c, CorollaryCase which,
                                              std::optional<i64> d = std::nullopt);

struct TwistWitness {
    u64 D;
    u64 h;
    QForm certificate;  // a reduced form of order exactly p
    MemberCheck check;
};

struct ScreenResult {
    BuiltClass cls;
    std::vector<TwistWitness> witnesses;
    u64 members = 0;  // square-free class members up to X
};

/*
 * Square-free D <= X in the built class with an element of order p in
 * Cl(-D); each witness carries a form of order p and its re-validation.
 */
ScreenResult screen_twists(CurveData const & c, u64 X, CorollaryCase which,
                           std::optional<i64> d = std::nullopt,
                           TwistConvention conv = TwistConvention::negative,
                           unsigned shards = 1);

/// Line-oriented curve records; see data/curves.txt for the layout.
std::vector<CurveData> parse_curves(std::string const & text);
std::vector<CurveData> load_curves(std::string const & path);
/// The three curves shipped with the library.
std::vector<CurveData> const & builtin_curves();
CurveData const & find_curve(std::vector<CurveData> const & curves, std::string const & label);

/// Parses "2^4*3^2*7" (or "1").
Factorization parse_factorization(std::string const & s);
std::string format_factorization(Factorization const & f);

}  // namespace cldiv
