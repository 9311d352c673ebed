#pragma once

#include <optional>
#include <vector>

#include "cldiv/arith.hpp"

namespace cldiv {

/*
 * Which side of the lifted class the constructions target.  plus: emitted
 * D lie in A' (mod B'), a sub-class of A (mod B).  minus: emitted D lie in
 * -A' (mod B'), the literal bookkeeping of the source construction.
 */
enum class ClassSign { plus, minus };

inline i64 apply_sign(ClassSign s, i64 v) { return s == ClassSign::plus ? v : -v; }

/*
 * Residues with 2 m0^(g/2) - t0^2 = A (mod modulus), gcd(t0, modulus) = 1,
 * plus integer representatives m_rep = m0, t_rep = t0 (mod modulus) with
 * gcd(m_rep, 2 t_rep) = 1.
 */
struct SpecialWitness {
    u64 m0, t0, modulus;
    u64 m_rep, t_rep;
    i64 target;
};

/*
 * (A, B) is special for even g >= 4 when 2 m^(g/2) - t^2 = A (mod B) has a
 * solution with gcd(t, B) = 1 and gcd(m, 2t) = 1.  Returns the
 * lexicographically smallest residue pair, or nullopt.
 */
std::optional<SpecialWitness> is_special(i64 A, u64 B, int g);

struct UVPair {
    u64 u, v;
};

/// u, v with A + u^2 = v^2 (mod p) and p not dividing uv; p >= 7 prime.
UVPair lemma42_uv(i64 A, u64 p);

/*
 * Residues with m1^g1 - n1^2 = t1^2 * target (mod modulus),
 * gcd(t1, modulus) = gcd(m1, modulus) = 1, and integer representatives
 * with gcd(m_rep, 2 n_rep) = 1.
 */
struct TripleWitness {
    u64 m1, n1, t1, modulus;
    i64 target;
    int g1;
    u64 m_rep, n_rep, t_rep;
};

bool validate(TripleWitness const & w);
bool validate(SpecialWitness const & w, int g);

/// One witness, built prime by prime and glued with CRT.
TripleWitness lemma41_triple(i64 a, u64 b, int g1);

/// Every valid residue triple modulo b, ordered by (t1, m1, n1).
std::vector<TripleWitness> all_triples(i64 a, u64 b, int g1);

enum class ConstructionCase { case1, case2 };

struct ProgressionLift {
    i64 A_prime;
    u64 B_prime;
    u64 r;
};

/*
 * Sub-class A' (mod B') of A (mod B) whose members are divisible by r,
 * not divisible by 4, and not divisible by p^2 for p | B r.  For case2 the
 * class (sign * A', B') is additionally special for g.
 */
ProgressionLift lift_progression(i64 A, u64 B, int g, ConstructionCase which,
                                 ClassSign sign = ClassSign::plus);

struct BoxParams {
    u64 X, T, M, N;
    int g1;
};

/// Floored box endpoints M = (T^2 X)^(1/g1) / 2 and N = T sqrt(X) / 2^(g1+1).
BoxParams box_params(u64 X, u64 T, int g);

/// floor(sqrt(X) / 2^(g1+3)), the largest admissible T.
u64 max_T(u64 X, int g);

/// floor(X^((g1-2)/(4(g1+1)))) clamped to [1, max_T(X, g)].
u64 default_T(u64 X, int g);

struct Case1Tuple {
    u64 m, n, t, D;
    bool operator==(Case1Tuple const &) const = default;
};

/*
 * All (m, n, t) in the boxes (M, 2M] x (N, 2N] x (T, 2T] with
 * m^g1 - n^2 = D t^2, D >= 1, gcd(m, 2n) = 1 and (m, n, t) congruent to
 * the witness, ascending in (t, m, n).  t_lo/t_hi restrict t for sharding.
 */
std::vector<Case1Tuple> gen_case1(u64 X, u64 T, int g, TripleWitness const & w);
std::vector<Case1Tuple> gen_case1(u64 X, u64 T, int g, TripleWitness const & w,
                                  u64 t_lo, u64 t_hi);

/*
 * Union of gen_case1 over every valid triple class modulo `modulus`: all box
 * tuples with m, t units modulo `modulus` and D = target (mod modulus).
 * Ascending in (t, m, n).
 */
std::vector<Case1Tuple> gen_case1_class(u64 X, u64 T, int g, i64 target, u64 modulus,
                                        u64 t_lo = 0, u64 t_hi = ~u64{0});

struct Case2Pair {
    u64 m, t, D;
    bool operator==(Case2Pair const &) const = default;
};

/*
 * All (m, t) with D = 2 m^(g/2) - t^2 in [1, X], m^(g/2) < D + 1,
 * gcd(m, 2t) = 1 and (m, t) congruent to the witness, ascending in (m, t).
 */
std::vector<Case2Pair> gen_case2(u64 X, int g, SpecialWitness const & w);
std::vector<Case2Pair> gen_case2(u64 X, int g, SpecialWitness const & w,
                                 u64 m_lo, u64 m_hi);

struct Case3Result {
    bool hypothesis_holds = false;
    /// x, y with 0 < 2x^2 - y^2 = A (mod B) square-free and gcd(x, 2y) = 1
    std::optional<std::pair<u64, u64>> hypothesis_witness;
    std::string message;
    std::vector<u64> D;
};

/// D = p * gcd(A, B) for primes p with D = 1 (mod 8) and D in the class.
Case3Result gen_case3_g4(u64 X, i64 A, u64 B, ClassSign sign = ClassSign::plus);

}  // namespace cldiv
