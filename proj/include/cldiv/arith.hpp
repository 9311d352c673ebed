#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cldiv/types.hpp"

namespace cldiv {

/// Largest integer accepted by factorize() unless the caller raises it.
inline constexpr u128 default_magnitude_cap = u128{1} << 94;

struct PrimePower {
    u128 prime;
    int exponent;

    bool operator==(PrimePower const &) const = default;
};

/*
 * Prime factorization with primes stored in strictly increasing order and
 * every exponent >= 1.  The empty factorization represents 1.
 */
class Factorization {
    std::vector<PrimePower> factors_;

  public:
    Factorization() = default;
    explicit Factorization(std::vector<PrimePower> factors);

    std::vector<PrimePower> const & factors() const { return factors_; }
    auto begin() const { return factors_.begin(); }
    auto end() const { return factors_.end(); }
    std::size_t size() const { return factors_.size(); }
    bool empty() const { return factors_.empty(); }

    /// Number of distinct primes.
    int omega() const { return static_cast<int>(factors_.size()); }
    /// Exponent of p, 0 when absent.
    int valuation(u128 p) const;
    u128 value() const;
    u64 divisor_count() const;

    bool operator==(Factorization const &) const = default;
};

std::string to_string(Factorization const & f);

// modular helpers, all exact
u64 gcd(u64 a, u64 b);
u128 gcd(u128 a, u128 b);
i128 gcd(i128 a, i128 b);
u64 lcm(u64 a, u64 b);
i128 mod(i128 a, i128 m);  // result in [0, m)
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 e, u64 m);
u128 mulmod(u128 a, u128 b, u128 m);
u128 powmod(u128 base, u128 e, u128 m);
/// Inverse of a modulo m; throws DomainError when gcd(a, m) != 1.
u64 inverse_mod(i128 a, u64 m);

struct ExtendedGcd {
    i128 g, x, y;  // a*x + b*y = g >= 0
};
ExtendedGcd extended_gcd(i128 a, i128 b);

u64 isqrt(u128 n);
/// floor(n^(1/k)) for k >= 1.
u128 iroot(u128 n, int k);
/// base^e, or nullopt on overflow of u128.
std::optional<u128> checked_pow(u128 base, int e);

bool is_prime(u128 n);
Factorization factorize(u128 n, u128 cap = default_magnitude_cap);
bool is_squarefree(u128 n);

/// Jacobi symbol (a/n) for odd n >= 1.
int jacobi(i128 a, i128 n);
/// Kronecker symbol (a/n), defined for all integers.
int kronecker(i128 a, i128 n);

/// Smallest square root of a modulo the prime p, if any.
std::optional<u64> sqrt_mod(i128 a, u64 p);
/// All square roots of a modulo p^k, ascending.
std::vector<u64> hensel_sqrt(i128 a, u64 p, int k);
/// As hensel_sqrt, without re-checking that p is prime.
std::vector<u64> hensel_sqrt_prime(i128 a, u64 p, int k);

struct Congruence {
    i128 residue;
    i128 modulus;

    bool operator==(Congruence const &) const = default;
};

/// Combine congruences with pairwise coprime moduli.
Congruence crt(std::span<Congruence const> system);

/*
 * Smallest-prime-factor table used to factor many small numbers quickly.
 */
class SmallPrimeTable {
    std::vector<std::uint32_t> spf_;

  public:
    explicit SmallPrimeTable(u64 limit);
    u64 limit() const { return spf_.empty() ? 0 : spf_.size() - 1; }
    /// Factors n <= limit(); larger n fall back to factorize().
    Factorization factor(u64 n) const;
    std::uint32_t smallest_factor(u64 n) const { return spf_[n]; }
};

std::vector<u64> primes_up_to(u64 limit);

/*
 * Square-free members of {D : 1 <= D <= X, D = A (mod B)}, ascending.
 * Sieve by p^2 for primes p <= sqrt(X).  The second form restricts to
 * lo <= D <= hi so that disjoint segments concatenate to the full list.
 */
std::vector<u64> squarefree_in_ap(u64 X, i64 A, u64 B);
std::vector<u64> squarefree_in_ap(u64 lo, u64 hi, i64 A, u64 B);

}  // namespace cldiv
