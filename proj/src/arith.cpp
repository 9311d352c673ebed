#include "cldiv/arith.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace cldiv {

std::string to_string(u128 v)
{
    if (v == 0)
        return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string(i128 v)
{
    if (v < 0)
        return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
    return to_string(static_cast<u128>(v));
}

// ---------------------------------------------------------------- basics

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u128 gcd(u128 a, u128 b)
{
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 gcd(i128 a, i128 b)
{
    return static_cast<i128>(gcd(static_cast<u128>(a < 0 ? -a : a),
                                 static_cast<u128>(b < 0 ? -b : b)));
}

u64 lcm(u64 a, u64 b)
{
    if (a == 0 || b == 0)
        return 0;
    return a / gcd(a, b) * b;
}

i128 mod(i128 a, i128 m)
{
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 e, u64 m)
{
    if (m == 1)
        return 0;
    u64 r = 1;
    base %= m;
    while (e > 0) {
        if (e & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

static u128 addmod(u128 a, u128 b, u128 m)
{
    return a >= m - b ? a - (m - b) : a + b;
}

u128 mulmod(u128 a, u128 b, u128 m)
{
    a %= m;
    b %= m;
    if (m <= std::numeric_limits<u64>::max())
        return mulmod(static_cast<u64>(a), static_cast<u64>(b),
                      static_cast<u64>(m));
    u128 r = 0;
    while (b != 0) {
        if (b & 1)
            r = addmod(r, a, m);
        a = addmod(a, a, m);
        b >>= 1;
    }
    return r;
}

u128 powmod(u128 base, u128 e, u128 m)
{
    if (m == 1)
        return 0;
    u128 r = 1;
    base %= m;
    while (e != 0) {
        if (e & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

ExtendedGcd extended_gcd(i128 a, i128 b)
{
    i128 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i128 q = old_r / r;
        i128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

u64 inverse_mod(i128 a, u64 m)
{
    if (m == 0)
        throw DomainError("inverse_mod: modulus must be positive");
    if (m == 1)
        return 0;
    auto [g, x, y] = extended_gcd(mod(a, m), m);
    (void) y;
    if (g != 1)
        throw DomainError("inverse_mod: " + to_string(a) +
                          " is not invertible modulo " + std::to_string(m));
    return static_cast<u64>(mod(x, m));
}

u64 isqrt(u128 n)
{
    if (n == 0)
        return 0;
    u128 x = static_cast<u128>(
            std::sqrt(static_cast<long double>(n)));
    // the floating estimate is within a few units; correct exactly
    while (x * x > n)
        --x;
    while ((x + 1) * (x + 1) <= n)
        ++x;
    return static_cast<u64>(x);
}

std::optional<u128> checked_pow(u128 base, int e)
{
    u128 r = 1;
    for (int i = 0; i < e; ++i) {
        if (base != 0 && r > std::numeric_limits<u128>::max() / base)
            return std::nullopt;
        r *= base;
    }
    return r;
}

u128 iroot(u128 n, int k)
{
    if (k <= 0)
        throw DomainError("iroot: k must be positive");
    if (k == 1 || n <= 1)
        return n;
    if (k == 2)
        return isqrt(n);
    auto guess = static_cast<u128>(
            std::pow(static_cast<long double>(n), 1.0L / k));
    auto le = [&](u128 x) {
        auto p = checked_pow(x, k);
        return p && *p <= n;
    };
    while (guess > 0 && !le(guess))
        --guess;
    while (le(guess + 1))
        ++guess;
    return guess;
}

// ------------------------------------------------------------ primality

static constexpr std::array<u64, 20> mr_bases = {
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

static bool miller_rabin_u64(u64 n, u64 a)
{
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    u64 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

static bool miller_rabin_u128(u128 n, u128 a)
{
    u128 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u128 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

bool is_prime(u128 n)
{
    if (n < 2)
        return false;
    for (u64 p : mr_bases) {
        if (n == p)
            return true;
        if (n % p == 0)
            return false;
    }
    if (n <= std::numeric_limits<u64>::max()) {
        // the first 12 prime bases are deterministic below 3.18e23
        for (std::size_t i = 0; i < 12; ++i)
            if (!miller_rabin_u64(static_cast<u64>(n), mr_bases[i]))
                return false;
        return true;
    }
    for (u64 a : mr_bases)
        if (!miller_rabin_u128(n, a))
            return false;
    return true;
}

// --------------------------------------------------------- factorization

Factorization::Factorization(std::vector<PrimePower> factors)
    : factors_(std::move(factors))
{
    std::sort(factors_.begin(), factors_.end(),
              [](auto const & x, auto const & y) { return x.prime < y.prime; });
    std::vector<PrimePower> merged;
    for (auto const & pp : factors_) {
        if (pp.exponent <= 0)
            throw InvariantError("Factorization: non-positive exponent");
        if (!merged.empty() && merged.back().prime == pp.prime)
            merged.back().exponent += pp.exponent;
        else
            merged.push_back(pp);
    }
    factors_ = std::move(merged);
}

int Factorization::valuation(u128 p) const
{
    for (auto const & pp : factors_)
        if (pp.prime == p)
            return pp.exponent;
    return 0;
}

u128 Factorization::value() const
{
    u128 v = 1;
    for (auto const & pp : factors_)
        for (int i = 0; i < pp.exponent; ++i)
            v *= pp.prime;
    return v;
}

u64 Factorization::divisor_count() const
{
    u64 t = 1;
    for (auto const & pp : factors_)
        t *= static_cast<u64>(pp.exponent + 1);
    return t;
}

std::string to_string(Factorization const & f)
{
    if (f.empty())
        return "1";
    std::string s;
    for (auto const & pp : f) {
        if (!s.empty())
            s += "*";
        s += to_string(pp.prime);
        if (pp.exponent > 1)
            s += "^" + std::to_string(pp.exponent);
    }
    return s;
}

static u128 pollard_brent(u128 n, u128 c)
{
    auto f = [&](u128 x) { return addmod(mulmod(x, x, n), c, n); };
    u128 y = 2, x = 2, q = 1, g = 1, ys = 2;
    u64 r = 1;
    constexpr u64 block = 128;
    do {
        x = y;
        for (u64 i = 0; i < r; ++i)
            y = f(y);
        u64 k = 0;
        do {
            ys = y;
            for (u64 i = 0; i < std::min(block, r - k); ++i) {
                y = f(y);
                u128 diff = x > y ? x - y : y - x;
                q = mulmod(q, diff, n);
            }
            g = gcd(q, n);
            k += block;
        } while (k < r && g == 1);
        r *= 2;
    } while (g == 1);
    if (g == n) {
        do {
            ys = f(ys);
            u128 diff = x > ys ? x - ys : ys - x;
            g = gcd(diff, n);
        } while (g == 1);
    }
    return g;
}

static void split_composite(u128 n, std::vector<PrimePower> & out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back({n, 1});
        return;
    }
    u64 r = isqrt(n);
    if (static_cast<u128>(r) * r == n) {
        split_composite(r, out);
        split_composite(r, out);
        return;
    }
    for (u128 c = 1;; ++c) {
        u128 d = pollard_brent(n, c);
        if (d != n && d != 1) {
            split_composite(d, out);
            split_composite(n / d, out);
            return;
        }
    }
}

static std::vector<u64> const & trial_primes()
{
    static std::vector<u64> const primes = primes_up_to(100000);
    return primes;
}

Factorization factorize(u128 n, u128 cap)
{
    if (n == 0)
        throw DomainError("factorize: n must be positive");
    if (n > cap)
        throw SizeError("factorize: " + to_string(n) + " exceeds the cap " +
                        to_string(cap));
    std::vector<PrimePower> out;
    for (u64 p : trial_primes()) {
        if (static_cast<u128>(p) * p > n)
            break;
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.push_back({p, e});
        }
    }
    if (n > 1) {
        u64 last = trial_primes().back();
        if (n < static_cast<u128>(last) * last)
            out.push_back({n, 1});
        else
            split_composite(n, out);
    }
    return Factorization(std::move(out));
}

bool is_squarefree(u128 n)
{
    if (n == 0)
        throw DomainError("is_squarefree: n must be positive");
    for (auto const & pp : factorize(n, std::numeric_limits<u128>::max()))
        if (pp.exponent > 1)
            return false;
    return true;
}

// --------------------------------------------------------------- symbols

int jacobi(i128 a, i128 n)
{
    if (n <= 0 || n % 2 == 0)
        throw DomainError("jacobi: modulus must be odd and positive");
    a = mod(a, n);
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i128 r = n % 8;
            if (r == 3 || r == 5)
                result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3)
            result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

int kronecker(i128 a, i128 n)
{
    if (n == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0)
            result = -1;
    }
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v > 0) {
        if (a % 2 == 0)
            return 0;
        if (v % 2 == 1) {
            i128 r = mod(a, 8);
            if (r == 3 || r == 5)
                result = -result;
        }
    }
    return result * jacobi(a, n);
}

// ---------------------------------------------------------- square roots

static u64 tonelli_shanks(u64 a, u64 p)
{
    // p odd prime, a a nonzero quadratic residue
    if (p % 4 == 3)
        return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    int s = std::countr_zero(q);
    q >>= s;
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1)
        ++z;
    u64 m = static_cast<u64>(s);
    u64 c = powmod(z, q, p);
    u64 t = powmod(a, q, p);
    u64 r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0;
        u64 tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j)
            b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

std::optional<u64> sqrt_mod(i128 a, u64 p)
{
    if (!is_prime(p))
        throw DomainError("sqrt_mod: " + std::to_string(p) + " is not prime");
    u64 x = static_cast<u64>(mod(a, p));
    if (p == 2 || x == 0)
        return x;
    if (powmod(x, (p - 1) / 2, p) != 1)
        return std::nullopt;
    u64 r = tonelli_shanks(x, p);
    return std::min(r, p - r);
}

static u64 ipow(u64 p, int k)
{
    u64 r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > std::numeric_limits<u64>::max() / p)
            throw SizeError("prime power exceeds 64 bits");
        r *= p;
    }
    return r;
}

// roots of y^2 = u (mod p^k), u a unit mod p, k >= 1
static std::vector<u64> unit_roots(u64 u, u64 p, int k)
{
    u64 pk = ipow(p, k);
    u %= pk;
    if (p == 2) {
        if (k == 1)
            return {1};
        if (k == 2)
            return u % 4 == 1 ? std::vector<u64>{1, 3} : std::vector<u64>{};
        if (u % 8 != 1)
            return {};
        std::vector<u64> roots = {1, 3, 5, 7};
        for (int j = 3; j < k; ++j) {
            u64 next_mod = u64{1} << (j + 1);
            std::vector<u64> lifted;
            for (u64 x : roots)
                for (u64 cand : {x, x + (u64{1} << j)})
                    if (mulmod(cand, cand, next_mod) == u % next_mod)
                        lifted.push_back(cand);
            roots = std::move(lifted);
        }
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    u64 u_p = u % p;
    if (powmod(u_p, (p - 1) / 2, p) != 1)
        return {};
    u64 x = tonelli_shanks(u_p, p);
    u64 pj = p;
    for (int j = 1; j < k; ++j) {
        u64 next = pj * p;
        // Newton step x <- x - (x^2 - u) / (2x)
        i128 fx = static_cast<i128>(mulmod(x, x, next)) - static_cast<i128>(u % next);
        u64 inv = inverse_mod(static_cast<i128>(2) * x, next);
        x = static_cast<u64>(mod(static_cast<i128>(x) -
                                         mod(fx, next) * static_cast<i128>(inv) % next,
                                 next));
        pj = next;
    }
    u64 y = pk - x;
    return x < y ? std::vector<u64>{x, y} : std::vector<u64>{y, x};
}

std::vector<u64> hensel_sqrt(i128 a, u64 p, int k)
{
    if (!is_prime(p))
        throw DomainError("hensel_sqrt: " + std::to_string(p) + " is not prime");
    return hensel_sqrt_prime(a, p, k);
}

std::vector<u64> hensel_sqrt_prime(i128 a, u64 p, int k)
{
    if (k < 1)
        throw DomainError("hensel_sqrt: exponent must be >= 1");
    u64 pk = ipow(p, k);
    u64 a0 = static_cast<u64>(mod(a, pk));
    std::vector<u64> roots;
    if (a0 == 0) {
        u64 step = ipow(p, (k + 1) / 2);
        for (u64 x = 0; x < pk; x += step)
            roots.push_back(x);
        return roots;
    }
    int v = 0;
    u64 rest = a0;
    while (rest % p == 0) {
        rest /= p;
        ++v;
    }
    if (v % 2 == 1)
        return {};
    int half = v / 2;
    u64 scale = ipow(p, half);
    u64 inner_mod = ipow(p, k - v);
    for (u64 y : unit_roots(rest, p, k - v)) {
        u64 lifts = ipow(p, half);
        for (u64 j = 0; j < lifts; ++j) {
            u128 x = static_cast<u128>(scale) * (y + j * inner_mod) % pk;
            roots.push_back(static_cast<u64>(x));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// ------------------------------------------------------------------- CRT

Congruence crt(std::span<Congruence const> system)
{
    i128 r = 0, m = 1;
    for (auto const & c : system) {
        if (c.modulus <= 0)
            throw DomainError("crt: moduli must be positive");
        if (gcd(m, c.modulus) != 1)
            throw DomainError("crt: moduli " + to_string(m) + " and " +
                              to_string(c.modulus) + " are not coprime");
        i128 r2 = mod(c.residue, c.modulus);
        u64 inv = inverse_mod(m, static_cast<u64>(c.modulus));
        i128 k = mod(mod(r2 - r, c.modulus) * static_cast<i128>(inv), c.modulus);
        r += m * k;
        m *= c.modulus;
        r = mod(r, m);
    }
    return {r, m};
}

// ----------------------------------------------------------------- sieves

std::vector<u64> primes_up_to(u64 limit)
{
    std::vector<u64> primes;
    if (limit < 2)
        return primes;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return primes;
}

SmallPrimeTable::SmallPrimeTable(u64 limit)
    : spf_(limit + 1, 0)
{
    for (u64 i = 2; i <= limit; ++i) {
        if (spf_[i] != 0)
            continue;
        for (u64 j = i; j <= limit; j += i)
            if (spf_[j] == 0)
                spf_[j] = static_cast<std::uint32_t>(i);
    }
}

Factorization SmallPrimeTable::factor(u64 n) const
{
    if (n == 0)
        throw DomainError("SmallPrimeTable::factor: n must be positive");
    if (n > limit())
        return factorize(n);
    std::vector<PrimePower> out;
    while (n > 1) {
        u64 p = spf_[n];
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    return Factorization(std::move(out));
}

std::vector<u64> squarefree_in_ap(u64 X, i64 A, u64 B)
{
    return squarefree_in_ap(1, X, A, B);
}

std::vector<u64> squarefree_in_ap(u64 lo, u64 hi, i64 A, u64 B)
{
    if (B == 0)
        throw DomainError("squarefree_in_ap: modulus must be positive");
    lo = std::max<u64>(lo, 1);
    if (hi < lo)
        return {};
    u64 a0 = static_cast<u64>(mod(A, B));
    if (hi < a0)
        return {};
    // members are a0 + k*B for k in [k_lo, k_hi]
    u64 k_lo = lo <= a0 ? 0 : (lo - a0 + B - 1) / B;
    u64 k_hi = (hi - a0) / B;
    if (a0 == 0 && k_lo == 0)
        k_lo = 1;
    if (k_hi < k_lo)
        return {};
    std::vector<bool> bad(k_hi - k_lo + 1, false);
    for (u64 p : primes_up_to(isqrt(hi))) {
        u64 q = p * p;
        u64 g = gcd(B, q);
        if (a0 % g != 0)
            continue;
        u64 step = q / g;
        u64 k0 = 0;
        if (step > 1) {
            // (B/g) k = -(a0/g) (mod step)
            u64 inv = inverse_mod(static_cast<i128>(B / g), step);
            k0 = static_cast<u64>(mod(-static_cast<i128>(a0 / g) * inv, step));
        }
        u64 first = k_lo + static_cast<u64>(mod(static_cast<i128>(k0) - k_lo, step));
        for (u64 k = first; k <= k_hi; k += step)
            bad[k - k_lo] = true;
    }
    std::vector<u64> out;
    for (u64 k = k_lo; k <= k_hi; ++k)
        if (!bad[k - k_lo])
            out.push_back(a0 + k * B);
    return out;
}

}  // namespace cldiv
