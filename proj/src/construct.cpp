#include "cldiv/construct.hpp"

#include <algorithm>

#include <boost/multiprecision/cpp_int.hpp>

namespace cldiv {

namespace {

u64 upow_mod(u64 base, u64 e, u64 m) { return powmod(base, e, m); }

u128 upow(u64 base, int e)
{
    auto v = checked_pow(base, e);
    if (!v)
        throw SizeError("power " + std::to_string(base) + "^" + std::to_string(e) +
                        " overflows 128 bits");
    return *v;
}

u64 prime_power(u64 p, int k)
{
    u64 r = 1;
    for (int i = 0; i < k; ++i)
        r *= p;
    return r;
}

void require_squarefree_gcd(i64 A, u64 B, char const * who)
{
    u64 g = gcd(static_cast<u64>(mod(A, B)), B);
    if (!is_squarefree(g))
        throw DomainError(std::string(who) + ": gcd(A, B) = " + std::to_string(g) +
                          " is not square-free");
}

// all x mod (product of the factorization) with x^2 = a, ascending
std::vector<u64> sqrt_mod_composite(i128 a, Factorization const & fact)
{
    std::vector<u64> combined = {0};
    u64 modulus = 1;
    for (auto const & pp : fact) {
        u64 p = static_cast<u64>(pp.prime);
        u64 pe = prime_power(p, pp.exponent);
        auto roots = hensel_sqrt_prime(a, p, pp.exponent);
        if (roots.empty())
            return {};
        std::vector<u64> next;
        for (u64 r1 : combined)
            for (u64 r2 : roots) {
                Congruence sys[] = {{r1, modulus}, {r2, pe}};
                next.push_back(static_cast<u64>(crt(sys).residue));
            }
        combined = std::move(next);
        modulus *= pe;
    }
    std::sort(combined.begin(), combined.end());
    return combined;
}

// smallest positive odd integer congruent to r (mod b), or 0 if none
u64 odd_representative(u64 r, u64 b)
{
    for (u64 k = 0; k < 3; ++k) {
        u64 v = r + k * b;
        if (v > 0 && v % 2 == 1)
            return v;
    }
    return 0;
}

// smallest positive x = r (mod b) with gcd(x, m) = 1
u64 coprime_representative(u64 r, u64 b, u64 m)
{
    for (u64 k = 0; k < 64 * b + 64; ++k) {
        u64 v = r + k * b;
        if (v > 0 && gcd(v, m) == 1)
            return v;
    }
    throw SearchExhausted("no representative of " + std::to_string(r) + " mod " +
                          std::to_string(b) + " coprime to " + std::to_string(m));
}

TripleWitness make_triple(u64 m1, u64 n1, u64 t1, u64 b, i64 a, int g1)
{
    TripleWitness w{m1, n1, t1, b, a, g1, 0, 0, 0};
    w.m_rep = odd_representative(m1, b);
    if (w.m_rep == 0)
        throw InvariantError("lemma41: m1 has no odd representative");
    w.n_rep = coprime_representative(n1, b, w.m_rep);
    w.t_rep = t1 == 0 ? b : t1;
    return w;
}

}  // namespace

// --------------------------------------------------------------- special

std::optional<SpecialWitness> is_special(i64 A, u64 B, int g)
{
    if (g < 4 || g % 2 != 0)
        throw DomainError("is_special: g must be even and >= 4");
    if (B < 2)
        throw DomainError("is_special: modulus must be >= 2");
    require_squarefree_gcd(A, B, "is_special");
    u64 half = static_cast<u64>(g / 2);
    u64 a0 = static_cast<u64>(mod(A, B));
    // smallest unit t for each square class
    std::vector<u64> first_t(B, 0);
    for (u64 t = 1; t < B; ++t) {
        if (gcd(t, B) != 1)
            continue;
        u64 sq = mulmod(t, t, B);
        if (first_t[sq] == 0)
            first_t[sq] = t;
    }
    for (u64 m = 0; m < B; ++m) {
        if (B % 2 == 0 && m % 2 == 0)
            continue;
        u64 need = static_cast<u64>(
                mod(2 * static_cast<i128>(upow_mod(m, half, B)) - a0, B));
        u64 t = first_t[need];
        if (t == 0)
            continue;
        SpecialWitness w{m, t, B, 0, 0, static_cast<i64>(a0)};
        w.m_rep = odd_representative(m, B);
        w.t_rep = coprime_representative(t, B, 2 * w.m_rep);
        return w;
    }
    return std::nullopt;
}

bool validate(SpecialWitness const & w, int g)
{
    u64 B = w.modulus;
    u64 half = static_cast<u64>(g / 2);
    if (gcd(w.t0, B) != 1 || gcd(w.t_rep, B) != 1)
        return false;
    if (w.m_rep % B != w.m0 % B || w.t_rep % B != w.t0 % B)
        return false;
    if (gcd(w.m_rep, 2 * w.t_rep) != 1)
        return false;
    i128 lhs = 2 * static_cast<i128>(upow_mod(w.m0, half, B)) -
               static_cast<i128>(mulmod(w.t0, w.t0, B));
    return mod(lhs - w.target, B) == 0;
}

// ---------------------------------------------------------------- lemmas

UVPair lemma42_uv(i64 A, u64 p)
{
    if (p < 7 || !is_prime(p))
        throw DomainError("lemma42_uv: p must be a prime >= 7");
    u64 a = static_cast<u64>(mod(A, p));
    if (a == 0)
        return {1, 1};
    u64 inv2 = (p + 1) / 2;
    // v - u = 1, v + u = A
    u64 v = mulmod(a + 1, inv2, p);
    u64 u = static_cast<u64>(mod(static_cast<i128>(mulmod(a, inv2, p)) - inv2, p));
    if (mulmod(u, v, p) == 0) {
        // A = +-1: v - u = 2, v + u = A / 2
        u64 q = mulmod(a, mulmod(inv2, inv2, p), p);
        v = (q + 1) % p;
        u = (q + p - 1) % p;
        if (mulmod(u, v, p) == 0)
            throw InvariantError("lemma42_uv: both branches hit p | uv");
    }
    return {u, v};
}

TripleWitness lemma41_triple(i64 a, u64 b, int g1)
{
    if (b < 2)
        throw DomainError("lemma41_triple: modulus must be >= 2");
    if (g1 < 3)
        throw DomainError("lemma41_triple: g1 must be >= 3");
    if (g1 % 2 == 0 && b % 2 == 0)
        throw DomainError("lemma41_triple: even g1 needs an odd modulus");
    std::vector<Congruence> ms, ns, ts;
    for (auto const & pp : factorize(b)) {
        u64 p = static_cast<u64>(pp.prime);
        int k = pp.exponent;
        u64 pk = prime_power(p, k);
        i128 ak = mod(a, pk);
        if (p >= 7) {
            auto [u, v] = lemma42_uv(static_cast<i64>(mod(a, p)), p);
            u64 t = inverse_mod(v, pk);
            i128 rhs = 1 - static_cast<i128>(mulmod(t, t, pk)) * ak;
            auto roots = hensel_sqrt_prime(rhs, p, k);
            u64 want = mulmod(u, t % p, p);
            auto it = std::find_if(roots.begin(), roots.end(),
                                   [&](u64 r) { return r % p == want; });
            if (it == roots.end())
                throw InvariantError("lemma41_triple: Hensel lift failed at p = " +
                                     std::to_string(p));
            ms.push_back({1, pk});
            ns.push_back({*it, pk});
            ts.push_back({t, pk});
            continue;
        }
        bool found = false;
        for (u64 m = 1; m < pk && !found; ++m) {
            if (m % p == 0)
                continue;
            u64 mg = upow_mod(m, static_cast<u64>(g1), pk);
            for (u64 t = 1; t < pk && !found; ++t) {
                if (t % p == 0)
                    continue;
                i128 rhs = static_cast<i128>(mg) -
                           static_cast<i128>(mulmod(t, t, pk)) * ak;
                auto roots = hensel_sqrt_prime(rhs, p, k);
                if (roots.empty())
                    continue;
                ms.push_back({m, pk});
                ns.push_back({roots.front(), pk});
                ts.push_back({t, pk});
                found = true;
            }
        }
        if (!found)
            throw SearchExhausted("lemma41_triple: no local solution modulo " +
                                  std::to_string(pk));
    }
    auto m1 = static_cast<u64>(crt(ms).residue);
    auto n1 = static_cast<u64>(crt(ns).residue);
    auto t1 = static_cast<u64>(crt(ts).residue);
    return make_triple(m1, n1, t1, b, static_cast<i64>(mod(a, b)), g1);
}

std::vector<TripleWitness> all_triples(i64 a, u64 b, int g1)
{
    if (b < 2)
        throw DomainError("all_triples: modulus must be >= 2");
    if (g1 < 3)
        throw DomainError("all_triples: g1 must be >= 3");
    Factorization fb = factorize(b);
    i128 ab = mod(a, b);
    std::vector<TripleWitness> out;
    for (u64 t = 1; t < b; ++t) {
        if (gcd(t, b) != 1)
            continue;
        for (u64 m = 1; m < b; ++m) {
            if (gcd(m, b) != 1)
                continue;
            i128 rhs = static_cast<i128>(upow_mod(m, static_cast<u64>(g1), b)) -
                       static_cast<i128>(mulmod(t, t, b)) * ab;
            for (u64 n : sqrt_mod_composite(mod(rhs, b), fb))
                out.push_back(make_triple(m, n, t, b, static_cast<i64>(ab), g1));
        }
    }
    return out;
}

bool validate(TripleWitness const & w)
{
    u64 b = w.modulus;
    if (gcd(w.t1, b) != 1 || gcd(w.m1, b) != 1)
        return false;
    if (w.m_rep % b != w.m1 || w.n_rep % b != w.n1 || w.t_rep % b != w.t1)
        return false;
    if (gcd(w.m_rep, 2 * w.n_rep) != 1)
        return false;
    i128 lhs = static_cast<i128>(upow_mod(w.m1, static_cast<u64>(w.g1), b)) -
               static_cast<i128>(mulmod(w.n1, w.n1, b));
    i128 rhs = static_cast<i128>(mulmod(w.t1, w.t1, b)) * mod(w.target, b);
    return mod(lhs - rhs, b) == 0;
}

// ------------------------------------------------------------------ lift

ProgressionLift lift_progression(i64 A, u64 B, int g, ConstructionCase which,
                                 ClassSign sign)
{
    if (B < 1)
        throw DomainError("lift_progression: modulus must be positive");
    if (g < 4 || g % 2 != 0)
        throw DomainError("lift_progression: g must be even and >= 4");
    if (which == ConstructionCase::case1 && g % 4 != 2)
        throw DomainError("lift_progression: case 1 needs g = 2 (mod 4)");
    if (which == ConstructionCase::case2 && g % 4 != 0)
        throw DomainError("lift_progression: case 2 needs g = 0 (mod 4)");
    require_squarefree_gcd(A, B, "lift_progression");
    u64 G = gcd(static_cast<u64>(mod(A, B)), B);
    Factorization fb = factorize(B);
    u64 r = 1;
    if (which == ConstructionCase::case1 && G <= 2) {
        r = 3;
        while (B % r == 0 || !is_prime(r))
            r += 2;
    }
    std::vector<u64> primes;
    for (auto const & pp : fb)
        primes.push_back(static_cast<u64>(pp.prime));
    primes.push_back(2);
    if (r > 1)
        primes.push_back(r);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

    std::vector<Congruence> parts;
    for (u64 p : primes) {
        int e = fb.valuation(p);
        u64 pe = prime_power(p, std::max(e, 2));
        u64 base = prime_power(p, e);
        u64 p2 = p * p;
        std::optional<u64> chosen;
        for (u64 x = 0; x < pe && !chosen; ++x) {
            if (mod(static_cast<i128>(x) - A, base) != 0 || x % p2 == 0)
                continue;
            if (p == r && x % p != 0)
                continue;
            if (which == ConstructionCase::case2 &&
                !is_special(apply_sign(sign, static_cast<i64>(x)), pe, g))
                continue;
            chosen = x;
        }
        if (!chosen)
            throw SearchExhausted("lift_progression: no admissible" +
                                  std::string(which == ConstructionCase::case2
                                                      ? " special"
                                                      : "") +
                                  " residue modulo " + std::to_string(pe));
        parts.push_back({*chosen, pe});
    }
    auto c = crt(parts);
    return {static_cast<i64>(c.residue), static_cast<u64>(c.modulus), r};
}

// ----------------------------------------------------------------- boxes

BoxParams box_params(u64 X, u64 T, int g)
{
    if (g < 6 || g % 4 != 2)
        throw DomainError("box_params: g must be = 2 (mod 4) and >= 6");
    int g1 = g / 2;
    u128 t2x = static_cast<u128>(T) * T * X;
    u64 M = static_cast<u64>(iroot(t2x, g1) / 2);
    u64 N = isqrt(t2x) >> (g1 + 1);
    return {X, T, M, N, g1};
}

u64 max_T(u64 X, int g)
{
    int g1 = g / 2;
    return isqrt(X) >> (g1 + 3);
}

u64 default_T(u64 X, int g)
{
    if (g < 6 || g % 4 != 2)
        throw DomainError("default_T: g must be = 2 (mod 4) and >= 6");
    if (X < 16)
        throw DomainError("default_T: X must be >= 16");
    using boost::multiprecision::cpp_int;
    int g1 = g / 2;
    unsigned num = static_cast<unsigned>(g1 - 2);
    unsigned den = static_cast<unsigned>(4 * (g1 + 1));
    cpp_int bound = boost::multiprecision::pow(cpp_int(X), num);
    auto fits = [&](u64 t) {
        return boost::multiprecision::pow(cpp_int(t), den) <= bound;
    };
    auto t = static_cast<u64>(
            std::pow(static_cast<long double>(X), static_cast<long double>(num) / den));
    while (t > 0 && !fits(t))
        --t;
    while (fits(t + 1))
        ++t;
    u64 cap = max_T(X, g);
    t = std::min(t, cap);
    return std::max<u64>(t, 1);
}

// ------------------------------------------------------------ generators

std::vector<Case1Tuple> gen_case1(u64 X, u64 T, int g, TripleWitness const & w)
{
    return gen_case1(X, T, g, w, 0, ~u64{0});
}

namespace {

// n with n^2 = V (mod t^2) and n = base (mod base_mod), as residues mod base_mod * t^2
std::vector<u64> box_roots(u128 V, Factorization const & ft, u64 base, u64 base_mod)
{
    std::vector<u64> residues = {base % base_mod};
    u64 modulus = base_mod;
    for (auto const & pp : ft) {
        u64 p = static_cast<u64>(pp.prime);
        int k = 2 * pp.exponent;
        u64 pk = prime_power(p, k);
        auto roots = hensel_sqrt_prime(static_cast<i128>(V % pk), p, k);
        if (roots.empty())
            return {};
        std::vector<u64> next;
        for (u64 r1 : residues)
            for (u64 r2 : roots) {
                Congruence sys[] = {{r1, modulus}, {r2, pk}};
                next.push_back(static_cast<u64>(crt(sys).residue));
            }
        residues = std::move(next);
        modulus *= pk;
    }
    return residues;
}

// emit (m, n, t) for n in (N, 2N] congruent to a residue mod L, ascending in n
template <class Keep>
void emit_n(BoxParams const & box, u64 m, u64 t, u128 V, std::vector<u64> const & residues,
            u128 L, Keep keep, std::vector<Case1Tuple> & out)
{
    std::vector<u64> ns;
    for (u64 rho : residues) {
        u128 n = box.N + 1 +
                 static_cast<u128>(mod(static_cast<i128>(rho) - static_cast<i128>(box.N + 1),
                                       static_cast<i128>(L)));
        for (; n <= 2 * static_cast<u128>(box.N); n += L) {
            u64 nn = static_cast<u64>(n);
            if (static_cast<u128>(nn) * nn >= V || gcd(m, nn) != 1)
                continue;
            ns.push_back(nn);
        }
    }
    std::sort(ns.begin(), ns.end());
    u64 t2 = t * t;
    for (u64 n : ns) {
        u128 diff = V - static_cast<u128>(n) * n;
        if (diff % t2 != 0)
            throw InvariantError("gen_case1: t^2 does not divide m^g1 - n^2");
        u64 D = static_cast<u64>(diff / t2);
        if (keep(D))
            out.push_back({m, n, t, D});
    }
}

}  // namespace

std::vector<Case1Tuple> gen_case1(u64 X, u64 T, int g, TripleWitness const & w,
                                  u64 t_lo, u64 t_hi)
{
    BoxParams box = box_params(X, T, g);
    int g1 = box.g1;
    if (w.g1 != g1)
        throw DomainError("gen_case1: witness built for a different g1");
    u64 Bp = w.modulus;
    std::vector<Case1Tuple> out;
    auto first_in = [&](u64 lo, u64 residue) {
        // smallest v >= lo with v = residue (mod Bp)
        return lo + static_cast<u64>(mod(static_cast<i128>(residue) - lo, Bp));
    };
    u64 t_begin = std::max(T + 1, t_lo);
    u64 t_end = std::min(2 * T, t_hi);
    if (t_begin > t_end)
        return out;
    for (u64 t = first_in(t_begin, w.t1); t <= t_end; t += Bp) {
        if (gcd(t, Bp) != 1)
            continue;
        Factorization ft = factorize(t);
        u128 L = static_cast<u128>(Bp) * t * t;
        for (u64 m = first_in(box.M + 1, w.m1); m <= 2 * box.M; m += Bp) {
            if (m % 2 == 0 || gcd(m, t) != 1)
                continue;
            u128 V = upow(m, g1);
            auto residues = box_roots(V, ft, w.n1, Bp);
            emit_n(box, m, t, V, residues, L, [](u64) { return true; }, out);
        }
    }
    return out;
}

std::vector<Case1Tuple> gen_case1_class(u64 X, u64 T, int g, i64 target, u64 modulus,
                                        u64 t_lo, u64 t_hi)
{
    BoxParams box = box_params(X, T, g);
    if (modulus < 1)
        throw DomainError("gen_case1_class: modulus must be positive");
    u64 want = static_cast<u64>(mod(target, modulus));
    std::vector<Case1Tuple> out;
    u64 t_begin = std::max(T + 1, t_lo);
    u64 t_end = std::min(2 * T, t_hi);
    for (u64 t = t_begin; t <= t_end; ++t) {
        if (gcd(t, modulus) != 1)
            continue;
        Factorization ft = factorize(t);
        u128 L = static_cast<u128>(t) * t;
        for (u64 m = box.M + 1; m <= 2 * box.M; ++m) {
            if (m % 2 == 0 || gcd(m, modulus) != 1 || gcd(m, t) != 1)
                continue;
            u128 V = upow(m, box.g1);
            auto residues = box_roots(V, ft, 0, 1);
            emit_n(box, m, t, V, residues, L,
                   [&](u64 D) { return D % modulus == want; }, out);
        }
    }
    return out;
}

std::vector<Case2Pair> gen_case2(u64 X, int g, SpecialWitness const & w)
{
    return gen_case2(X, g, w, 0, ~u64{0});
}

std::vector<Case2Pair> gen_case2(u64 X, int g, SpecialWitness const & w, u64 m_lo,
                                 u64 m_hi)
{
    if (g < 4 || g % 4 != 0)
        throw DomainError("gen_case2: g must be = 0 (mod 4)");
    int g1 = g / 2;
    u64 Bp = w.modulus;
    std::vector<Case2Pair> out;
    u64 m_max = std::min<u64>(static_cast<u64>(iroot(X, g1)), m_hi);
    u64 m_begin = std::max<u64>(1, m_lo);
    if (m_begin > m_max)
        return out;
    u64 m = m_begin + static_cast<u64>(mod(static_cast<i128>(w.m0) - m_begin, Bp));
    for (; m <= m_max; m += Bp) {
        if (m % 2 == 0)
            continue;
        u128 V = upow(m, g1);
        // t^2 <= V (so m^g1 < D + 1) and 2V - t^2 <= X
        u64 t_max = isqrt(V);
        u64 t_min = 1;
        if (2 * V > X) {
            u128 need = 2 * V - X;
            t_min = isqrt(need);
            if (static_cast<u128>(t_min) * t_min < need)
                ++t_min;
        }
        if (t_min > t_max)
            continue;
        u64 t = t_min + static_cast<u64>(mod(static_cast<i128>(w.t0) - t_min, Bp));
        for (; t <= t_max; t += Bp) {
            if (gcd(m, t) != 1)
                continue;
            u128 D = 2 * V - static_cast<u128>(t) * t;
            out.push_back({m, t, static_cast<u64>(D)});
        }
    }
    return out;
}

Case3Result gen_case3_g4(u64 X, i64 A, u64 B, ClassSign sign)
{
    if (B < 2)
        throw DomainError("gen_case3_g4: modulus must be >= 2");
    require_squarefree_gcd(A, B, "gen_case3_g4");
    Case3Result res;
    u64 a0 = static_cast<u64>(mod(A, B));
    // search the hypothesis witness in a bounded window
    u64 x_limit = 8 * B + 8;
    for (u64 x = 1; x <= x_limit && !res.hypothesis_witness; ++x) {
        for (u64 y = 0; 2 * x * x > y * y; ++y) {
            u64 v = 2 * x * x - y * y;
            if (v % B != a0 || gcd(x, 2 * y) != 1 || !is_squarefree(v))
                continue;
            res.hypothesis_witness = std::make_pair(x, y);
            break;
        }
    }
    if (!res.hypothesis_witness) {
        res.message = "no x, y <= " + std::to_string(x_limit) +
                      " with 0 < 2x^2 - y^2 = A (mod B) square-free and gcd(x, 2y) = 1";
        return res;
    }
    res.hypothesis_holds = true;
    u64 G = gcd(a0, B);
    u64 B1 = B / G;
    u64 target = static_cast<u64>(mod(apply_sign(sign, static_cast<i64>(a0 / G)), B1));
    if (X / G < 2)
        return res;
    for (u64 p : primes_up_to(X / G)) {
        if (p <= G || p % B1 != target)
            continue;
        if ((p * G) % 8 != 1)
            continue;
        res.D.push_back(p * G);
    }
    return res;
}

}  // namespace cldiv
