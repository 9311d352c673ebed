#include "cldiv/frey.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "cldiv/shard.hpp"

namespace cldiv {

using boost::multiprecision::cpp_rational;

// ------------------------------------------------------------ invariants

WeierstrassInvariants weierstrass_invariants(std::array<i64, 5> const & a)
{
    BigInt a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
    WeierstrassInvariants w;
    w.b2 = a1 * a1 + 4 * a2;
    w.b4 = 2 * a4 + a1 * a3;
    w.b6 = a3 * a3 + 4 * a6;
    w.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    w.c4 = w.b2 * w.b2 - 24 * w.b4;
    w.c6 = -w.b2 * w.b2 * w.b2 + 36 * w.b2 * w.b4 - 216 * w.b6;
    w.discriminant = -w.b2 * w.b2 * w.b8 - 8 * w.b4 * w.b4 * w.b4 - 27 * w.b6 * w.b6 +
                     9 * w.b2 * w.b4 * w.b6;
    if (w.discriminant == 0)
        throw DomainError("weierstrass_invariants: singular curve");
    BigInt num = w.c4 * w.c4 * w.c4;
    BigInt den = w.discriminant;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num, den);
    if (g != 0) {
        num /= g;
        den /= g;
    }
    w.j_num = num;
    w.j_den = den;
    return w;
}

namespace {

int big_valuation(BigInt n, u64 q)
{
    if (n == 0)
        return j_valuation_infinite;
    int v = 0;
    while (n % q == 0) {
        n /= q;
        ++v;
    }
    return v;
}

u128 to_u128(BigInt n)
{
    if (n < 0)
        n = -n;
    if (n > BigInt(~u128{0} >> 1))
        throw SizeError("curve discriminant exceeds 127 bits");
    u128 out = 0;
    for (int shift = 96; shift >= 0; shift -= 32)
        out = (out << 32) | static_cast<u64>((n >> shift) & 0xffffffffu);
    return out;
}

std::vector<u64> primes_of(Factorization const & f)
{
    std::vector<u64> out;
    for (auto const & pp : f)
        out.push_back(static_cast<u64>(pp.prime));
    return out;
}

}  // namespace

int CurveData::j_valuation(u64 q) const
{
    auto it = j_valuations.find(q);
    return it == j_valuations.end() ? 0 : it->second;
}

int CurveData::disc_valuation(u64 q) const
{
    auto it = disc_valuations.find(q);
    return it == disc_valuations.end() ? 0 : it->second;
}

int CurveData::alpha() const
{
    int n = 0;
    for (auto const & pp : conductor) {
        auto q = static_cast<u64>(pp.prime);
        if (pp.exponent != 1 || q == static_cast<u64>(p))
            continue;
        if (j_valuation(q) >= 0 || is_tate(q))
            ++n;
    }
    return n;
}

TwistData const * CurveData::twist(i64 d) const
{
    for (auto const & t : twists)
        if (t.d == d)
            return &t;
    return nullptr;
}

CurveData make_curve(std::string label, int p, std::array<i64, 5> a,
                     Factorization conductor, int sign, std::set<u64> tate,
                     std::optional<std::pair<i64, i64>> point)
{
    CurveData c;
    c.label = std::move(label);
    c.p = p;
    c.a = a;
    c.conductor = std::move(conductor);
    c.sign = sign;
    c.tate = std::move(tate);
    c.torsion_point = point;
    auto w = weierstrass_invariants(a);
    for (auto const & pp : factorize(to_u128(w.discriminant))) {
        auto q = static_cast<u64>(pp.prime);
        c.disc_valuations[q] = pp.exponent;
        int vn = big_valuation(w.j_num, q);
        c.j_valuations[q] = vn == j_valuation_infinite ? vn : vn - big_valuation(w.j_den, q);
    }
    return c;
}

// ---------------------------------------------------------------- points

namespace {

struct RPoint {
    bool infinity;
    cpp_rational x, y;
};

RPoint add(std::array<i64, 5> const & a, RPoint const & P, RPoint const & Q)
{
    if (P.infinity)
        return Q;
    if (Q.infinity)
        return P;
    cpp_rational a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3];
    cpp_rational lambda;
    if (P.x == Q.x) {
        if (P.y + Q.y + a1 * Q.x + a3 == 0)
            return {true, 0, 0};
        cpp_rational den = 2 * P.y + a1 * P.x + a3;
        lambda = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / den;
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    cpp_rational x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    cpp_rational nu = P.y - lambda * P.x;
    cpp_rational y3 = -(lambda + a1) * x3 - nu - a3;
    return {false, x3, y3};
}

}  // namespace

bool on_curve(std::array<i64, 5> const & a, std::pair<i64, i64> const & P)
{
    BigInt x = P.first, y = P.second;
    BigInt lhs = y * y + a[0] * x * y + a[2] * y;
    BigInt rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
    return lhs == rhs;
}

int point_order(std::array<i64, 5> const & a, std::pair<i64, i64> const & P, int limit)
{
    if (!on_curve(a, P))
        throw DomainError("point_order: point is not on the curve");
    RPoint base{false, P.first, P.second};
    RPoint acc = base;
    for (int n = 1; n <= limit; ++n) {
        if (acc.infinity)
            return n;
        acc = add(a, acc, base);
        if (n == limit)
            break;
    }
    return 0;
}

std::vector<std::string> validate(CurveData const & c)
{
    std::vector<std::string> problems;
    CurveData fresh = make_curve(c.label, c.p, c.a, c.conductor, c.sign, c.tate);
    if (fresh.disc_valuations != c.disc_valuations)
        problems.push_back("discriminant valuations differ from the a-invariants");
    if (fresh.j_valuations != c.j_valuations)
        problems.push_back("j valuations differ from the a-invariants");
    for (auto q : primes_of(c.conductor))
        if (!fresh.disc_valuations.count(q))
            problems.push_back("conductor prime " + std::to_string(q) +
                               " does not divide the discriminant");
    for (auto q : c.tate)
        if (c.conductor.valuation(q) != 1)
            problems.push_back("Tate prime " + std::to_string(q) +
                               " is not multiplicative in the conductor");
    if (c.torsion_point) {
        if (!on_curve(c.a, *c.torsion_point))
            problems.push_back("torsion point is not on the curve");
        else if (point_order(c.a, *c.torsion_point) != c.p)
            problems.push_back("torsion point does not have order p");
    }
    return problems;
}

std::set<u64> s_tilde(CurveData const & c)
{
    std::set<u64> out;
    auto p = static_cast<u64>(c.p);
    for (auto q : primes_of(c.conductor)) {
        if (q == 2 || (q + 1) % p != 0)
            continue;
        if (c.disc_valuation(q) % c.p == 0)
            continue;
        if (c.j_valuation(q) >= 0)
            continue;
        out.insert(q);
    }
    return out;
}

// --------------------------------------------------------- Frey, signs

i64 fundamental_discriminant(i64 d)
{
    if (d == 0)
        throw DomainError("fundamental_discriminant: d must be nonzero");
    if (!is_squarefree(static_cast<u64>(d < 0 ? -d : d)))
        throw DomainError("fundamental_discriminant: d must be square-free");
    return mod(d, 4) == 1 ? d : 4 * d;
}

bool frey_admissible(CurveData const & c, i64 d)
{
    u64 ad = static_cast<u64>(d < 0 ? -d : d);
    if (d == 0 || !is_squarefree(ad))
        throw DomainError("frey_admissible: d must be square-free and nonzero");
    auto N = static_cast<u64>(c.conductor.value());
    auto p = static_cast<u64>(c.p);
    if (gcd(ad, p * N) != 1)
        throw DomainError("frey_admissible: d = " + std::to_string(d) +
                          " is not coprime to p N");
    if (N % 2 == 0 && mod(d, 4) != 3)
        return false;
    for (auto q : primes_of(c.conductor)) {
        if (q == 2 || q == p)
            continue;
        int want = (c.is_tate(q) || c.j_valuation(q) >= 0) ? -1 : 1;
        if (kronecker(d, q) != want)
            return false;
    }
    if (c.j_valuation(p) < 0 && kronecker(d, p) != -1)
        return false;
    return true;
}

int twist_sign(CurveData const & c, i64 D, TwistConvention conv)
{
    i64 d = frey_d(D, conv);
    auto N = static_cast<i64>(c.conductor.value());
    if (d == 1)
        return c.sign;
    i64 fd = fundamental_discriminant(d);
    if (gcd(static_cast<u64>(fd < 0 ? -fd : fd), static_cast<u64>(N)) != 1)
        throw DomainError("twist_sign: twist discriminant " + std::to_string(fd) +
                          " is not coprime to N = " + std::to_string(N));
    return c.sign * kronecker(fd, -N);
}

int twist_sign_via(TwistData const & t, i64 D, TwistConvention conv)
{
    i64 delta = frey_d(D, conv);
    if (delta % t.d != 0)
        throw DomainError("twist_sign_via: d = " + std::to_string(t.d) +
                          " does not divide the twist parameter");
    i64 e = delta / t.d;
    auto N = static_cast<i64>(t.conductor.value());
    if (e == 1)
        return t.sign;
    i64 fd = fundamental_discriminant(e);
    if (gcd(static_cast<u64>(fd < 0 ? -fd : fd), static_cast<u64>(N)) != 1)
        throw DomainError("twist_sign_via: twist discriminant " + std::to_string(fd) +
                          " is not coprime to N(E_d) = " + std::to_string(N));
    return t.sign * kronecker(fd, -N);
}

// ----------------------------------------------------------- build_class

namespace {

struct LocalChoice {
    u64 prime;
    u64 modulus;
    std::vector<u64> allowed;
    std::string reason;
    bool restricted;  // a Frey condition removed some units
};

int member_sign(CurveData const & c, CorollaryCase which, std::optional<i64> d,
                TwistConvention conv, u64 D)
{
    try {
        if (which == CorollaryCase::case3)
            return twist_sign_via(*c.twist(*d), static_cast<i64>(D), conv);
        return twist_sign(c, static_cast<i64>(D), conv);
    } catch (DomainError const &) {
        return 0;
    }
}

std::optional<u64> squarefree_member(i64 A, u64 B)
{
    u64 start = static_cast<u64>(mod(A, B));
    if (start == 0)
        start = B;
    for (u64 k = 0; k < 100000; ++k) {
        u64 D = start + k * B;
        if (is_squarefree(D))
            return D;
    }
    return std::nullopt;
}

}  // namespace

BuiltClass build_class(CurveData const & c, CorollaryCase which, std::optional<i64> d,
                       TwistConvention conv)
{
    auto p = static_cast<u64>(c.p);
    auto N = static_cast<u64>(c.conductor.value());
    TwistData const * tw = nullptr;
    auto n_primes = primes_of(c.conductor);
    std::set<u64> primes(n_primes.begin(), n_primes.end());
    primes.insert(p);
    std::set<u64> d_primes, tw_primes;
    if (which == CorollaryCase::case3) {
        if (!d || *d <= 0 || !is_squarefree(static_cast<u64>(*d)))
            throw DomainError("build_class: case 3 needs a square-free d > 0");
        tw = c.twist(*d);
        if (!tw)
            throw DomainError("build_class: no twist data for d = " + std::to_string(*d) +
                              " on " + c.label);
        for (auto q : primes_of(factorize(static_cast<u64>(*d))))
            d_primes.insert(q);
        for (auto q : primes_of(tw->conductor))
            tw_primes.insert(q);
        primes.insert(d_primes.begin(), d_primes.end());
        primes.insert(tw_primes.begin(), tw_primes.end());
    } else {
        d.reset();
    }

    std::vector<LocalChoice> locals;
    for (u64 l : primes) {
        LocalChoice lc{l, l == 2 ? 8 : l, {}, "", false};
        bool divides_pN = l == p || N % l == 0;
        if (d_primes.count(l)) {
            if (divides_pN)
                throw UnsatisfiableClass("build_class: d shares the prime " +
                                         std::to_string(l) + " with p N", l);
            lc.modulus = l == 2 ? 8 : l * l;
            for (u64 x = 0; x < lc.modulus; ++x)
                if (x % l == 0 && x % (l * l) != 0)
                    lc.allowed.push_back(x);
            lc.reason = "exactly divisible by " + std::to_string(l) + " (d | D)";
            locals.push_back(std::move(lc));
            continue;
        }
        std::vector<std::string> why;
        for (u64 x = 1; x < lc.modulus; ++x) {
            if (x % l == 0)
                continue;
            i64 fd = frey_d(static_cast<i64>(x), conv);
            bool ok = true;
            if (l == 2 && N % 2 == 0 && mod(fd, 4) != 3)
                ok = false;
            if (l != 2 && l != p && N % l == 0) {
                int want = (c.is_tate(l) || c.j_valuation(l) >= 0) ? -1 : 1;
                if (kronecker(fd, l) != want)
                    ok = false;
            }
            if (l == p && c.j_valuation(p) < 0 && kronecker(fd, l) != -1)
                ok = false;
            if (ok)
                lc.allowed.push_back(x);
            else
                lc.restricted = true;
        }
        if (l == 2 && N % 2 == 0)
            why.push_back("Frey d = 3 (mod 4)");
        if (l != 2 && l != p && N % l == 0)
            why.push_back((c.is_tate(l) || c.j_valuation(l) >= 0)
                                  ? "(d/q) = -1: Tate or v_q(j) >= 0"
                                  : "(d/q) = +1: v_q(j) < 0, not Tate");
        if (l == p)
            why.push_back(c.j_valuation(p) < 0 ? "(d/p) = -1: v_p(j) < 0" : "coprime to p");
        if (tw_primes.count(l) && !(N % l == 0) && l != p)
            why.push_back("coprime to N(E_d)");
        if (why.empty())
            why.push_back("coprime to N");
        for (std::size_t i = 0; i < why.size(); ++i)
            lc.reason += (i ? "; " : "") + why[i];
        if (lc.allowed.empty())
            throw UnsatisfiableClass("build_class: no admissible residue modulo " +
                                     std::to_string(lc.modulus), l);
        locals.push_back(std::move(lc));
    }

    // odometer over residue choices, first prime most significant
    std::vector<std::size_t> idx(locals.size(), 0);
    u64 B = 1;
    for (auto const & lc : locals)
        B *= lc.modulus;
    constexpr u64 combo_cap = 1'000'000;
    for (u64 tries = 0; tries < combo_cap; ++tries) {
        std::vector<Congruence> sys;
        for (std::size_t i = 0; i < locals.size(); ++i)
            sys.push_back({locals[i].allowed[idx[i]], locals[i].modulus});
        auto A = static_cast<i64>(crt(sys).residue);
        auto rep = squarefree_member(A, B);
        if (rep && member_sign(c, which, d, conv, *rep) == 1 &&
            frey_admissible(c, frey_d(static_cast<i64>(*rep), conv))) {
            BuiltClass out{A, B, which, d, conv, *rep, {}};
            for (std::size_t i = 0; i < locals.size(); ++i)
                out.conditions.push_back({locals[i].prime, locals[i].modulus,
                                          locals[i].allowed[idx[i]], locals[i].reason});
            return out;
        }
        // advance the last index fastest; stop after wrapping the first
        std::size_t k = locals.size();
        while (k > 0 && ++idx[k - 1] == locals[k - 1].allowed.size()) {
            idx[k - 1] = 0;
            --k;
        }
        if (k == 0)
            break;
    }
    // every combination gives sign -1: blame the constrained primes
    std::string blamed;
    u64 first = p;
    bool have = false;
    for (auto const & lc : locals)
        if (lc.restricted || lc.prime == p) {
            if (!have) {
                first = lc.prime;
                have = true;
            }
            blamed += (blamed.empty() ? "" : ", ") + std::to_string(lc.prime);
        }
    throw UnsatisfiableClass("build_class: twist sign is -1 on every class satisfying the "
                             "local conditions; the sign is fixed by the conditions at " +
                                     blamed,
                             first);
}

MemberCheck check_member(CurveData const & c, BuiltClass const & cls, u64 D)
{
    MemberCheck m{};
    m.in_class = D > 0 && mod(static_cast<i128>(D) - cls.A, cls.B) == 0;
    m.squarefree = D > 0 && is_squarefree(D);
    try {
        m.admissible = frey_admissible(c, frey_d(static_cast<i64>(D), cls.conv));
    } catch (DomainError const &) {
        m.admissible = false;
    }
    m.sign = member_sign(c, cls.which, cls.d, cls.conv, D);
    return m;
}

SampleReport sample_class(CurveData const & c, BuiltClass const & cls, u64 count, u64 seed,
                          u64 bound)
{
    SampleReport r;
    std::mt19937_64 rng(seed);
    u64 kmax = bound / cls.B;
    if (kmax == 0)
        throw DomainError("sample_class: bound below the modulus");
    std::uniform_int_distribution<u64> dist(0, kmax - 1);
    u64 base = static_cast<u64>(mod(cls.A, cls.B));
    for (u64 attempts = 0; r.checked < count && attempts < 100 * count + 1000; ++attempts) {
        u64 D = base + dist(rng) * cls.B;
        if (D == 0 || !is_squarefree(D))
            continue;
        ++r.checked;
        if (!check_member(c, cls, D).ok()) {
            ++r.failures;
            if (!r.first_failure)
                r.first_failure = D;
        }
    }
    return r;
}

Rational corollary_exponent(int p)
{
    if (p != 3 && p != 5 && p != 7)
        throw DomainError("corollary_exponent: p must be 3, 5 or 7");
    return Rational(1, 2) + Rational(3, 2 * p + 2);
}

std::vector<HypothesisCheck> check_hypotheses(CurveData const & c, CorollaryCase which,
                                              std::optional<i64> d)
{
    std::vector<HypothesisCheck> out;
    auto p = static_cast<u64>(c.p);
    auto N = static_cast<u64>(c.conductor.value());
    auto st = s_tilde(c);
    std::string st_text;
    for (auto q : st)
        st_text += (st_text.empty() ? "" : ",") + std::to_string(q);
    out.push_back({"s_tilde empty", st.empty(), "{" + st_text + "}"});
    if (c.torsion_point) {
        bool on = on_curve(c.a, *c.torsion_point);
        int ord = on ? point_order(c.a, *c.torsion_point) : 0;
        out.push_back({"torsion point of order p", on && ord == c.p,
                       "(" + std::to_string(c.torsion_point->first) + "," +
                               std::to_string(c.torsion_point->second) + ") " +
                               (on ? "order " + std::to_string(ord) : "not on curve")});
    }
    int vpN = c.conductor.valuation(p);
    int vpj = c.j_valuation(p);
    std::string vpj_text =
            vpj == j_valuation_infinite ? "inf" : std::to_string(vpj);
    switch (which) {
    case CorollaryCase::case1:
        out.push_back({"N odd", N % 2 == 1, "N = " + std::to_string(N)});
        out.push_back({"v_p(N) odd", vpN % 2 == 1, "v_p(N) = " + std::to_string(vpN)});
        out.push_back({"v_p(j) >= 0", vpj >= 0, "v_p(j) = " + vpj_text});
        out.push_back({"p | N", vpN > 0, ""});
        break;
    case CorollaryCase::case2: {
        int alpha = c.alpha();
        int lhs = alpha % 2 == 0 ? 1 : -1;
        out.push_back({"N odd", N % 2 == 1, "N = " + std::to_string(N)});
        out.push_back({"(-1)^alpha = -sign", lhs == -c.sign,
                       "alpha = " + std::to_string(alpha) +
                               ", sign = " + std::to_string(c.sign)});
        break;
    }
    case CorollaryCase::case3: {
        bool d_ok = d && *d > 0 && is_squarefree(static_cast<u64>(*d));
        out.push_back({"d square-free and positive", d_ok, d ? std::to_string(*d) : "none"});
        TwistData const * t = d ? c.twist(*d) : nullptr;
        out.push_back({"twist data present", t != nullptr, ""});
        if (t) {
            bool fresh = false;
            for (auto q : primes_of(t->conductor))
                if (N % q != 0)
                    fresh = true;
            out.push_back({"N(E_d) has a new prime", fresh,
                           "N(E_d) = " + format_factorization(t->conductor)});
            auto Nt = static_cast<u64>(t->conductor.value());
            bool even = gcd(N, Nt) % 2 == 0;
            out.push_back({"d = 3 (mod 4) if 2 | gcd(N, N(E_d))",
                           !even || (d_ok && *d % 4 == 3), ""});
        }
        break;
    }
    }
    return out;
}

// --------------------------------------------------------------- screen

ScreenResult screen_twists(CurveData const & c, u64 X, CorollaryCase which,
                           std::optional<i64> d, TwistConvention conv, unsigned shards)
{
    ScreenResult res{build_class(c, which, d, conv), {}, 0};
    auto p = static_cast<u64>(c.p);
    if (X == 0)
        return res;
    SmallPrimeTable table(isqrt(static_cast<u128>(4) * X / 3) + 2);
    auto segments = split_range(1, X, std::max(1u, shards));
    struct Part {
        u64 members = 0;
        std::vector<TwistWitness> found;
    };
    auto parts = run_sharded(segments.size(), shards, [&](std::size_t i) {
        Part part;
        for (u64 D : squarefree_in_ap(segments[i].lo, segments[i].hi, res.cls.A,
                                      res.cls.B)) {
            ++part.members;
            Discriminant disc = discriminant_of(D);
            auto forms = reduced_forms(disc, &table);
            if (!has_element_of_order(forms, p))
                continue;
            u64 h = forms.size();
            u64 pv = 1;
            while (h % (pv * p) == 0)
                pv *= p;
            QForm id = identity_form(disc.value);
            std::optional<QForm> cert;
            for (auto const & f : forms) {
                QForm y = power(f, h / pv);
                if (y == id)
                    continue;
                while (power(y, p) != id)
                    y = power(y, p);
                cert = y;
                break;
            }
            if (!cert)
                throw InvariantError("screen_twists: no form of order p found");
            part.found.push_back({D, h, *cert, check_member(c, res.cls, D)});
        }
        return part;
    });
    for (auto & part : parts) {
        res.members += part.members;
        for (auto & w : part.found)
            res.witnesses.push_back(w);
    }
    return res;
}

// -------------------------------------------------------------- dataset

Factorization parse_factorization(std::string const & s)
{
    std::vector<PrimePower> out;
    if (s == "1")
        return {};
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '*')) {
        auto caret = part.find('^');
        u64 q = std::stoull(part.substr(0, caret));
        int e = caret == std::string::npos ? 1 : std::stoi(part.substr(caret + 1));
        if (!is_prime(q) || e < 1)
            throw DomainError("bad factorization '" + s + "'");
        out.push_back({q, e});
    }
    std::sort(out.begin(), out.end(),
              [](PrimePower const & x, PrimePower const & y) { return x.prime < y.prime; });
    return Factorization(out);
}

std::string format_factorization(Factorization const & f)
{
    if (f.empty())
        return "1";
    std::string out;
    for (auto const & pp : f) {
        if (!out.empty())
            out += '*';
        out += to_string(pp.prime);
        if (pp.exponent > 1)
            out += "^" + std::to_string(pp.exponent);
    }
    return out;
}

namespace {

std::vector<std::string> split(std::string const & s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep))
        out.push_back(part);
    return out;
}

int parse_sign(std::string const & s)
{
    if (s == "+1" || s == "1")
        return 1;
    if (s == "-1")
        return -1;
    throw DomainError("bad root number '" + s + "'");
}

char const * const builtin_text = R"(# curve <label> <p> <a1,a2,a3,a4,a6> <conductor> <sign> <tate primes|-> <point x,y|->
curve 27a4 3 0,0,1,-30,63 3^3 +1 - 3,0
curve 175a2 5 0,-1,1,-148,748 5^2*7 -1 7 1,24
curve 574i1 7 1,-1,1,-19353,958713 2*7*41 -1 2,7 103,172
# twist <label> <d> <conductor of E_d> <sign of E_d>
twist 574i1 3 2^4*3^2*7*41 +1
)";

}  // namespace

std::vector<CurveData> parse_curves(std::string const & text)
{
    std::vector<CurveData> curves;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::stringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        auto where = " on line " + std::to_string(lineno);
        try {
            if (tok[0] == "curve") {
                if (tok.size() != 8)
                    throw DomainError("curve record needs 7 fields");
                auto ai = split(tok[3], ',');
                if (ai.size() != 5)
                    throw DomainError("need five a-invariants");
                std::array<i64, 5> a{};
                for (int i = 0; i < 5; ++i)
                    a[i] = std::stoll(ai[i]);
                std::set<u64> tate;
                if (tok[6] != "-")
                    for (auto const & q : split(tok[6], ','))
                        tate.insert(std::stoull(q));
                std::optional<std::pair<i64, i64>> pt;
                if (tok[7] != "-") {
                    auto xy = split(tok[7], ',');
                    if (xy.size() != 2)
                        throw DomainError("bad point");
                    pt = std::make_pair(std::stoll(xy[0]), std::stoll(xy[1]));
                }
                curves.push_back(make_curve(tok[1], std::stoi(tok[2]), a,
                                            parse_factorization(tok[4]), parse_sign(tok[5]),
                                            tate, pt));
            } else if (tok[0] == "twist") {
                if (tok.size() != 5)
                    throw DomainError("twist record needs 4 fields");
                auto it = std::find_if(curves.begin(), curves.end(),
                                       [&](CurveData const & c) { return c.label == tok[1]; });
                if (it == curves.end())
                    throw DomainError("twist of unknown curve " + tok[1]);
                it->twists.push_back({std::stoll(tok[2]), parse_factorization(tok[3]),
                                      parse_sign(tok[4])});
            } else {
                throw DomainError("unknown record type '" + tok[0] + "'");
            }
        } catch (std::invalid_argument const &) {
            throw DomainError("malformed number" + where);
        } catch (DomainError const & e) {
            throw DomainError(std::string(e.what()) + where);
        }
    }
    return curves;
}

std::vector<CurveData> load_curves(std::string const & path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open curve dataset " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_curves(ss.str());
}

std::vector<CurveData> const & builtin_curves()
{
    static std::vector<CurveData> const curves = parse_curves(builtin_text);
    return curves;
}

CurveData const & find_curve(std::vector<CurveData> const & curves, std::string const & label)
{
    for (auto const & c : curves)
        if (c.label == label)
            return c;
    throw DomainError("unknown curve label '" + label + "'");
}

}  // namespace cldiv
