#include "cldiv/qform.hpp"

#include <algorithm>
#include <bit>

namespace cldiv {

Discriminant discriminant_of(u64 D)
{
    if (D == 0)
        throw DomainError("discriminant_of: D must be positive");
    if (D > static_cast<u64>(max_abs_discriminant / 4))
        throw SizeError("discriminant_of: D = " + std::to_string(D) +
                        " is too large");
    if (!is_squarefree(D))
        throw DomainError("discriminant_of: D = " + std::to_string(D) +
                          " is not square-free");
    i64 d = static_cast<i64>(D);
    return {D % 4 == 3 ? -d : -4 * d, D};
}

Discriminant discriminant_from_value(i64 delta)
{
    if (delta >= 0)
        throw DomainError("discriminant must be negative");
    if (-delta > max_abs_discriminant)
        throw SizeError("discriminant " + std::to_string(delta) + " is too large");
    u64 abs = static_cast<u64>(-delta);
    if (abs % 4 == 3 && is_squarefree(abs))
        return {delta, abs};
    if (abs % 4 == 0) {
        u64 D = abs / 4;
        if ((D % 4 == 1 || D % 4 == 2) && is_squarefree(D))
            return {delta, D};
    }
    throw DomainError(std::to_string(delta) + " is not a fundamental discriminant");
}

std::string to_string(QForm const & f)
{
    return "(" + std::to_string(f.a) + "," + std::to_string(f.b) + "," +
           std::to_string(f.c) + ")";
}

bool QForm::is_reduced() const
{
    if (a <= 0 || b <= -a || b > a || a > c)
        return false;
    return !(a == c && b < 0);
}

QForm identity_form(i64 delta)
{
    i64 b = (delta % 2 == 0) ? 0 : 1;
    return {1, b, (b * b - delta) / 4};
}

QForm inverse(QForm const & f)
{
    return reduce({f.a, -f.b, f.c});
}

QForm reduce(QForm f)
{
    i128 a = f.a, b = f.b, c = f.c;
    i128 delta = b * b - 4 * a * c;
    if (delta >= 0 || a <= 0)
        throw DomainError("reduce: " + to_string(f) + " is not positive definite");
    auto normalize = [&] {
        if (b <= -a || b > a) {
            // b <- b + 2ak with b in (-a, a]
            i128 two_a = 2 * a;
            i128 k = (a - b) / two_a;
            if ((a - b) % two_a != 0 && (a - b) < 0)
                --k;
            b += two_a * k;
            c = (b * b - delta) / (4 * a);
        }
    };
    normalize();
    while (a > c) {
        std::swap(a, c);
        b = -b;
        normalize();
    }
    if (a == c && b < 0)
        b = -b;
    return {static_cast<i64>(a), static_cast<i64>(b), static_cast<i64>(c)};
}

QForm compose(QForm const & f, QForm const & g)
{
    i64 delta = f.discriminant();
    if (delta != g.discriminant())
        throw DomainError("compose: discriminants differ (" + std::to_string(delta) +
                          " vs " + std::to_string(g.discriminant()) + ")");
    i128 a1 = f.a, b1 = f.b, a2 = g.a, b2 = g.b, c2 = g.c;
    i128 s = (b1 + b2) / 2;
    // u a1 + v a2 + w s = e = gcd(a1, a2, s)
    auto [d1, x1, y1] = extended_gcd(a1, a2);
    auto [e, x2, y2] = extended_gcd(d1, s);
    i128 v = x2 * y1;
    i128 w = y2;
    i128 a3 = (a1 / e) * (a2 / e);
    i128 b3 = b2 + 2 * (a2 / e) * mod(v * (s - b2) - w * c2, a1 / e);
    b3 = mod(b3, 2 * a3);
    i128 c3 = (b3 * b3 - delta) / (4 * a3);
    return reduce({static_cast<i64>(a3), static_cast<i64>(b3), static_cast<i64>(c3)});
}

QForm power(QForm const & f, u64 n)
{
    QForm result = identity_form(f.discriminant());
    QForm base = reduce(f);
    while (n > 0) {
        if (n & 1)
            result = compose(result, base);
        n >>= 1;
        if (n > 0)
            base = compose(base, base);
    }
    return result;
}

namespace {

// square roots of delta modulo 4a, reduced to (-a, a]
void roots_mod_4a(i64 delta, u64 a, Factorization const & a_fact,
                  std::vector<i64> & out)
{
    out.clear();
    std::vector<u64> combined = {0};
    u64 modulus = 1;
    bool two_seen = false;
    auto absorb = [&](u64 p, int e) {
        auto roots = hensel_sqrt_prime(delta, p, e);
        if (roots.empty())
            return false;
        u64 pe = 1;
        for (int i = 0; i < e; ++i)
            pe *= p;
        std::vector<u64> next;
        next.reserve(combined.size() * roots.size());
        u64 inv = inverse_mod(static_cast<i128>(modulus), pe);
        for (u64 r1 : combined)
            for (u64 r2 : roots) {
                i128 k = mod((static_cast<i128>(r2) - r1) % static_cast<i128>(pe) * inv,
                             pe);
                next.push_back(static_cast<u64>(r1 + modulus * k));
            }
        combined = std::move(next);
        modulus *= pe;
        return true;
    };
    for (auto const & pp : a_fact) {
        u64 p = static_cast<u64>(pp.prime);
        int e = pp.exponent;
        if (p == 2) {
            e += 2;
            two_seen = true;
        }
        if (!absorb(p, e))
            return;
    }
    if (!two_seen && !absorb(2, 2))
        return;
    i64 two_a = static_cast<i64>(2 * a);
    for (u64 r : combined) {
        i64 b = static_cast<i64>(r % static_cast<u64>(two_a));
        if (b > static_cast<i64>(a))
            b -= two_a;
        out.push_back(b);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace

std::vector<QForm> reduced_forms(Discriminant const & disc, SmallPrimeTable const * table)
{
    i64 delta = disc.value;
    u64 abs = static_cast<u64>(-delta);
    u64 amax = isqrt(abs / 3);
    std::vector<QForm> forms;
    std::vector<i64> bs;
    for (u64 a = 1; a <= amax; ++a) {
        Factorization fa = (table && a <= table->limit()) ? table->factor(a)
                                                          : factorize(a);
        roots_mod_4a(delta, a, fa, bs);
        i64 ai = static_cast<i64>(a);
        for (i64 b : bs) {
            i64 c = (b * b - delta) / (4 * ai);
            if (c < ai || (c == ai && b < 0))
                continue;
            forms.push_back({ai, b, c});
        }
    }
    return forms;
}

u64 class_number(Discriminant const & disc, SmallPrimeTable const * table)
{
    return reduced_forms(disc, table).size();
}

u64 element_order(QForm const & f, Factorization const & h_fact)
{
    QForm id = identity_form(f.discriminant());
    u64 order = static_cast<u64>(h_fact.value());
    for (auto const & pp : h_fact) {
        u64 q = static_cast<u64>(pp.prime);
        for (int i = 0; i < pp.exponent; ++i) {
            if (power(f, order / q) == id)
                order /= q;
            else
                break;
        }
    }
    if (power(f, order) != id)
        throw InvariantError("element_order: order does not divide the class number");
    return order;
}

u64 group_exponent(std::vector<QForm> const & forms, Factorization const & h_fact)
{
    u64 h = static_cast<u64>(h_fact.value());
    u64 exponent = 1;
    for (auto const & f : forms) {
        exponent = lcm(exponent, element_order(f, h_fact));
        if (exponent == h)
            break;
    }
    return exponent;
}

ClassGroupSummary class_group(Discriminant const & disc, SmallPrimeTable const * table)
{
    ClassGroupSummary s{disc, 0, 0, reduced_forms(disc, table), 0};
    s.h = s.reduced_forms.size();
    s.exponent = group_exponent(s.reduced_forms, factorize(s.h));
    s.two_torsion = static_cast<u64>(std::count_if(
            s.reduced_forms.begin(), s.reduced_forms.end(),
            [](QForm const & f) { return f.is_ambiguous(); }));
    return s;
}

bool has_element_of_order(std::vector<QForm> const & forms, u64 g)
{
    if (g == 0)
        throw DomainError("has_element_of_order: g must be positive");
    if (g == 1)
        return true;
    u64 h = forms.size();
    if (h == 0)
        throw DomainError("has_element_of_order: empty form list");
    Factorization g_fact = factorize(g);
    Factorization h_fact = factorize(h);
    for (auto const & pp : g_fact)
        if (h_fact.valuation(pp.prime) < pp.exponent)
            return false;
    QForm id = identity_form(forms.front().discriminant());
    for (auto const & pp : g_fact) {
        if (pp.exponent < 2)
            continue;  // Cauchy: q | h suffices
        u64 q = static_cast<u64>(pp.prime);
        int v = h_fact.valuation(q);
        if (q == 2) {
            // elementary 2-subgroup of rank r: 2^r ambiguous classes
            auto ambiguous = static_cast<u64>(std::count_if(
                    forms.begin(), forms.end(),
                    [](QForm const & f) { return f.is_ambiguous(); }));
            int rank = std::countr_zero(ambiguous);
            // exponent < 2^e forces |Sylow| <= 2^(rank (e-1))
            if (v > rank * (pp.exponent - 1))
                continue;
        }
        u64 qv = 1;
        for (int i = 0; i < v; ++i)
            qv *= q;
        u64 q_em1 = 1;
        for (int i = 0; i + 1 < pp.exponent; ++i)
            q_em1 *= q;
        bool found = false;
        for (auto const & f : forms) {
            QForm y = power(f, h / qv);
            if (power(y, q_em1) != id) {
                found = true;
                break;
            }
        }
        if (!found)
            return false;
    }
    return true;
}

bool has_element_of_order(Discriminant const & disc, u64 g, SmallPrimeTable const * table)
{
    return has_element_of_order(reduced_forms(disc, table), g);
}

int genus_character_count(Discriminant const & disc)
{
    return factorize(static_cast<u64>(-disc.value)).omega();
}

}  // namespace cldiv
