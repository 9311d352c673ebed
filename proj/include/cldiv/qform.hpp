#pragma once

#include <vector>

#include "cldiv/arith.hpp"

namespace cldiv {

/*
 * Negative fundamental discriminant of Q(sqrt(-D)) for square-free D > 0:
 * value = -D when D = 3 (mod 4), otherwise -4D.
 */
struct Discriminant {
    i64 value;
    u64 source_D;

    bool operator==(Discriminant const &) const = default;
};

/// Largest |discriminant| handled by the form arithmetic.
inline constexpr i64 max_abs_discriminant = i64{1} << 60;

Discriminant discriminant_of(u64 D);

/// Accepts a negative fundamental discriminant, throws DomainError otherwise.
Discriminant discriminant_from_value(i64 delta);

/// Positive-definite binary quadratic form a x^2 + b x y + c y^2.
struct QForm {
    i64 a, b, c;

    i64 discriminant() const { return b * b - 4 * a * c; }
    bool is_reduced() const;
    /// Reduced form of order dividing two.
    bool is_ambiguous() const { return b == 0 || a == b || a == c; }

    bool operator==(QForm const &) const = default;
    auto operator<=>(QForm const &) const = default;
};

std::string to_string(QForm const & f);

QForm identity_form(i64 delta);
QForm reduce(QForm f);
QForm inverse(QForm const & f);
QForm compose(QForm const & f, QForm const & g);
QForm power(QForm const & f, u64 n);

/*
 * All reduced forms of a fundamental discriminant, sorted by (a, b).
 * a runs up to floor(sqrt(|delta|/3)); b is recovered from the square
 * roots of delta modulo 4a.  The optional table speeds up factoring a.
 */
std::vector<QForm> reduced_forms(Discriminant const & disc,
                                 SmallPrimeTable const * table = nullptr);

u64 class_number(Discriminant const & disc,
                 SmallPrimeTable const * table = nullptr);

/// Multiplicative order of the class of f; h_fact factors the class number.
u64 element_order(QForm const & f, Factorization const & h_fact);

struct ClassGroupSummary {
    Discriminant disc;
    u64 h;
    u64 exponent;
    std::vector<QForm> reduced_forms;
    /// Number of classes of order dividing two.
    u64 two_torsion;
};

ClassGroupSummary class_group(Discriminant const & disc,
                              SmallPrimeTable const * table = nullptr);

/// Running lcm of element orders; the group exponent.
u64 group_exponent(std::vector<QForm> const & forms, Factorization const & h_fact);

/*
 * True iff Cl(disc) has an element of order g, i.e. g divides the group
 * exponent.  Decided one prime power q^e || g at a time on the q-Sylow
 * subgroup, reached by raising forms to h / q^v_q(h).
 */
bool has_element_of_order(Discriminant const & disc, u64 g,
                          SmallPrimeTable const * table = nullptr);
bool has_element_of_order(std::vector<QForm> const & forms, u64 g);

/// Number of prime divisors of a fundamental discriminant (genus characters).
int genus_character_count(Discriminant const & disc);

}  // namespace cldiv
