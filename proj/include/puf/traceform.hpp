#pragma once

/**
 * @file traceform.hpp
 * @brief The rational binary form x -> Tr(a x^2) over the integral basis
 * {1, omega}, its Gauss reduction, and exact minimal vectors.
 *
 * The full trace is used throughout, so min_data(a).mu is the minimum
 * of Tr(a x^2) over nonzero integers x. Working with the half trace
 * would halve every minimum.
 */

#include <utility>
#include <vector>

#include "puf/quadfield.hpp"

namespace puf {

// A*x^2 + B*x*y + C*y^2
struct BinaryQF {
    Rat A;
    Rat B;
    Rat C;

    Rat operator()(const Int& x, const Int& y) const
    {
        return A * x * x + B * x * y + C * y * y;
    }
    Rat discriminant() const { return 4 * A * C - B * B; } // 4AC - B^2
    bool is_positive_definite() const
    {
        return sgn(A) > 0 && sgn(discriminant()) > 0;
    }
    bool is_reduced() const { return abs(B) <= A && A <= C; }

    friend bool operator==(const BinaryQF&, const BinaryQF&) = default;
};

// Integer 2x2 matrix of determinant +-1, acting on column vectors.
struct UnimodularMap {
    Int m00 = 1, m01 = 0;
    Int m10 = 0, m11 = 1;

    Int det() const { return m00 * m11 - m01 * m10; }
    std::pair<Int, Int> apply(const Int& x, const Int& y) const
    {
        return {m00 * x + m01 * y, m10 * x + m11 * y};
    }
    friend UnimodularMap operator*(const UnimodularMap& u, const UnimodularMap& v)
    {
        return {u.m00 * v.m00 + u.m01 * v.m10, u.m00 * v.m01 + u.m01 * v.m11,
                u.m10 * v.m00 + u.m11 * v.m10, u.m10 * v.m01 + u.m11 * v.m11};
    }
    friend bool operator==(const UnimodularMap&, const UnimodularMap&) = default;
};

struct Reduction {
    BinaryQF form; // reduced: |B| <= A <= C
    UnimodularMap map; // original(map * v) == form(v)
};

struct MinData {
    Rat mu;
    std::vector<FieldElem> vectors; // sorted, closed under negation
};

BinaryQF trace_form(const UnaryForm& a);

// Alternates x0 <- x0 - t*x1 (t = nearest integer to B/2A, ties to even)
// with swaps while A > C. DomainError unless positive definite.
Reduction gauss_reduce(const BinaryQF& q);

MinData min_data(const UnaryForm& a);

// Exhaustive scan of 0 < max(|x0|,|x1|) <= box. Independent of
// gauss_reduce; the result is complete only if box is large enough,
// see certified_box().
MinData brute_force_min(const UnaryForm& a, const Int& box);

// A box containing every v with q(v) <= mu_bound, from completing the
// square on q itself (no reduction involved).
Int certified_box(const BinaryQF& q, const Rat& mu_bound);

// Certified box for a trace form, using mu <= min(A, C).
Int certified_box(const UnaryForm& a);

} // namespace puf
