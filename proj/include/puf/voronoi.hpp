#pragma once

/**
 * @file voronoi.hpp
 * @brief Perfect unary forms as breakpoints of the minimum function on
 * the pencil a(s) = 1 + s*sqrt(d), and the neighbour walk over one
 * period of the unit action.
 *
 * Homothety classes of totally positive forms are parametrized by the
 * slope s in (-1/sqrt d, 1/sqrt d). For each integral x the value
 * Tr(a(s) x^2) is affine in s, so mu(s) is concave and piecewise
 * linear. Its breakpoints are exactly the perfect forms, and adjacent
 * breakpoints share the minimal vector active between them.
 *
 * Multiplication by eps^2 moves s monotonically to the right, so one
 * period of breakpoints is a complete list of classes.
 */

#include <vector>

#include "puf/quadfield.hpp"
#include "puf/traceform.hpp"

namespace puf {

// s -> Tr(a(s) x^2) = intercept + s * slope_coef
struct SupportLine {
    FieldElem vector;
    Rat intercept;  // Tr(x^2)
    Rat slope_coef; // Tr(sqrt(d) x^2)

    static SupportLine of(const FieldElem& x);
    Rat at(const Rat& s) const { return intercept + s * slope_coef; }
    // Same affine function (the vectors agree up to sign).
    bool same_line(const SupportLine& o) const
    {
        return intercept == o.intercept && slope_coef == o.slope_coef;
    }
};

struct PerfectForm {
    UnaryForm form; // p + q sqrt(d) for the canonical pair
    PrimitivePair pair;
    Rat mu;
    std::vector<FieldElem> min_vectors;
    Rat s; // slope(form)
};

struct WalkResult {
    FieldDesc field;
    int n_K = 0;
    std::vector<PerfectForm> classes; // one period, increasing s
    FieldElem period_unit;           // eps^2 or eps^-2, whichever moves right
    PerfectForm closing;             // classes[0] * period_unit, reached by the walk
};

// 1 + s sqrt(d); DomainError outside the totally positive range.
UnaryForm form_at(const FieldDesc& field, const Rat& s);

// True iff the minimal vectors determine the form up to nothing, i.e.
// their support lines span a rank-2 space.
bool is_perfect(const UnaryForm& a);

PerfectForm perfect_form(const UnaryForm& a);

// Support line of M(form) with the most negative slope: the one that
// stays minimal immediately to the right of form.s.
SupportLine leading_line(const PerfectForm& form);

// Next breakpoint to the right of s0, where `active` is the unique
// minimal line just right of s0. UsageError if `active` does not satisfy
// that; InternalError if the iteration cap is hit.
PerfectForm neighbor_step(const FieldDesc& field, const Rat& s0,
                          const SupportLine& active);

// First breakpoint to the right of the form a = 1.
PerfectForm initial_perfect(const FieldDesc& field);

WalkResult walk_classes(const FieldDesc& field);

// a ~ b up to homothety and a -> a * eps2^k with |k| <= k_range.
bool classes_equal(const UnaryForm& a, const UnaryForm& b,
                   const FieldElem& eps2, int k_range);

} // namespace puf
