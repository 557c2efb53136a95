#include "puf/voronoi.hpp"

#include <algorithm>

#include "puf/errors.hpp"
#include "puf/units.hpp"

namespace puf {

namespace {

constexpr long kNeighbourIterationCap = 10'000;
constexpr long kWalkStepCap = 100'000;

// Rational strictly below 1/sqrt(d): floor(2^k / sqrt d) / 2^k.
Rat boundary_below(const Int& d, unsigned k)
{
    Int N = Int(1) << k;
    Int num = isqrt(Int(N * N / d));
    Rat r(num, N);
    r.canonicalize();
    return r;
}

// Rational in (lo, 1/sqrt d), closer to the boundary as k grows.
Rat advance_toward_boundary(const Int& d, const Rat& lo, unsigned& k)
{
    Rat hi = boundary_below(d, k);
    while (hi <= lo) {
        k += 8;
        hi = boundary_below(d, k);
    }
    return (lo + hi) / 2;
}

std::vector<SupportLine> distinct_lines(const std::vector<FieldElem>& vectors)
{
    std::vector<SupportLine> lines;
    for (const auto& v : vectors) {
        SupportLine l = SupportLine::of(v);
        bool seen = std::any_of(lines.begin(), lines.end(),
                                [&](const SupportLine& o) { return o.same_line(l); });
        if (!seen)
            lines.push_back(std::move(l));
    }
    return lines;
}

// The breakpoint at s, with M(s) already known from min_data(a(s)).
PerfectForm breakpoint_at(const FieldDesc& field, const Rat& s, const MinData& md)
{
    FieldElem a(field, 1, s);
    PrimitivePair pp = primitive_normalize(a);
    // p + q sqrt d = p * a(s), so mu scales by p and M is unchanged.
    return PerfectForm{UnaryForm(from_pair(field, pp)), pp, md.mu * pp.p,
                       md.vectors, make_rat(pp.q, pp.p)};
}

PerfectForm step_right(const FieldDesc& field, const Rat& s0,
                       const SupportLine& active)
{
    const Int& d = field.d();
    unsigned k = 16;
    Rat st = advance_toward_boundary(d, s0, k);
    for (long iter = 0; iter < kNeighbourIterationCap; ++iter) {
        MinData md = min_data(form_at(field, st));
        auto lines = distinct_lines(md.vectors);
        bool active_min = std::any_of(lines.begin(), lines.end(),
                                      [&](const SupportLine& l) { return l.same_line(active); });
        if (active_min) {
            if (lines.size() >= 2)
                return breakpoint_at(field, st, md);
            k += 4;
            st = advance_toward_boundary(d, st, k);
            continue;
        }
        // Every minimal line lies strictly below `active` at st and not
        // below it at s0, so it crosses `active` in (s0, st).
        Rat next;
        bool have = false;
        for (const auto& l : lines) {
            Rat drop = active.slope_coef - l.slope_coef;
            if (sgn(drop) <= 0)
                throw InternalError("neighbor_step: minimal line does not "
                                    "cross the active line, d = "
                                    + d.get_str());
            Rat cross = (l.intercept - active.intercept) / drop;
            if (!have || cross > next) {
                next = cross;
                have = true;
            }
        }
        if (!(next > s0 && next < st))
            throw InternalError("neighbor_step: crossing outside (s0, st), d = "
                                + d.get_str());
        st = next;
    }
    throw InternalError("neighbor_step: iteration cap exceeded, d = "
                        + d.get_str());
}

} // namespace

SupportLine SupportLine::of(const FieldElem& x)
{
    FieldElem x2 = x * x;
    return {x, trace(x2), trace(FieldElem::sqrt_d(x.field()) * x2)};
}

UnaryForm form_at(const FieldDesc& field, const Rat& s)
{
    return UnaryForm(FieldElem(field, 1, s));
}

bool is_perfect(const UnaryForm& a)
{
    MinData md = min_data(a);
    auto lines = distinct_lines(md.vectors);
    for (size_t i = 0; i < lines.size(); ++i)
        for (size_t j = i + 1; j < lines.size(); ++j)
            if (lines[i].intercept * lines[j].slope_coef
                != lines[j].intercept * lines[i].slope_coef)
                return true;
    return false;
}

PerfectForm perfect_form(const UnaryForm& a)
{
    PrimitivePair pp = primitive_normalize(a.elem());
    UnaryForm f(from_pair(a.field(), pp));
    MinData md = min_data(f);
    return PerfectForm{f, pp, md.mu, md.vectors, make_rat(pp.q, pp.p)};
}

SupportLine leading_line(const PerfectForm& form)
{
    if (form.min_vectors.empty())
        throw InternalError("leading_line: empty minimal set");
    SupportLine best = SupportLine::of(form.min_vectors.front());
    for (const auto& v : form.min_vectors) {
        SupportLine l = SupportLine::of(v);
        if (l.slope_coef < best.slope_coef)
            best = std::move(l);
    }
    return best;
}

PerfectForm neighbor_step(const FieldDesc& field, const Rat& s0,
                          const SupportLine& active)
{
    if (!(active.vector.field() == field))
        throw UsageError("neighbor_step: active vector from another field");
    MinData md = min_data(form_at(field, s0));
    if (active.at(s0) != md.mu)
        throw UsageError("neighbor_step: active line is not minimal at s0");
    for (const auto& l : distinct_lines(md.vectors))
        if (!l.same_line(active) && l.slope_coef <= active.slope_coef)
            throw UsageError("neighbor_step: active line is not the leading "
                             "minimal line at s0");
    return step_right(field, s0, active);
}

PerfectForm initial_perfect(const FieldDesc& field)
{
    // At s = 0 the form is 1 and M = {+-1} for every d.
    return step_right(field, Rat(0), SupportLine::of(FieldElem::one(field)));
}

WalkResult walk_classes(const FieldDesc& field)
{
    const FundamentalUnit eps = fundamental_unit(field);
    const FieldElem e2 = unit_square(eps);
    const FieldElem e2inv = conj(e2); // norm(eps^2) = 1

    PerfectForm first = initial_perfect(field);
    FieldElem period = e2;
    FieldElem image = first.form.elem() * e2;
    if (!(slope(image) > first.s)) {
        period = e2inv;
        image = first.form.elem() * e2inv;
        if (!(slope(image) > first.s))
            throw InternalError("walk_classes: unit action fixes a slope, d = "
                                + field.d().get_str());
    }
    const PrimitivePair target = primitive_normalize(image);
    const Rat target_s = make_rat(target.q, target.p);

    WalkResult result{field, 0, {first}, period, first};
    for (long step = 0; step < kWalkStepCap; ++step) {
        const PerfectForm& cur = result.classes.back();
        PerfectForm next = step_right(field, cur.s, leading_line(cur));
        if (next.pair == target) {
            result.n_K = static_cast<int>(result.classes.size());
            result.closing = std::move(next);
            return result;
        }
        if (next.s > target_s)
            throw InternalError("walk_classes: walked past the period end, d = "
                                + field.d().get_str());
        result.classes.push_back(std::move(next));
    }
    throw InternalError("walk_classes: step cap exceeded, d = "
                        + field.d().get_str());
}

bool classes_equal(const UnaryForm& a, const UnaryForm& b,
                   const FieldElem& eps2, int k_range)
{
    const PrimitivePair target = primitive_normalize(b.elem());
    if (primitive_normalize(a.elem()) == target)
        return true;
    const FieldElem inv = FieldElem::one(eps2.field()) / eps2;
    FieldElem up = a.elem(), down = a.elem();
    for (int k = 1; k <= k_range; ++k) {
        up *= eps2;
        down *= inv;
        if (primitive_normalize(up) == target || primitive_normalize(down) == target)
            return true;
    }
    return false;
}

} // namespace puf
