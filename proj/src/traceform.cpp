#include "puf/traceform.hpp"

#include <algorithm>

#include "puf/errors.hpp"

namespace puf {

namespace {

constexpr long kReductionStepCap = 1'000'000;

void sort_unique(std::vector<FieldElem>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// The same form scaled by the lcm of its denominators.
struct IntegerForm {
    Int A, B, C;
    Int scale;

    Int operator()(const Int& x, const Int& y) const
    {
        return A * x * x + B * x * y + C * y * y;
    }
};

IntegerForm integer_form(const BinaryQF& q)
{
    Int l;
    mpz_lcm(l.get_mpz_t(), q.A.get_den_mpz_t(), q.B.get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.C.get_den_mpz_t());
    Rat A = q.A * l, B = q.B * l, C = q.C * l;
    return {A.get_num(), B.get_num(), C.get_num(), l};
}

} // namespace

BinaryQF trace_form(const UnaryForm& a)
{
    const FieldElem& x = a.elem();
    FieldElem w = FieldElem::omega(x.field());
    // Tr(a (x0 + x1 w)^2) = Tr(a) x0^2 + 2 Tr(a w) x0 x1 + Tr(a w^2) x1^2
    return {trace(x), 2 * trace(x * w), trace(x * w * w)};
}

Reduction gauss_reduce(const BinaryQF& q)
{
    if (!q.is_positive_definite())
        throw DomainError("gauss_reduce: form is not positive definite");
    Rat A = q.A, B = q.B, C = q.C;
    UnimodularMap U;
    for (long step = 0; step < kReductionStepCap; ++step) {
        Int t = round_half_even(B / (2 * A));
        if (sgn(t) != 0) {
            // q(x - t y, y)
            C = A * t * t - B * t + C;
            B = B - 2 * A * t;
            U.m01 -= t * U.m00;
            U.m11 -= t * U.m10;
        }
        if (A > C) {
            // q(-y, x)
            std::swap(A, C);
            B = -B;
            U = U * UnimodularMap{0, -1, 1, 0};
            continue;
        }
        return {{A, B, C}, U};
    }
    throw InternalError("gauss_reduce: step cap exceeded");
}

MinData min_data(const UnaryForm& a)
{
    const FieldDesc& field = a.field();
    Reduction red = gauss_reduce(trace_form(a));
    const BinaryQF& r = red.form;
    const IntegerForm iq = integer_form(r);
    // Every nonzero vector of a reduced form has value >= A; enumerate
    // the ellipse q <= A and keep the minimizers.
    const Rat disc = r.discriminant();
    const Int by = floor_sqrt(4 * r.A * r.A / disc);
    const Int bx = floor_sqrt(4 * r.C * r.A / disc);

    Int best = iq.A;
    std::vector<std::pair<Int, Int>> hits;
    for (Int y = -by; y <= by; ++y) {
        for (Int x = -bx; x <= bx; ++x) {
            if (sgn(x) == 0 && sgn(y) == 0)
                continue;
            Int v = iq(x, y);
            if (v < best) {
                best = v;
                hits.clear();
            }
            if (v == best)
                hits.emplace_back(x, y);
        }
    }
    MinData md{make_rat(best, iq.scale), {}};
    md.mu.canonicalize();
    for (const auto& [x, y] : hits) {
        auto [x0, x1] = red.map.apply(x, y);
        md.vectors.push_back(FieldElem::from_basis(field, x0, x1));
    }
    sort_unique(md.vectors);
    return md;
}

MinData brute_force_min(const UnaryForm& a, const Int& box)
{
    if (box < 1)
        throw UsageError("brute_force_min: box must be >= 1");
    const FieldDesc& field = a.field();
    const IntegerForm iq = integer_form(trace_form(a));
    bool have = false;
    Int best;
    std::vector<std::pair<Int, Int>> hits;
    for (Int x1 = -box; x1 <= box; ++x1) {
        for (Int x0 = -box; x0 <= box; ++x0) {
            if (sgn(x0) == 0 && sgn(x1) == 0)
                continue;
            Int v = iq(x0, x1);
            if (!have || v < best) {
                best = v;
                have = true;
                hits.clear();
            }
            if (v == best)
                hits.emplace_back(x0, x1);
        }
    }
    MinData md{make_rat(best, iq.scale), {}};
    md.mu.canonicalize();
    for (const auto& [x0, x1] : hits)
        md.vectors.push_back(FieldElem::from_basis(field, x0, x1));
    sort_unique(md.vectors);
    return md;
}

Int certified_box(const BinaryQF& q, const Rat& mu_bound)
{
    if (!q.is_positive_definite())
        throw DomainError("certified_box: form is not positive definite");
    // q = A (x0 + B x1/2A)^2 + (D/4A) x1^2, and symmetrically in x0.
    const Rat disc = q.discriminant();
    Int b1 = floor_sqrt(4 * q.A * mu_bound / disc);
    Int b0 = floor_sqrt(4 * q.C * mu_bound / disc);
    Int box = std::max(b0, b1);
    return box < 1 ? Int(1) : box;
}

Int certified_box(const UnaryForm& a)
{
    BinaryQF q = trace_form(a);
    return certified_box(q, std::min(q.A, q.C));
}

} // namespace puf
