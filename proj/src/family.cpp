#include "puf/family.hpp"

#include <algorithm>

#include "puf/errors.hpp"

namespace puf {

NRDecomp nr_decompose(const Int& d)
{
    if (d < 2)
        throw DomainError("nr_decompose: d must be >= 2");
    Int f = isqrt(d);
    Int r = d - f * f; // 0 <= r <= 2f
    if (r <= f)
        return {f, r};
    return {f + 1, d - (f + 1) * (f + 1)};
}

std::string to_string(Tag t)
{
    switch (t) {
    case Tag::T1: return "T1";
    case Tag::T2: return "T2";
    case Tag::T3: return "T3";
    case Tag::T4: return "T4";
    case Tag::RdBullet1: return "RD_BULLET1";
    case Tag::Bullet2: return "BULLET2";
    case Tag::Unclassified: return "UNCLASSIFIED";
    }
    return "UNCLASSIFIED";
}

Tag parse_tag(const std::string& s)
{
    for (Tag t : {Tag::T1, Tag::T2, Tag::T3, Tag::T4, Tag::RdBullet1,
                  Tag::Bullet2, Tag::Unclassified})
        if (to_string(t) == s)
            return t;
    throw UsageError("unknown tag '" + s + "'");
}

std::optional<DClass> classify_T(const Int& d)
{
    struct Type {
        Tag tag;
        int offset;   // d = n^2 + offset
        bool n_odd;
        long n_min;
    };
    static const Type types[] = {
        {Tag::T1, 1, true, 1},
        {Tag::T2, -1, false, 1},
        {Tag::T3, 4, true, 1},
        {Tag::T4, -4, true, 5},
    };
    for (const auto& t : types) {
        Int sq = d - t.offset;
        if (sgn(sq) <= 0 || !is_square(sq))
            continue;
        Int n = isqrt(sq);
        bool odd = mpz_odd_p(n.get_mpz_t()) != 0;
        if (odd == t.n_odd && n >= t.n_min)
            return DClass{t.tag, std::nullopt, n};
    }
    return std::nullopt;
}

namespace {

void require_sqrt_basis(const FieldDesc& field, const char* what)
{
    if (field.basis() != BasisKind::Sqrt)
        throw NotApplicable(std::string(what) + ": d = " + field.d().get_str()
                            + " is 1 mod 4");
}

Int mod_nonneg(const Int& a, const Int& m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// (m-1)/2 (m+2)^2 + 1
Int bullet2_residue(const Int& m)
{
    return (m - 1) / 2 * (m + 2) * (m + 2) + 1;
}

// m odd >= 3 with beta = m(m+2), if any.
std::optional<Int> beta_parameter(const Int& beta)
{
    Int s = beta + 1;
    if (!is_square(s))
        return std::nullopt;
    Int root = isqrt(s);
    if (mpz_odd_p(root.get_mpz_t()))
        return std::nullopt;
    Int m = root - 1;
    if (m < 3)
        return std::nullopt;
    return m;
}

} // namespace

DClass detect_theorem_case(const FieldDesc& field, const FundamentalUnit& unit)
{
    require_sqrt_basis(field, "detect_theorem_case");
    const Int alpha = unit.value.a().get_num();
    const Int beta = unit.value.b().get_num();
    auto m = beta_parameter(beta);
    NRDecomp nr = nr_decompose(field.d());
    if (!m || nr.r == 1 || nr.r == -1)
        return {};

    const Int b2 = beta * beta;
    const Int res = mod_nonneg(alpha, b2);
    if (res == 1 || res == b2 - 1) {
        int delta = res == 1 ? 1 : -1;
        return DClass{Tag::RdBullet1,
                      TheoremParams{*m, (alpha - delta) / b2, delta}, std::nullopt};
    }
    const Int c = bullet2_residue(*m);
    if (res == c)
        return DClass{Tag::Bullet2, TheoremParams{*m, (alpha - c) / b2, 1},
                      std::nullopt};
    if (res == b2 - c)
        return DClass{Tag::Bullet2, TheoremParams{*m, (alpha + c) / b2, -1},
                      std::nullopt};
    return {};
}

DClass classify(const FieldDesc& field, const FundamentalUnit& unit)
{
    if (auto t = classify_T(field.d()))
        return *t;
    if (field.basis() == BasisKind::Sqrt)
        return detect_theorem_case(field, unit);
    return {};
}

std::optional<int> predicted_class_count(Tag t)
{
    switch (t) {
    case Tag::T1:
    case Tag::T2:
    case Tag::T3:
    case Tag::T4: return 1;
    case Tag::RdBullet1: return 2;
    case Tag::Bullet2: return 3;
    case Tag::Unclassified: break;
    }
    return std::nullopt;
}

A1A2 construct_a1_a2(const FieldDesc& field)
{
    require_sqrt_basis(field, "construct_a1_a2");
    NRDecomp nr = nr_decompose(field.d());
    if (nr.r == 1 || nr.r == -1)
        throw HypothesisViolation("construct_a1_a2: d = " + field.d().get_str()
                                  + " has r = " + nr.r.get_str());
    const Int& n = nr.n;
    const Int& r = nr.r;
    Rat coef = make_rat(2 * n * n + r - 1, 4 * n * (n * n + r));
    FieldElem a1(field, Rat(1, 2), coef);
    return {UnaryForm(a1), UnaryForm(conj(a1))};
}

UnaryForm construct_a3(const FieldDesc& field, const FundamentalUnit& unit)
{
    DClass c = detect_theorem_case(field, unit);
    if (c.tag != Tag::Bullet2)
        throw HypothesisViolation("construct_a3: d = " + field.d().get_str()
                                  + " is not in the n_K = 3 family");
    if (unit.norm_sign != 1)
        throw InternalError("construct_a3: unit of norm -1 with beta = m(m+2), d = "
                            + field.d().get_str());
    return UnaryForm(unit.value);
}

std::vector<FieldElem> predicted_minimal_set(Which which, const FieldDesc& field,
                                             const std::optional<FundamentalUnit>& unit)
{
    require_sqrt_basis(field, "predicted_minimal_set");
    NRDecomp nr = nr_decompose(field.d());
    if (nr.r == 1 || nr.r == -1)
        throw HypothesisViolation("predicted_minimal_set: r = +-1");
    const Rat n(nr.n);
    const bool boundary = nr.r == 1 - nr.n; // r = -(n-1)
    std::vector<FieldElem> out;
    auto pm = [&](const FieldElem& x) {
        out.push_back(x);
        out.push_back(-x);
    };
    switch (which) {
    case Which::A1:
        pm(FieldElem::one(field));
        pm(FieldElem(field, n, -1));
        if (boundary)
            pm(FieldElem(field, n - 1, -1));
        break;
    case Which::A2:
        // conjugate of M(a1)
        pm(FieldElem::one(field));
        pm(FieldElem(field, n, 1));
        if (boundary)
            pm(FieldElem(field, n - 1, 1));
        break;
    case Which::A3: {
        if (!unit)
            throw UsageError("predicted_minimal_set(a3) needs the fundamental unit");
        if (detect_theorem_case(field, *unit).tag != Tag::Bullet2)
            throw HypothesisViolation("predicted_minimal_set(a3): d = "
                                      + field.d().get_str()
                                      + " is not in the n_K = 3 family");
        pm(FieldElem(field, n, -1));
        pm(conj(unit->value) * FieldElem(field, n, 1));
        break;
    }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Int predicted_mu_a3(const TheoremParams& p)
{
    Int half = (p.m + 1) / 2;
    return 2 * (p.k * ((p.m + 1) * (p.m + 1) + 1) + p.delta * half);
}

FamilyParams family_member(const Int& m, const Int& k, int delta)
{
    Int beta = m * (m + 2);
    Int l = k * beta + delta * ((m + 1) / 2);
    Int d = l * l - 2 * delta * k * (m + 1) - 1;
    Int alpha = k * beta * beta + delta * bullet2_residue(m);
    return {m, k, delta, l, d, alpha, beta};
}

FamilyReport generate_family(long m_max, long k_max, const Int& d_cap)
{
    FamilyReport report;
    for (long m = 3; m <= m_max; m += 2) {
        for (long k = 0; k <= k_max; ++k) {
            for (int delta : {-1, 1}) {
                if (delta == -1 && k == 0)
                    continue;
                FamilyParams p = family_member(m, k, delta);
                auto reject = [&](std::string why) {
                    report.rejected.push_back({p, std::move(why)});
                };
                if (p.d < 2) {
                    reject("d < 2");
                    continue;
                }
                if (p.d > d_cap) {
                    reject("d exceeds cap");
                    continue;
                }
                if (!is_squarefree(p.d)) {
                    reject("d not squarefree");
                    continue;
                }
                Int r4 = p.d % 4;
                if (r4 != 2 && r4 != 3) {
                    reject("d = " + r4.get_str() + " mod 4");
                    continue;
                }
                NRDecomp nr = nr_decompose(p.d);
                if (nr.r == 1 || nr.r == -1) {
                    reject("r = " + nr.r.get_str());
                    continue;
                }
                if (p.alpha * p.alpha - p.d * p.beta * p.beta != 1)
                    throw InternalError("family member with alpha^2 - d beta^2 != 1");
                FieldDesc field(p.d);
                FundamentalUnit u = fundamental_unit(field);
                if (u.value != FieldElem(field, Rat(p.alpha), Rat(p.beta))) {
                    reject("not fundamental (fundamental unit is "
                           + to_string(u.value) + ")");
                    continue;
                }
                report.accepted.push_back(p);
            }
        }
    }
    return report;
}

} // namespace puf
