#include "puf/units.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "puf/errors.hpp"

namespace puf {

CFExpansion cf_sqrt(const Int& d)
{
    if (d < 2)
        throw DomainError("cf_sqrt: d must be >= 2");
    Int a0 = isqrt(d);
    if (a0 * a0 == d)
        throw DomainError("cf_sqrt: " + d.get_str() + " is a perfect square");

    CFExpansion cf{d, a0, {}};
    // State (P, Q) for the complete quotient (P + sqrt d)/Q.
    Int P = a0;
    Int Q = d - a0 * a0;
    const Int P1 = P, Q1 = Q;
    for (;;) {
        Int a = (a0 + P) / Q;
        cf.period.push_back(a);
        P = a * Q - P;
        Q = (d - P * P) / Q;
        if (P == P1 && Q == Q1)
            break;
    }
    return cf;
}

namespace {

// floor((P + sqrt D)/Q) for irrational sqrt D, s = isqrt(D).
Int surd_floor(const Int& P, const Int& Q, const Int& s)
{
    Int num = P + s;
    if (sgn(Q) > 0) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
        return q;
    }
    Int negQ = -Q;
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), negQ.get_mpz_t());
    return -q - 1;
}

FundamentalUnit unit_sqrt_basis(const FieldDesc& field)
{
    CFExpansion cf = cf_sqrt(field.d());
    // Convergent p/q of [a0; period[0], ..., period[l-2]].
    Int p_prev = 1, p = cf.a0;
    Int q_prev = 0, q = 1;
    for (size_t i = 0; i + 1 < cf.period.size(); ++i) {
        Int pn = cf.period[i] * p + p_prev;
        Int qn = cf.period[i] * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(pn);
        q = std::move(qn);
    }
    FieldElem e(field, Rat(p), Rat(q));
    int sign = (cf.period.size() % 2 == 1) ? -1 : 1;
    if (norm(e) != sign)
        throw InternalError("continued fraction unit has wrong norm for d = "
                            + field.d().get_str());
    return {e, sign};
}

// d = 1 mod 4: expand xi = (sqrt d - 1)/2 = -conj(omega). For a unit
// x + y*omega > 1 the ratio x/y is a convergent of xi, so the first
// convergent of norm +-1 is the fundamental unit of Z[omega].
FundamentalUnit unit_half_basis(const FieldDesc& field)
{
    const Int& d = field.d();
    const Int s = isqrt(d);
    Int P = -1, Q = 2;
    Int p_prev = 1, p = 0;
    Int q_prev = 0, q = 1;
    bool first = true;
    for (long iter = 0; iter < 10'000'000; ++iter) {
        Int a = surd_floor(P, Q, s);
        if (first) {
            p = a;
            q = 1;
            first = false;
        } else {
            Int pn = a * p + p_prev;
            Int qn = a * q + q_prev;
            p_prev = std::move(p);
            q_prev = std::move(q);
            p = std::move(pn);
            q = std::move(qn);
        }
        // x + y*omega with x = p, y = q
        FieldElem e(field, p + make_rat(q, 2), make_rat(q, 2));
        Rat n = norm(e);
        if (n == 1 || n == -1)
            return {e, n == 1 ? 1 : -1};
        P = a * Q - P;
        Q = (d - P * P) / Q;
    }
    throw InternalError("no unit found in continued fraction of omega, d = "
                        + d.get_str());
}

// ---- brute-force oracle ---------------------------------------------------

using u128 = unsigned __int128;

bool is_square_u128(u128 n)
{
    long double r = std::sqrt(static_cast<long double>(n));
    u128 x = static_cast<u128>(r);
    while (x > 0 && x * x > n)
        --x;
    while ((x + 1) * (x + 1) <= n)
        ++x;
    return x * x == n;
}

u128 isqrt_u128(u128 n)
{
    long double r = std::sqrt(static_cast<long double>(n));
    u128 x = static_cast<u128>(r);
    while (x > 0 && x * x > n)
        --x;
    while ((x + 1) * (x + 1) <= n)
        ++x;
    return x;
}

std::vector<bool> squares_mod(unsigned m)
{
    std::vector<bool> sq(m, false);
    for (unsigned x = 0; x < m; ++x)
        sq[(static_cast<uint64_t>(x) * x) % m] = true;
    return sq;
}

// Filters v -> [exists e: d v^2 + e is a square mod m], per e.
struct ResidueFilter {
    unsigned m;
    std::vector<std::array<bool, 2>> ok; // indexed by v mod m, then e index
};

ResidueFilter make_filter(unsigned m, uint64_t d, const std::array<int64_t, 2>& es)
{
    auto sq = squares_mod(m);
    ResidueFilter f{m, std::vector<std::array<bool, 2>>(m)};
    for (unsigned v = 0; v < m; ++v) {
        for (int i = 0; i < 2; ++i) {
            int64_t val = static_cast<int64_t>((d % m) * ((static_cast<uint64_t>(v) * v) % m) % m)
                        + es[i];
            val %= static_cast<int64_t>(m);
            if (val < 0)
                val += m;
            f.ok[v][i] = sq[static_cast<size_t>(val)];
        }
    }
    return f;
}

// Smallest v in [1, vmax] with d v^2 + e a perfect square for some e.
// Returns {v, u, e index} or nothing.
struct Hit {
    uint64_t v;
    u128 u;
    int e;
};

std::optional<Hit> search_u128(uint64_t d, uint64_t vmax,
                               const std::array<int64_t, 2>& es)
{
    auto exact = [&](uint64_t v, int i) -> std::optional<Hit> {
        u128 n = static_cast<u128>(d) * v * v;
        n = es[i] < 0 ? n - static_cast<u128>(-es[i]) : n + static_cast<u128>(es[i]);
        if (is_square_u128(n))
            return Hit{v, isqrt_u128(n), i};
        return std::nullopt;
    };

    // Short prefix: plain loop.
    constexpr uint64_t plain_limit = 1 << 16;
    for (uint64_t v = 1; v <= std::min(vmax, plain_limit); ++v)
        for (int i = 0; i < 2; ++i)
            if (auto h = exact(v, i))
                return h;
    if (vmax <= plain_limit)
        return std::nullopt;

    // Wheel over M = 64*63*65*11 plus per-prime filters on candidates.
    const std::array<unsigned, 4> wheel_mods{64, 63, 65, 11};
    uint64_t M = 1;
    std::vector<ResidueFilter> wf;
    for (unsigned m : wheel_mods) {
        M *= m;
        wf.push_back(make_filter(m, d, es));
    }
    const std::array<unsigned, 12> extra_mods{17, 19, 23, 29, 31, 37,
                                               41, 43, 47, 53, 59, 61};
    std::vector<ResidueFilter> xf;
    for (unsigned p : extra_mods)
        xf.push_back(make_filter(p, d, es));

    struct Spoke {
        uint32_t r;
        uint8_t mask; // bit i: e index i passes the wheel
        std::array<uint8_t, 12> rmod;
    };
    std::vector<Spoke> wheel;
    for (uint64_t r = 0; r < M; ++r) {
        uint8_t mask = 3;
        for (const auto& f : wf) {
            const auto& o = f.ok[r % f.m];
            mask &= static_cast<uint8_t>((o[0] ? 1 : 0) | (o[1] ? 2 : 0));
            if (!mask)
                break;
        }
        if (!mask)
            continue;
        Spoke s{static_cast<uint32_t>(r), mask, {}};
        for (size_t j = 0; j < extra_mods.size(); ++j)
            s.rmod[j] = static_cast<uint8_t>(r % extra_mods[j]);
        wheel.push_back(s);
    }

    std::array<unsigned, 12> base_mod{};
    for (uint64_t base = 0; base <= vmax; base += M) {
        for (size_t j = 0; j < extra_mods.size(); ++j)
            base_mod[j] = static_cast<unsigned>(base % extra_mods[j]);
        for (const Spoke& s : wheel) {
            uint64_t v = base + s.r;
            if (v <= plain_limit)
                continue;
            if (v > vmax)
                return std::nullopt;
            uint8_t mask = s.mask;
            for (size_t j = 0; j < extra_mods.size() && mask; ++j) {
                unsigned idx = base_mod[j] + s.rmod[j];
                if (idx >= extra_mods[j])
                    idx -= extra_mods[j];
                const auto& o = xf[j].ok[idx];
                mask &= static_cast<uint8_t>((o[0] ? 1 : 0) | (o[1] ? 2 : 0));
            }
            for (int i = 0; i < 2; ++i)
                if (mask & (1 << i))
                    if (auto h = exact(v, i))
                        return h;
        }
    }
    return std::nullopt;
}

std::string u128_str(u128 x)
{
    if (x == 0)
        return "0";
    std::string s;
    while (x > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(x % 10)));
        x /= 10;
    }
    return s;
}

} // namespace

FundamentalUnit compute_fundamental_unit(const FieldDesc& field)
{
    if (field.basis() == BasisKind::Half)
        return unit_half_basis(field);
    return unit_sqrt_basis(field);
}

FundamentalUnit fundamental_unit(const FieldDesc& field)
{
    auto& cache = UnitCache::instance();
    if (auto hit = cache.find(field.d()))
        return {FieldElem(field, hit->value.a(), hit->value.b()), hit->norm_sign};
    FundamentalUnit u = compute_fundamental_unit(field);
    cache.insert(field.d(), u);
    return u;
}

FieldElem unit_square(const FundamentalUnit& u) { return u.value * u.value; }

FundamentalUnit unit_brute_oracle(const FieldDesc& field, const Int& bound)
{
    if (bound < 1)
        throw UsageError("unit_brute_oracle: bound must be >= 1");
    const bool half = field.basis() == BasisKind::Half;
    // Search over v = b (or v = 2b when d = 1 mod 4): d v^2 + e = u^2.
    const Int vmax = half ? Int(2 * bound) : bound;
    const std::array<int64_t, 2> es = half ? std::array<int64_t, 2>{-4, 4}
                                           : std::array<int64_t, 2>{-1, 1};
    auto make_unit = [&](const Int& u, const Int& v, int64_t e) {
        Rat a = half ? make_rat(u, 2) : Rat(u);
        Rat b = half ? make_rat(v, 2) : Rat(v);
        a.canonicalize();
        b.canonicalize();
        return FundamentalUnit{FieldElem(field, a, b), e > 0 ? 1 : -1};
    };

    // d * vmax^2 + 4 must fit in 126 bits for the fast path.
    Int top = field.d() * vmax * vmax + 4;
    if (mpz_sizeinbase(top.get_mpz_t(), 2) <= 126 && vmax.fits_ulong_p()
        && field.d().fits_ulong_p()) {
        auto hit = search_u128(field.d().get_ui(), vmax.get_ui(), es);
        if (!hit)
            throw SearchExhausted("no unit with b <= " + bound.get_str()
                                  + " for d = " + field.d().get_str());
        return make_unit(Int(u128_str(hit->u)), Int(hit->v), es[hit->e]);
    }

    for (Int v = 1; v <= vmax; ++v) {
        for (int64_t e : es) {
            Int n = field.d() * v * v + e;
            Int u = isqrt(n);
            if (u * u == n)
                return make_unit(u, v, e);
        }
    }
    throw SearchExhausted("no unit with b <= " + bound.get_str() + " for d = "
                          + field.d().get_str());
}

UnitCache& UnitCache::instance()
{
    static UnitCache cache;
    return cache;
}

std::optional<FundamentalUnit> UnitCache::find(const Int& d) const
{
    std::lock_guard lock(mutex_);
    auto it = table_.find(d);
    if (it == table_.end())
        return std::nullopt;
    return it->second;
}

void UnitCache::insert(const Int& d, const FundamentalUnit& u)
{
    std::lock_guard lock(mutex_);
    table_.insert_or_assign(d, u);
}

std::map<Int, FundamentalUnit> UnitCache::snapshot() const
{
    std::lock_guard lock(mutex_);
    return table_;
}

void UnitCache::clear()
{
    std::lock_guard lock(mutex_);
    table_.clear();
}

} // namespace puf
