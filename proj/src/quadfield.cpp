#include "puf/quadfield.hpp"

#include <ostream>
#include <sstream>

#include "puf/errors.hpp"

namespace puf {

Rat make_rat(const Int& num, const Int& den)
{
    if (sgn(den) == 0)
        throw ArithmeticError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat parse_rat(std::string_view text)
{
    auto parse_int = [&](std::string_view s) {
        std::string buf(s);
        if (buf.empty())
            throw UsageError("malformed rational '" + std::string(text) + "'");
        size_t i = (buf[0] == '-' || buf[0] == '+') ? 1 : 0;
        if (i == buf.size())
            throw UsageError("malformed rational '" + std::string(text) + "'");
        for (; i < buf.size(); ++i)
            if (buf[i] < '0' || buf[i] > '9')
                throw UsageError("malformed rational '" + std::string(text)
                                 + "'");
        if (buf[0] == '+')
            buf.erase(0, 1);
        return Int(buf);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rat(parse_int(text));
    Int den = parse_int(text.substr(slash + 1));
    if (sgn(den) == 0)
        throw UsageError("zero denominator in '" + std::string(text) + "'");
    return make_rat(parse_int(text.substr(0, slash)), den);
}

std::string to_string(const Int& x) { return x.get_str(); }

std::string to_string(const Rat& x)
{
    if (x.get_den() == 1)
        return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Int isqrt(const Int& n)
{
    if (sgn(n) < 0)
        throw DomainError("isqrt of negative integer");
    if (sgn(n) == 0)
        return 0;
    // Newton from an upper bound 2^ceil(bits/2).
    Int x = 1;
    x <<= (mpz_sizeinbase(n.get_mpz_t(), 2) + 1) / 2 + 1;
    for (;;) {
        Int y = (x + n / x) >> 1;
        if (y >= x)
            return x;
        x = y;
    }
}

bool is_square(const Int& n)
{
    if (sgn(n) < 0)
        return false;
    Int r = isqrt(n);
    return r * r == n;
}

Int floor_of(const Rat& x)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Int ceil_of(const Rat& x)
{
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Int round_half_even(const Rat& x)
{
    Int f = floor_of(x);
    Rat frac = x - f;
    int c = cmp(frac, Rat(1, 2));
    if (c < 0)
        return f;
    if (c > 0)
        return f + 1;
    return mpz_even_p(f.get_mpz_t()) ? f : Int(f + 1);
}

Int floor_sqrt(const Rat& x)
{
    if (sgn(x) < 0)
        throw DomainError("floor_sqrt of negative rational");
    // floor(sqrt(x)) == floor(sqrt(floor(x))) for x >= 0
    return isqrt(floor_of(x));
}

bool is_squarefree(const Int& n)
{
    if (n < 1)
        return false;
    Int m = n;
    for (Int p = 2; p * p * p <= n; ++p) {
        if (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            m /= p;
            if (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t()))
                return false;
        }
    }
    // m has no prime factor <= cbrt(n): it is 1, p, p*q or p^2.
    return m == 1 || !is_square(m);
}

int cmp(const Rat& x, const Rat& y) { return ::cmp(x, y); }

// ---------------------------------------------------------------------------

FieldDesc::FieldDesc(const Int& d)
{
    if (d < 2)
        throw DomainError("d must be >= 2, got " + d.get_str());
    if (!is_squarefree(d))
        throw DomainError("d = " + d.get_str() + " is not squarefree");
    Int r = d % 4;
    data_ = std::make_shared<const Data>(
            Data{d, r == 1 ? BasisKind::Half : BasisKind::Sqrt});
}

namespace {

void require_same_field(const FieldElem& x, const FieldElem& y)
{
    if (!(x.field() == y.field()))
        throw UsageError("field elements from different fields: d = "
                         + x.field().d().get_str() + " vs d = "
                         + y.field().d().get_str());
}

} // namespace

FieldElem FieldElem::omega(const FieldDesc& f)
{
    if (f.basis() == BasisKind::Half)
        return {f, Rat(1, 2), Rat(1, 2)};
    return sqrt_d(f);
}

FieldElem FieldElem::from_basis(const FieldDesc& f, const Int& x0,
                                const Int& x1)
{
    if (f.basis() == BasisKind::Half)
        return {f, x0 + make_rat(x1, 2), make_rat(x1, 2)};
    return {f, Rat(x0), Rat(x1)};
}

FieldElem& FieldElem::operator+=(const FieldElem& y)
{
    require_same_field(*this, y);
    a_ += y.a_;
    b_ += y.b_;
    return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& y)
{
    require_same_field(*this, y);
    a_ -= y.a_;
    b_ -= y.b_;
    return *this;
}

FieldElem& FieldElem::operator*=(const FieldElem& y)
{
    require_same_field(*this, y);
    Rat a = a_ * y.a_ + b_ * y.b_ * field_.d();
    Rat b = a_ * y.b_ + b_ * y.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
}

FieldElem& FieldElem::operator/=(const FieldElem& y)
{
    require_same_field(*this, y);
    Rat n = norm(y);
    if (sgn(n) == 0)
        throw ArithmeticError("division by zero in Q(sqrt "
                              + field_.d().get_str() + ")");
    *this *= conj(y);
    a_ /= n;
    b_ /= n;
    return *this;
}

FieldElem& FieldElem::operator*=(const Rat& lambda)
{
    a_ *= lambda;
    b_ *= lambda;
    return *this;
}

std::strong_ordering operator<=>(const FieldElem& x, const FieldElem& y)
{
    if (int c = cmp(x.a_, y.a_); c != 0)
        return c < 0 ? std::strong_ordering::less
                     : std::strong_ordering::greater;
    int c = cmp(x.b_, y.b_);
    if (c != 0)
        return c < 0 ? std::strong_ordering::less
                     : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

FieldElem pow(FieldElem x, long k)
{
    if (k < 0) {
        x = FieldElem::one(x.field()) / x;
        k = -k;
    }
    FieldElem r = FieldElem::one(x.field());
    while (k > 0) {
        if (k & 1)
            r *= x;
        k >>= 1;
        if (k > 0)
            x *= x;
    }
    return r;
}

Rat trace(const FieldElem& x) { return 2 * x.a(); }

Rat norm(const FieldElem& x)
{
    return x.a() * x.a() - x.field().d() * x.b() * x.b();
}

FieldElem conj(const FieldElem& x) { return {x.field(), x.a(), -x.b()}; }

bool is_totally_positive(const FieldElem& x)
{
    // a > 0 and a^2 > d b^2, i.e. both a + b sqrt d and a - b sqrt d > 0
    return sgn(x.a()) > 0 && sgn(norm(x)) > 0;
}

bool is_integral(const FieldElem& x)
{
    if (x.field().basis() == BasisKind::Sqrt)
        return x.a().get_den() == 1 && x.b().get_den() == 1;
    Rat a2 = 2 * x.a();
    Rat b2 = 2 * x.b();
    if (a2.get_den() != 1 || b2.get_den() != 1)
        return false;
    return mpz_even_p(Int(a2.get_num() - b2.get_num()).get_mpz_t()) != 0;
}

std::pair<Int, Int> basis_coords(const FieldElem& x)
{
    if (!is_integral(x))
        throw DomainError("basis_coords of non-integral element "
                          + to_string(x));
    if (x.field().basis() == BasisKind::Sqrt)
        return {x.a().get_num(), x.b().get_num()};
    // x = x0 + x1 (1 + sqrt d)/2  =>  x1 = 2b, x0 = a - b
    Rat x0 = x.a() - x.b();
    Rat x1 = 2 * x.b();
    return {x0.get_num(), x1.get_num()};
}

std::string to_string(const FieldElem& x)
{
    return to_string(x.a()) + " + " + to_string(x.b()) + "*sqrt("
         + x.field().d().get_str() + ")";
}

std::ostream& operator<<(std::ostream& os, const FieldElem& x)
{
    return os << to_string(x);
}

std::string to_string(const PrimitivePair& pp)
{
    return "(" + pp.p.get_str() + ", " + pp.q.get_str() + ")";
}

PrimitivePair primitive_normalize(const FieldElem& x)
{
    if (!is_totally_positive(x))
        throw DomainError("primitive_normalize: " + to_string(x)
                          + " is not totally positive");
    Int l;
    mpz_lcm(l.get_mpz_t(), x.a().get_den_mpz_t(), x.b().get_den_mpz_t());
    Int p = x.a().get_num() * (l / x.a().get_den());
    Int q = x.b().get_num() * (l / x.b().get_den());
    Int g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    // p > 0 already, since a > 0 for totally positive x
    return {p / g, q / g};
}

FieldElem from_pair(const FieldDesc& f, const PrimitivePair& pp)
{
    return {f, Rat(pp.p), Rat(pp.q)};
}

Rat slope(const FieldElem& x)
{
    if (!is_totally_positive(x))
        throw DomainError("slope: " + to_string(x)
                          + " is not totally positive");
    return x.b() / x.a();
}

UnaryForm::UnaryForm(FieldElem a) : a_(std::move(a))
{
    if (!is_totally_positive(a_))
        throw DomainError("unary form coefficient " + to_string(a_)
                          + " is not totally positive");
}

} // namespace puf
