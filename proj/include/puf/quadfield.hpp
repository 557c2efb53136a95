#pragma once

/**
 * @file quadfield.hpp
 * @brief Exact arithmetic in a real quadratic field K = Q(sqrt d).
 *
 * Elements are always stored on the basis {1, sqrt d} with rational
 * coordinates, also for d = 1 mod 4 where the ring of integers is
 * Z[(1+sqrt d)/2]. Integrality is a predicate, not a representation.
 *
 * Nothing in here touches floating point.
 */

#include <compare>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

namespace puf {

using Int = mpz_class;
using Rat = mpq_class;

// ---- integer / rational helpers -------------------------------------------

Rat make_rat(const Int& num, const Int& den);
Rat parse_rat(std::string_view text); // "p", "-p", "p/q"
std::string to_string(const Rat& x);   // "p" or "p/q"
std::string to_string(const Int& x);

Int isqrt(const Int& n); // floor(sqrt(n)), Newton iteration, n >= 0
bool is_square(const Int& n);
Int floor_of(const Rat& x);
Int ceil_of(const Rat& x);
Int round_half_even(const Rat& x);
Int floor_sqrt(const Rat& x); // floor(sqrt(x)) for x >= 0

bool is_squarefree(const Int& n);

int cmp(const Rat& x, const Rat& y);

// ---- field descriptor -----------------------------------------------------

enum class BasisKind {
    Sqrt, // d = 2,3 mod 4, O_K = Z[sqrt d]
    Half, // d = 1 mod 4,   O_K = Z[(1+sqrt d)/2]
};

class FieldDesc {
public:
    // Throws DomainError unless d >= 2 is squarefree.
    explicit FieldDesc(const Int& d);
    explicit FieldDesc(long d) : FieldDesc(Int(d)) {}

    const Int& d() const { return data_->d; }
    BasisKind basis() const { return data_->kind; }

    friend bool operator==(const FieldDesc& x, const FieldDesc& y)
    {
        return x.data_ == y.data_ || x.data_->d == y.data_->d;
    }

private:
    struct Data {
        Int d;
        BasisKind kind;
    };
    std::shared_ptr<const Data> data_;
};

// ---- field elements -------------------------------------------------------

class FieldElem {
public:
    FieldElem(FieldDesc field, Rat a, Rat b)
        : field_(std::move(field)), a_(std::move(a)), b_(std::move(b))
    {
        a_.canonicalize();
        b_.canonicalize();
    }

    static FieldElem zero(const FieldDesc& f) { return {f, 0, 0}; }
    static FieldElem one(const FieldDesc& f) { return {f, 1, 0}; }
    static FieldElem sqrt_d(const FieldDesc& f) { return {f, 0, 1}; }
    // Second integral basis element: sqrt d, or (1+sqrt d)/2.
    static FieldElem omega(const FieldDesc& f);
    // x0 + x1*omega
    static FieldElem from_basis(const FieldDesc& f, const Int& x0,
                                const Int& x1);

    const FieldDesc& field() const { return field_; }
    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

    FieldElem operator-() const { return {field_, -a_, -b_}; }
    FieldElem& operator+=(const FieldElem& y);
    FieldElem& operator-=(const FieldElem& y);
    FieldElem& operator*=(const FieldElem& y);
    FieldElem& operator/=(const FieldElem& y);
    FieldElem& operator*=(const Rat& lambda);

    friend FieldElem operator+(FieldElem x, const FieldElem& y) { return x += y; }
    friend FieldElem operator-(FieldElem x, const FieldElem& y) { return x -= y; }
    friend FieldElem operator*(FieldElem x, const FieldElem& y) { return x *= y; }
    friend FieldElem operator/(FieldElem x, const FieldElem& y) { return x /= y; }
    friend FieldElem operator*(FieldElem x, const Rat& l) { return x *= l; }
    friend FieldElem operator*(const Rat& l, FieldElem x) { return x *= l; }

    // Coordinate equality; elements of different fields never compare equal.
    friend bool operator==(const FieldElem& x, const FieldElem& y)
    {
        return x.field_ == y.field_ && x.a_ == y.a_ && x.b_ == y.b_;
    }
    // Lexicographic on (a, b); used only to canonicalize sets.
    friend std::strong_ordering operator<=>(const FieldElem& x,
                                            const FieldElem& y);

private:
    FieldDesc field_;
    Rat a_;
    Rat b_;
};

FieldElem pow(FieldElem x, long k); // k may be negative
Rat trace(const FieldElem& x);
Rat norm(const FieldElem& x);
FieldElem conj(const FieldElem& x);
bool is_totally_positive(const FieldElem& x);
bool is_integral(const FieldElem& x);

// Coordinates (x0, x1) of an integral element over {1, omega}.
std::pair<Int, Int> basis_coords(const FieldElem& x);

// Renders "a + b*sqrt(d)".
std::string to_string(const FieldElem& x);
std::ostream& operator<<(std::ostream& os, const FieldElem& x);

// ---- homothety classes ----------------------------------------------------

// Canonical representative p + q*sqrt(d) of the ray Q+ . x,
// gcd(p, q) = 1, p > 0.
struct PrimitivePair {
    Int p;
    Int q;

    friend bool operator==(const PrimitivePair& x, const PrimitivePair& y)
    {
        return x.p == y.p && x.q == y.q;
    }
};

std::string to_string(const PrimitivePair& pp);

PrimitivePair primitive_normalize(const FieldElem& x);
FieldElem from_pair(const FieldDesc& f, const PrimitivePair& pp);

// b/a; lies in (-1/sqrt d, 1/sqrt d) for totally positive x.
Rat slope(const FieldElem& x);

// ---- unary forms ----------------------------------------------------------

// The form a*x^2 for a totally positive a.
class UnaryForm {
public:
    explicit UnaryForm(FieldElem a); // DomainError if not totally positive

    const FieldElem& elem() const { return a_; }
    const FieldDesc& field() const { return a_.field(); }

    friend bool operator==(const UnaryForm& x, const UnaryForm& y)
    {
        return x.a_ == y.a_;
    }

private:
    FieldElem a_;
};

} // namespace puf
