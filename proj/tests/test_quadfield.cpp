#include <doctest.h>

#include "puf/errors.hpp"
#include "puf/quadfield.hpp"
#include "test_support.hpp"

using namespace puf;

TEST_CASE("field construction validates d")
{
    CHECK(FieldDesc(2).basis() == BasisKind::Sqrt);
    CHECK(FieldDesc(7).basis() == BasisKind::Sqrt);
    CHECK(FieldDesc(5).basis() == BasisKind::Half);
    CHECK_THROWS_AS(FieldDesc(12), DomainError);
    CHECK_THROWS_AS(FieldDesc(49), DomainError);
    CHECK_THROWS_AS(FieldDesc(1), DomainError);
    CHECK_THROWS_AS(FieldDesc(0), DomainError);
    // 1009^2 * 2: the square factor is beyond the cube-root trial bound
    CHECK_THROWS_AS(FieldDesc(Int(1009) * 1009 * 2), DomainError);
    CHECK_NOTHROW(FieldDesc(Int(1009) * 1013));
}

TEST_CASE("squarefree agrees with naive factor test")
{
    for (long n = 1; n < 3000; ++n) {
        bool naive = true;
        for (long p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0)
                naive = false;
        CHECK_MESSAGE(is_squarefree(Int(n)) == naive, n);
    }
}

TEST_CASE("integer helpers")
{
    CHECK(isqrt(Int(0)) == 0);
    CHECK(isqrt(Int(15)) == 3);
    CHECK(isqrt(Int(16)) == 4);
    Int big = Int("123456789012345678901234567890");
    Int r = isqrt(big * big + 5);
    CHECK(r == big);
    CHECK(round_half_even(Rat(5, 2)) == 2);
    CHECK(round_half_even(Rat(7, 2)) == 4);
    CHECK(round_half_even(Rat(-5, 2)) == -2);
    CHECK(round_half_even(Rat(-7, 3)) == -2);
    CHECK(floor_sqrt(Rat(17, 4)) == 2);
    CHECK(floor_sqrt(Rat(1, 3)) == 0);
    CHECK(parse_rat("-6/4") == Rat(-3, 2));
    CHECK(to_string(Rat(-3, 2)) == "-3/2");
    CHECK(to_string(Rat(4)) == "4");
    CHECK_THROWS_AS(parse_rat("1/0"), UsageError);
    CHECK_THROWS_AS(parse_rat("x"), UsageError);
}

TEST_CASE("element arithmetic examples")
{
    FieldDesc f2(2), f7(7);
    FieldElem u(f2, 1, 1);
    CHECK(u * conj(u) == FieldElem(f2, -1, 0));

    FieldElem e7(f7, 8, 3);
    CHECK(e7 * e7 == FieldElem(f7, 127, 48));
    CHECK(pow(e7, 2) == FieldElem(f7, 127, 48));
    CHECK(pow(e7, -1) * e7 == FieldElem::one(f7));

    FieldElem x(f7, Rat(3, 4), Rat(-2, 5));
    CHECK(x + FieldElem::zero(f7) == x);
    CHECK((x / x) == FieldElem::one(f7));
    CHECK_THROWS_AS(x / FieldElem::zero(f7), ArithmeticError);
    CHECK_THROWS_AS(x + FieldElem::one(f2), UsageError);
    CHECK(to_string(FieldElem(f7, Rat(1, 2), Rat(-5, 28))) == "1/2 + -5/28*sqrt(7)");
}

TEST_CASE("trace, norm, conjugate")
{
    FieldDesc f7(7), f1007(1007);
    CHECK(trace(FieldElem(f7, 3, 2)) == 6);
    CHECK(norm(FieldElem(f1007, 476, 15)) == 1);
    FieldElem x(f7, Rat(2, 3), 5);
    CHECK(conj(conj(x)) == x);
}

TEST_CASE("total positivity")
{
    FieldDesc f2(2), f1007(1007);
    CHECK_FALSE(is_totally_positive(FieldElem(f2, 1, 1)));
    CHECK(is_totally_positive(FieldElem(f1007, 476, 15)));
    CHECK_FALSE(is_totally_positive(FieldElem::zero(f2)));
    CHECK_FALSE(is_totally_positive(FieldElem(f2, -3, 0)));
    CHECK_THROWS_AS(UnaryForm(FieldElem(f2, 1, 1)), DomainError);
}

TEST_CASE("integrality")
{
    FieldDesc f7(7), f5(5);
    CHECK(is_integral(FieldElem(f7, 3, -1)));
    CHECK(is_integral(FieldElem(f5, Rat(1, 2), Rat(1, 2))));
    CHECK_FALSE(is_integral(FieldElem(f7, Rat(1, 2), Rat(1, 2))));
    CHECK_FALSE(is_integral(FieldElem(f5, Rat(1, 2), 1)));
    CHECK_FALSE(is_integral(FieldElem(f5, Rat(1, 4), Rat(1, 4))));

    // basis coordinates round-trip through from_basis
    auto [x0, x1] = basis_coords(FieldElem(f5, Rat(7, 2), Rat(3, 2)));
    CHECK(x0 == 2);
    CHECK(x1 == 3);
    CHECK(FieldElem::from_basis(f5, x0, x1) == FieldElem(f5, Rat(7, 2), Rat(3, 2)));
}

TEST_CASE("primitive normalization and slope")
{
    FieldDesc f7(7), f2(2);
    FieldElem a1(f7, Rat(1, 2), Rat(5, 28));
    CHECK(primitive_normalize(a1) == PrimitivePair{14, 5});
    CHECK(primitive_normalize(FieldElem(f7, 6, 2)) == PrimitivePair{3, 1});
    // 3 - 6*sqrt(7) < 0: not a form, even though (3, 6) reduces to (1, 2)
    CHECK_THROWS_AS(primitive_normalize(FieldElem(f7, 3, 6)), DomainError);
    CHECK(slope(FieldElem(f2, 1, Rat(1, 2))) == Rat(1, 2));
    CHECK(slope(a1) == Rat(5, 14));
    CHECK(slope(conj(a1)) == -slope(a1));
    CHECK_THROWS_AS(primitive_normalize(FieldElem(f2, 1, 1)), DomainError);
    CHECK_THROWS_AS(slope(FieldElem(f2, -1, 0)), DomainError);
}

TEST_CASE("field arithmetic properties")
{
    std::mt19937_64 rng(20261015);
    for (int iter = 0; iter < 300; ++iter) {
        FieldDesc f = testing::random_field(rng, 500);
        FieldElem x = testing::random_elem(rng, f);
        FieldElem y = testing::random_elem(rng, f);
        CHECK(trace(x * y) + trace(x * conj(y)) == trace(x) * trace(y));
        CHECK(norm(x * y) == norm(x) * norm(y));
        CHECK(x * conj(x) == FieldElem(f, norm(x), 0));
        CHECK(is_totally_positive(x) == is_totally_positive(conj(x)));
        if (!y.is_zero())
            CHECK((x / y) * y == x);
    }
}

TEST_CASE("homothety canonicalization properties")
{
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        FieldDesc f = testing::random_field(rng, 300);
        FieldElem x = testing::random_totally_positive(rng, f);
        Rat lambda = testing::random_positive_rat(rng, 1000, 1000);
        CHECK(primitive_normalize(x * lambda) == primitive_normalize(x));

        FieldElem y = testing::random_totally_positive(rng, f, 6, 3);
        FieldElem z = testing::random_totally_positive(rng, f, 6, 3);
        CHECK((slope(y) == slope(z))
              == (primitive_normalize(y) == primitive_normalize(z)));
    }
}
