#include <doctest.h>

#include <algorithm>

#include "puf/errors.hpp"
#include "puf/traceform.hpp"
#include "puf/units.hpp"
#include "test_support.hpp"

using namespace puf;
using puf::testing::pm;
using puf::testing::sorted;

namespace {

BinaryQF random_form(std::mt19937_64& rng)
{
    for (;;) {
        BinaryQF q{testing::random_positive_rat(rng, 200, 9),
                   testing::random_rat(rng, 400, 9),
                   testing::random_positive_rat(rng, 200, 9)};
        if (q.is_positive_definite())
            return q;
    }
}

} // namespace

TEST_CASE("trace form examples")
{
    FieldDesc f7(7), f2(2), f1007(1007);
    CHECK(trace_form(UnaryForm(FieldElem(f7, Rat(1, 2), Rat(5, 28))))
          == BinaryQF{1, 5, 7});
    CHECK(trace_form(UnaryForm(FieldElem::one(f2))) == BinaryQF{2, 0, 4});
    CHECK(trace_form(UnaryForm(FieldElem(f1007, 476, 15)))
          == BinaryQF{952, 60420, 958664});
    // d = 5: basis {1, (1+sqrt5)/2}, Tr(x0^2 + x0 x1 + ...) for a = 1
    CHECK(trace_form(UnaryForm(FieldElem::one(FieldDesc(5)))) == BinaryQF{2, 2, 3});
    CHECK_THROWS_AS(UnaryForm(FieldElem(f2, 1, 1)), DomainError);
}

TEST_CASE("gauss reduction examples")
{
    auto r = gauss_reduce({1, 5, 7});
    CHECK(r.form == BinaryQF{1, 1, 1});
    CHECK(r.map == UnimodularMap{1, -2, 0, 1}); // a single translation by t = 2

    auto id = gauss_reduce({1, 0, 1});
    CHECK(id.form == BinaryQF{1, 0, 1});
    CHECK(id.map == UnimodularMap{});

    // Half-trace minimum 36 for a3 at d = 1007, so the full trace has 72.
    auto r3 = gauss_reduce({952, 60420, 958664});
    CHECK(r3.form.A == 72);
    CHECK(r3.form.is_reduced());

    CHECK_THROWS_AS(gauss_reduce({1, 2, 1}), DomainError);
    CHECK_THROWS_AS(gauss_reduce({-1, 0, -1}), DomainError);
}

TEST_CASE("gauss reduction properties")
{
    std::mt19937_64 rng(500);
    std::uniform_int_distribution<long> coord(-40, 40);
    for (int iter = 0; iter < 500; ++iter) {
        BinaryQF q = random_form(rng);
        Reduction red = gauss_reduce(q);
        CHECK(red.form.is_reduced());
        CHECK(red.form.discriminant() == q.discriminant());
        Int det = red.map.det();
        CHECK((det == 1 || det == -1));
        for (int k = 0; k < 100; ++k) {
            Int x = coord(rng), y = coord(rng);
            auto [u, v] = red.map.apply(x, y);
            CHECK(q(u, v) == red.form(x, y));
        }
    }
}

TEST_CASE("minimal vectors examples")
{
    FieldDesc f7(7), f1007(1007);
    MinData a1 = min_data(UnaryForm(FieldElem(f7, Rat(1, 2), Rat(5, 28))));
    CHECK(a1.mu == 1);
    CHECK(a1.vectors
          == pm({FieldElem::one(f7), FieldElem(f7, 3, -1), FieldElem(f7, 2, -1)}));

    MinData a3 = min_data(UnaryForm(FieldElem(f1007, 476, 15)));
    CHECK(a3.mu == 72);
    CHECK(a3.vectors == pm({FieldElem(f1007, 32, -1), FieldElem(f1007, 127, -4)}));
    // 127 - 4 sqrt(1007) = (476 - 15 sqrt(1007)) (32 + sqrt(1007))
    CHECK(FieldElem(f1007, 476, -15) * FieldElem(f1007, 32, 1)
          == FieldElem(f1007, 127, -4));

    for (long d : {2L, 3L, 5L, 13L, 1007L}) {
        FieldDesc f(d);
        MinData one = min_data(UnaryForm(FieldElem::one(f)));
        CHECK(one.mu == 2);
        CHECK(one.vectors == pm({FieldElem::one(f)}));
    }
}

TEST_CASE("brute-force oracle examples")
{
    FieldDesc f7(7), f2(2), f1007(1007);
    UnaryForm a1(FieldElem(f7, Rat(1, 2), Rat(5, 28)));
    MinData bf = brute_force_min(a1, 10);
    MinData md = min_data(a1);
    CHECK(bf.mu == md.mu);
    CHECK(bf.vectors == md.vectors);

    MinData one = brute_force_min(UnaryForm(FieldElem::one(f2)), 3);
    CHECK(one.mu == 2);
    CHECK(one.vectors == pm({FieldElem::one(f2)}));

    // Re-derive the a3 minimum for d = 1007 by exhaustive search.
    UnaryForm a3(FieldElem(f1007, 476, 15));
    Int box = certified_box(a3);
    CHECK(box == 476);
    MinData bf3 = brute_force_min(a3, box);
    CHECK(bf3.mu == 72);
    CHECK(bf3.vectors == min_data(a3).vectors);

    CHECK_THROWS_AS(brute_force_min(a1, 0), UsageError);
}

TEST_CASE("min_data equals brute force on random forms")
{
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 500; ++iter) {
        FieldDesc f = testing::random_field(rng, 500);
        UnaryForm a(testing::random_totally_positive(rng, f, 20, 4));
        MinData md = min_data(a);
        MinData bf = brute_force_min(a, certified_box(a));
        CHECK_MESSAGE(md.mu == bf.mu, to_string(a.elem()));
        CHECK_MESSAGE(md.vectors == bf.vectors, to_string(a.elem()));
        CHECK(!md.vectors.empty());
        for (const auto& v : md.vectors) {
            CHECK(is_integral(v));
            CHECK(trace(a.elem() * v * v) == md.mu);
            CHECK(std::binary_search(md.vectors.begin(), md.vectors.end(), -v));
        }
    }
}

TEST_CASE("homothety, unit and conjugation laws")
{
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 100; ++iter) {
        FieldDesc f = testing::random_field(rng, 500);
        FieldElem x = testing::random_totally_positive(rng, f);
        MinData md = min_data(UnaryForm(x));

        Rat lambda = testing::random_positive_rat(rng, 500, 500);
        MinData scaled = min_data(UnaryForm(x * lambda));
        CHECK(scaled.mu == lambda * md.mu);
        CHECK(scaled.vectors == md.vectors);

        FieldElem u = fundamental_unit(f).value;
        MinData twisted = min_data(UnaryForm(x * u * u));
        CHECK(twisted.mu == md.mu);
        std::vector<FieldElem> moved;
        FieldElem uinv = FieldElem::one(f) / u;
        for (const auto& v : md.vectors)
            moved.push_back(uinv * v);
        CHECK(twisted.vectors == sorted(moved));

        MinData c = min_data(UnaryForm(conj(x)));
        CHECK(c.mu == md.mu);
        std::vector<FieldElem> conjugated;
        for (const auto& v : md.vectors)
            conjugated.push_back(conj(v));
        CHECK(c.vectors == sorted(conjugated));
    }
}
