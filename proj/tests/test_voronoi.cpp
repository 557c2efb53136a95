#include <doctest.h>

#include "puf/errors.hpp"
#include "puf/family.hpp"
#include "puf/units.hpp"
#include "puf/voronoi.hpp"
#include "test_support.hpp"

using namespace puf;
using puf::testing::pm;

namespace {

FieldElem eps2_of(const FieldDesc& f) { return unit_square(fundamental_unit(f)); }

bool shares_line(const PerfectForm& a, const PerfectForm& b)
{
    for (const auto& x : a.min_vectors)
        for (const auto& y : b.min_vectors)
            if (SupportLine::of(x).same_line(SupportLine::of(y)))
                return true;
    return false;
}

} // namespace

TEST_CASE("support lines")
{
    FieldDesc f2(2);
    SupportLine one = SupportLine::of(FieldElem::one(f2));
    CHECK(one.intercept == 2);
    CHECK(one.slope_coef == 0);
    SupportLine g = SupportLine::of(FieldElem(f2, 1, -1));
    // (1 - sqrt 2)^2 = 3 - 2 sqrt 2
    CHECK(g.intercept == 6);
    CHECK(g.slope_coef == -8);
    CHECK(g.at(Rat(1, 2)) == 2);
    CHECK(g.same_line(SupportLine::of(FieldElem(f2, -1, 1))));
    CHECK_FALSE(g.same_line(one));

    CHECK_THROWS_AS(form_at(f2, Rat(3, 4)), DomainError); // 1 - (3/4)^2 * 2 < 0
}

TEST_CASE("is_perfect examples")
{
    FieldDesc f7(7), f1007(1007);
    CHECK(is_perfect(UnaryForm(FieldElem(f7, Rat(1, 2), Rat(5, 28)))));
    CHECK(is_perfect(UnaryForm(FieldElem(f1007, 476, 15))));
    for (long d : {2L, 3L, 5L, 7L, 13L, 1007L})
        CHECK_FALSE(is_perfect(UnaryForm(FieldElem::one(FieldDesc(d)))));
}

TEST_CASE("neighbor_step examples")
{
    FieldDesc f7(7), f2(2);

    PerfectForm a1 = neighbor_step(f7, Rat(-5, 14), SupportLine::of(FieldElem::one(f7)));
    CHECK(a1.s == Rat(5, 14));
    CHECK(a1.pair == PrimitivePair{14, 5});

    PerfectForm next2 = neighbor_step(f2, Rat(1, 2), SupportLine::of(FieldElem(f2, 1, -1)));
    CHECK(next2.s == Rat(7, 10));
    FieldElem scaled = FieldElem(f2, 1, Rat(1, 2)) * FieldElem(f2, 3, 2);
    CHECK(scaled == FieldElem(f2, 5, Rat(7, 2)));
    CHECK(next2.pair == primitive_normalize(scaled));

    PerfectForm next7 = neighbor_step(f7, Rat(5, 14), SupportLine::of(FieldElem(f7, 3, -1)));
    CHECK(next7.pair == PrimitivePair{98, 37});
    CHECK(FieldElem(f7, 1, Rat(-5, 14)) * FieldElem(f7, 127, 48) == FieldElem(f7, 7, Rat(37, 14)));

    // 1 is minimal at s = 5/14 but is not the leading line there.
    CHECK_THROWS_AS(neighbor_step(f7, Rat(5, 14), SupportLine::of(FieldElem::one(f7))),
                    UsageError);
    // 3 - sqrt 7 is not minimal at s = 0.
    CHECK_THROWS_AS(neighbor_step(f7, Rat(0), SupportLine::of(FieldElem(f7, 3, -1))),
                    UsageError);
}

TEST_CASE("initial_perfect examples")
{
    FieldDesc f2(2), f7(7), f3(3);

    PerfectForm p2 = initial_perfect(f2);
    CHECK(p2.s == Rat(1, 2));
    CHECK(p2.pair == PrimitivePair{2, 1});
    // mu of the primitive representative 2 + sqrt 2 is 2 * mu(1 + sqrt(2)/2)
    CHECK(p2.mu == 4);
    CHECK(p2.min_vectors == pm({FieldElem::one(f2), FieldElem(f2, 1, -1)}));

    PerfectForm p7 = initial_perfect(f7);
    CHECK(p7.s == Rat(5, 14));
    CHECK(p7.pair == PrimitivePair{14, 5});

    // d = 3: the first crossing is not the one from 1 - sqrt 3; check it
    // against the brute-force oracle instead of a hand value.
    PerfectForm p3 = initial_perfect(f3);
    CHECK(p3.s > 0);
    UnaryForm at(FieldElem(f3, 1, p3.s));
    MinData bf = brute_force_min(at, certified_box(at));
    CHECK(bf.mu == 2);
    CHECK(bf.vectors == p3.min_vectors);
    CHECK(is_perfect(at));
    MinData before = brute_force_min(form_at(f3, p3.s / 2), 20);
    CHECK(before.mu == 2);
    CHECK(before.vectors == pm({FieldElem::one(f3)}));
}

TEST_CASE("walk class counts")
{
    FieldDesc f2(2), f7(7), f1007(1007);
    CHECK(walk_classes(f2).n_K == 1);

    WalkResult w7 = walk_classes(f7);
    CHECK(w7.n_K == 2);
    A1A2 ab = construct_a1_a2(f7);
    FieldElem e7 = eps2_of(f7);
    bool a1_found = false, a2_found = false;
    for (const auto& c : w7.classes) {
        a1_found = a1_found || classes_equal(c.form, ab.a1, e7, 3);
        a2_found = a2_found || classes_equal(c.form, ab.a2, e7, 3);
    }
    CHECK(a1_found);
    CHECK(a2_found);

    WalkResult w1007 = walk_classes(f1007);
    CHECK(w1007.n_K == 3);
}

TEST_CASE("classes_equal examples")
{
    FieldDesc f7(7), f1007(1007);
    FieldElem e1007 = eps2_of(f1007);
    UnaryForm a3(FieldElem(f1007, 476, 15));
    CHECK(classes_equal(a3, UnaryForm(conj(a3.elem())), e1007, 2));

    A1A2 ab = construct_a1_a2(f7);
    CHECK_FALSE(classes_equal(ab.a1, ab.a2, eps2_of(f7), 3));

    FieldElem lambda(f7, Rat(17, 3), 0);
    CHECK(classes_equal(ab.a1, UnaryForm(ab.a1.elem() * lambda), eps2_of(f7), 0));
}

TEST_CASE("walk invariants")
{
    std::mt19937_64 rng(7);
    for (long d : {2L, 3L, 5L, 6L, 7L, 10L, 13L, 19L, 21L, 31L, 46L, 61L, 94L,
                   223L, 799L, 1007L}) {
        CAPTURE(d);
        FieldDesc f(d);
        WalkResult w = walk_classes(f);
        const FieldElem e2 = eps2_of(f);
        REQUIRE(w.n_K == static_cast<int>(w.classes.size()));

        // Closure: the stopping form is classes[0] moved by one period.
        CHECK(w.closing.pair == primitive_normalize(w.classes[0].form.elem() * w.period_unit));
        CHECK((w.period_unit == e2 || w.period_unit * e2 == FieldElem::one(f)));

        std::vector<PerfectForm> chain = w.classes;
        chain.push_back(w.closing);
        for (size_t i = 0; i < chain.size(); ++i) {
            CHECK(is_perfect(chain[i].form));
            if (i + 1 < chain.size()) {
                CHECK(chain[i].s < chain[i + 1].s);
                CHECK(shares_line(chain[i], chain[i + 1]));
                // Concavity: on the segment the shared leading line is the
                // minimum among every vector seen at the two ends.
                SupportLine lead = leading_line(chain[i]);
                std::vector<SupportLine> others;
                for (const auto& v : chain[i].min_vectors)
                    others.push_back(SupportLine::of(v));
                for (const auto& v : chain[i + 1].min_vectors)
                    others.push_back(SupportLine::of(v));
                Rat width = chain[i + 1].s - chain[i].s;
                for (int t = 0; t < 20; ++t) {
                    Rat s = chain[i].s + width * testing::random_positive_rat(rng, 99, 100) / 100;
                    if (s >= chain[i + 1].s)
                        continue;
                    for (const auto& o : others)
                        CHECK(lead.at(s) <= o.at(s));
                    MinData md = min_data(form_at(f, s));
                    CHECK(md.mu == lead.at(s));
                }
            }
        }

        for (size_t i = 0; i < w.classes.size(); ++i)
            for (size_t j = i + 1; j < w.classes.size(); ++j)
                CHECK_FALSE(classes_equal(w.classes[i].form, w.classes[j].form, e2, 3));

        // Conjugation maps the class set onto itself.
        for (const auto& c : w.classes) {
            UnaryForm cc(conj(c.form.elem()));
            bool found = false;
            for (const auto& o : w.classes)
                found = found || classes_equal(cc, o.form, e2, 3);
            CHECK(found);
        }
    }
}
