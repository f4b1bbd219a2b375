#include "helpers.hpp"

#include "clploop/linarith.hpp"

#include <gtest/gtest.h>

using namespace clploop;
using th::f;
using th::v;

TEST(Decide, ClosedFacts) {
    // ∀X ∃Y Y > X
    EXPECT_TRUE(decide(Formula::forall(std::vector<Var>{v("X")}, Formula::exists(std::vector<Var>{v("Y")}, f("Y > X")))));
    // ∃X ∀Y Y > X is false
    EXPECT_FALSE(decide(Formula::exists(std::vector<Var>{v("X")}, Formula::forall(std::vector<Var>{v("Y")}, f("Y > X")))));
    // density of Q: between 0 and 1 there is a point
    EXPECT_TRUE(decide(Formula::exists(std::vector<Var>{v("X")}, f("0 < X, X < 1"))));
    EXPECT_FALSE(decide(Formula::exists(std::vector<Var>{v("X")}, f("0 < X, X < 0"))));
}

TEST(Decide, FreeVariablesAreUniversal) {
    EXPECT_FALSE(decide(f("X >= 0")));
    EXPECT_TRUE(decide(Formula::implies(f("X >= 1"), f("X > 0"))));
}

TEST(Eliminate, StrictnessCombines) {
    // ∃Y (X < Y ∧ Y <= Z) ≡ X < Z
    Formula out = eliminate_exists({v("Y")}, f("X < Y, Y <= Z"));
    EXPECT_TRUE(equivalent(out, f("X < Z")));
    Formula weak = eliminate_exists({v("Y")}, f("X <= Y, Y <= Z"));
    EXPECT_TRUE(equivalent(weak, f("X <= Z")));
}

TEST(Eliminate, EqualitiesSubstitute) {
    Formula out = eliminate_exists({v("Y")}, f("Y = 2*X + 1, Y <= 5"));
    EXPECT_TRUE(equivalent(out, f("X <= 2")));
}

TEST(Eliminate, Disjunctions) {
    Formula g = Formula::disj({f("Y = X, Y >= 3"), f("Y = -X, Y >= 3")});
    Formula out = eliminate_exists({v("Y")}, g);
    EXPECT_TRUE(equivalent(out, Formula::disj({f("X >= 3"), f("X <= -3")})));
}

TEST(Eliminate, DnfCeiling) {
    std::vector<Formula> parts;
    for (int i = 0; i < 12; ++i)
        parts.push_back(Formula::disj({f("X" + std::to_string(i) + " >= 0"), f("X" + std::to_string(i) + " <= -1")}));
    Limits tight{100};
    EXPECT_THROW(eliminate_exists({v("Y")}, Formula::conj(parts), tight), ResourceLimit);
}

TEST(Project, KeepsRequestedVariables) {
    Constraint c = th::cons("A = C + 1, C >= 0, B = D");
    Constraint pa = project(c, {v("A")});
    EXPECT_TRUE(equivalent(Formula::from(pa), f("A >= 1")));
    EXPECT_TRUE(vars_of(pa).count(v("A")));
    EXPECT_TRUE(project(c, {}).empty());
}

TEST(Project, UnsatisfiableInput) {
    Constraint p = project(th::cons("A >= 1, A <= 0"), {v("A")});
    EXPECT_FALSE(satisfiable(p));
}

TEST(Project, DropsRedundantBounds) {
    Constraint p = project(th::cons("A >= 1, A >= 0, A > -3"), {v("A")});
    EXPECT_EQ(p.size(), 1u);
}

TEST(Sample, PrefersSmallIntegers) {
    auto s = sample_solution(th::cons("A >= -3, A <= 5"));
    ASSERT_TRUE(s);
    EXPECT_EQ(s->at(v("A")), 0);
    auto t = sample_solution(th::cons("A > 1/3, A < 2/3"));
    ASSERT_TRUE(t);
    EXPECT_EQ(t->at(v("A")), Rational(1, 2));
    EXPECT_FALSE(sample_solution(th::cons("A > 1, A < 1")));
}

TEST(Sample, BindsExtraVariables) {
    auto s = sample_solution(th::cons("A >= 2"), {v("B")});
    ASSERT_TRUE(s);
    EXPECT_TRUE(s->count(v("B")));
    EXPECT_EQ(s->at(v("A")), 2);
}

TEST(Satisfiable, Constraints) {
    EXPECT_TRUE(satisfiable(th::cons("A = B, B = C, C >= A")));
    EXPECT_FALSE(satisfiable(th::cons("A = B + 1, B = A")));
    EXPECT_FALSE(satisfiable(th::cons("A < B, B < C, C <= A")));
}
