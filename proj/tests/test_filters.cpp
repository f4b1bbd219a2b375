#include "helpers.hpp"

#include "clploop/filters.hpp"

#include <gtest/gtest.h>

using namespace clploop;
using th::v;

namespace {
const Program kDouble = th::prog("p(N, T) <- N >= 1, N = N1 + 1, T1 = 2*T, T >= 1 <> p(N1, T1).");
const Predicate kP{"p", 2};

Filter second_position(const std::string& cond) {
    Filter f;
    f.set(kP, {2}, {LinTerm(v("B"))}, th::cons(cond));
    return f;
}
} // namespace

TEST(Positions, ComplementAndNames) {
    EXPECT_EQ(complement({2}, 3), (Positions{1, 3}));
    EXPECT_EQ(to_string(Positions{}), "{}");
    EXPECT_EQ(projected(kP, {2}).name, "p|{2}");
    EXPECT_EQ(projected(kP, {2}).arity, 1u);
}

TEST(Positions, OutOfRangeRejected) {
    PositionSet tau;
    EXPECT_THROW(tau.set(kP, {3}), std::out_of_range);
    EXPECT_EQ(tau.of(kP), Positions{});
    EXPECT_EQ(tau.complement_of(kP), (Positions{1, 2}));
}

TEST(Filter, DefaultConditionIsTrue) {
    Filter f;
    Query c = f.condition(kP);
    EXPECT_EQ(c.atom.args.size(), 0u);
    EXPECT_TRUE(c.constraint.empty());
    EXPECT_THROW(second_position("B >= 1, B <= 0"), std::invalid_argument);
}

TEST(MoreGeneral, BodyIsNotMoreGeneralThanHead) {
    const Clause& r = kDouble.clauses[0];
    // p(1,1) is an instance of the head query but not of the body query
    EXPECT_FALSE(more_general(r.body_query(), r.head_query()));
    Query one = th::qry("p(1, 1) : true.", kDouble);
    EXPECT_TRUE(more_general(r.head_query(), one));
    EXPECT_FALSE(more_general(r.body_query(), one));
}

TEST(MoreGeneral, Basics) {
    Query any = th::qry("p(X, Y) : true.", kDouble);
    Query diag = th::qry("p(X, X) : X >= 0.", kDouble);
    Query pt = th::qry("p(2, 2) : true.", kDouble);
    EXPECT_TRUE(more_general(any, diag));
    EXPECT_TRUE(more_general(diag, pt));
    EXPECT_FALSE(more_general(diag, any));
    EXPECT_TRUE(more_general(pt, th::qry("p(X, Y) : X = 2, Y = X.", kDouble)));
    // an empty query is below everything
    EXPECT_TRUE(more_general(pt, th::qry("p(X, Y) : X > X.", kDouble)));
}

TEST(MoreGeneral, DifferentPredicates) {
    Program p = th::prog("p(A) <- true <> p(A).\nq(A) <- true <> q(A).");
    EXPECT_FALSE(more_general(th::qry("p(X) : true.", p), th::qry("q(X) : true.", p)));
}

TEST(MoreGeneral, SharedNamesDoNotMatter) {
    Query a = th::qry("p(X, Y) : X >= Y.", kDouble);
    Query b = th::qry("p(Y, X) : Y >= X + 1.", kDouble);
    EXPECT_TRUE(more_general(a, b));
    EXPECT_FALSE(more_general(b, a));
}

TEST(DeltaMoreGeneral, DoublingClause) {
    const Clause& r = kDouble.clauses[0];
    Filter f = second_position("B >= 1");
    EXPECT_TRUE(satisfies(r.body_query(), f));
    EXPECT_TRUE(satisfies(r.head_query(), f));
    EXPECT_TRUE(delta_more_general(r.body_query(), r.head_query(), f));
    // with a stronger condition the body no longer satisfies the filter
    Filter g = second_position("B >= 3");
    EXPECT_FALSE(satisfies(r.body_query(), g));
}

TEST(Satisfies, ProjectsOntoPositions) {
    Filter f = second_position("B >= 0");
    EXPECT_TRUE(satisfies(th::qry("p(X, 0) : X < -5.", kDouble), f));
    EXPECT_FALSE(satisfies(th::qry("p(X, Y) : Y >= X.", kDouble), f));
}
