#include "helpers.hpp"

#include "clploop/syntax.hpp"

#include <gtest/gtest.h>

using namespace clploop;
using th::v;

TEST(LinTerm, ArithmeticDropsZeroCoefficients) {
    LinTerm t = LinTerm(v("A")) * Rational(2) + LinTerm(Rational(3)) - LinTerm::var(v("A"), 2);
    EXPECT_TRUE(t.is_constant());
    EXPECT_EQ(t.constant(), 3);
    EXPECT_TRUE(t.coeffs().empty());
}

TEST(LinTerm, SubstituteAndEval) {
    LinTerm t = LinTerm::var(v("A"), 3) + LinTerm(v("B")) + LinTerm(Rational(1));
    LinTerm s = t.substitute(v("A"), LinTerm(v("B")) - LinTerm(Rational(1)));
    EXPECT_EQ(s, LinTerm::var(v("B"), 4) + LinTerm(Rational(-2)));
    EXPECT_EQ(s.eval({{v("B"), Rational(1, 2)}}), 0);
}

TEST(AtomicProp, EquivalentAtomsAreEqual) {
    AtomicProp a(LinTerm::var(v("A"), 2), RelOp::Ge, LinTerm(Rational(4)));
    AtomicProp b(LinTerm(Rational(2)), RelOp::Le, LinTerm(v("A")));
    EXPECT_EQ(a, b);
    EXPECT_EQ(to_string(a), "A >= 2");
}

TEST(AtomicProp, EqualitiesNormalizeSign) {
    AtomicProp a(LinTerm(v("A")), RelOp::Eq, LinTerm(v("B")) + LinTerm(Rational(1)));
    AtomicProp b(LinTerm(v("B")) + LinTerm(Rational(1)), RelOp::Eq, LinTerm(v("A")));
    EXPECT_EQ(a, b);
    EXPECT_EQ(to_string(a), "A = B + 1");
}

TEST(AtomicProp, StrictnessKept) {
    AtomicProp a(LinTerm(v("X")), RelOp::Gt, LinTerm(Rational(0)));
    EXPECT_EQ(a.rel(), Rel::Lt);
    EXPECT_FALSE(a.eval({{v("X"), Rational(0)}}));
    EXPECT_TRUE(a.eval({{v("X"), Rational(1, 3)}}));
}

TEST(Rename, InjectiveAcrossGenerations) {
    std::set<Var> images;
    for (const Var& x : {v("A"), v("A", 1), v("A", 2), v("A#1", 1), v("B")}) images.insert(rename_var(x, 5));
    EXPECT_EQ(images.size(), 5u);
    for (const auto& x : images) EXPECT_EQ(x.index, 5u);
}

TEST(Rename, GenerationsStartPastUsedIndices) {
    Generations g = Generations::after({v("A", 3), v("B")});
    EXPECT_EQ(g.next(), 4u);
    EXPECT_EQ(g.next(), 5u);
    EXPECT_EQ(g.peek(), 6u);
}

TEST(Atom, ArityChecked) {
    EXPECT_THROW(Atom(Predicate{"p", 2}, {LinTerm(v("A"))}), std::invalid_argument);
}

TEST(Clause, LocalVarsAndRecursion) {
    Clause r = th::clause("p(A) <- A = B + Z, Z >= 0 <> p(B).");
    EXPECT_TRUE(r.recursive());
    EXPECT_EQ(r.local_vars(), VarSet{v("Z")});
    Clause s = th::clause("p(A) <- true <> q(A, A).");
    EXPECT_FALSE(s.recursive());
}

TEST(Printing, QueryAndClause) {
    Query q{Atom(Predicate{"p", 2}, {LinTerm(v("A")), LinTerm(Rational(0))}),
            {AtomicProp(LinTerm(v("A")), RelOp::Ge, LinTerm(Rational(1)))}};
    EXPECT_EQ(to_string(q), "<p(A, 0) | A >= 1>");
    Clause r = th::clause("p(A) <- A >= 0 <> p(B).");
    EXPECT_EQ(to_string(r), "p(A) <- A >= 0 <> p(B).");
}
