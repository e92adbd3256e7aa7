#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fpc/surface.hpp"
#include "fpc/syntax.hpp"
#include "testutil.hpp"

using namespace fpc;

TEST_CASE("substitution: variable hit") {
    CHECK(alphaEq(substTermInTerm(mVar("x"), mUnit(), "x"), mUnit()));
}

TEST_CASE("substitution: capture avoidance forces renaming") {
    // (\y:1. x)[y/x]  ~  \z:1. y
    TermPtr m = mLam("y", tUnit(), mVar("x"));
    TermPtr got = substTermInTerm(m, mVar("y"), "x");
    CHECK(alphaEq(got, mLam("z", tUnit(), mVar("y"))));
    CHECK(!alphaEq(got, mLam("y", tUnit(), mVar("y"))));  // no capture
}

TEST_CASE("substitution: case with shadowing, checked against the naive oracle") {
    // case x of inl x1 => x1 | inr x2 => x, with fold <> for x
    TermPtr m = mCase(mVar("x"), "x1", mVar("x1"), "x2", mVar("x"));
    TermPtr n = mFold(mUnit());
    TermPtr expected = mCase(mFold(mUnit()), "x1", mVar("x1"), "x2", mFold(mUnit()));
    TermPtr got = substTermInTerm(m, n, "x");
    CHECK(alphaEq(got, expected));
    CHECK(alphaEq(got, testutil::naiveSubst(m, n, "x")));
}

TEST_CASE("substitution agrees with the naive fresh-renaming oracle on random terms") {
    testutil::Gen gen;
    TermPtr payloads[] = {mUnit(), mVar("y"), mPair(mVar("x"), mVar("z")),
                          mLam("y", tUnit(), mVar("x"))};
    for (int i = 0; i < 300; ++i) {
        TermPtr m = gen.term(4);
        TermPtr n = payloads[gen.pick(4)];
        const char* xs[] = {"x", "y", "z"};
        std::string x = xs[gen.pick(3)];
        CHECK(alphaEq(substTermInTerm(m, n, x), testutil::naiveSubst(m, n, x)));
    }
}

TEST_CASE("free variables of substitution result") {
    testutil::Gen gen;
    for (int i = 0; i < 200; ++i) {
        TermPtr m = gen.term(4);
        TermPtr n = gen.term(2);
        std::string x = "x";
        auto got = freeVars(substTermInTerm(m, n, x));
        auto fvM = freeVars(m);
        std::set<std::string> allowed;
        for (auto& v : fvM)
            if (v != x) allowed.insert(v);
        if (fvM.count(x))
            for (auto& v : freeVars(n)) allowed.insert(v);
        for (auto& v : got) CHECK(allowed.count(v));
    }
}

TEST_CASE("alpha-equivalence basics") {
    CHECK(alphaEq(mLam("x", tUnit(), mVar("x")), mLam("y", tUnit(), mVar("y"))));
    CHECK(!alphaEq(mLam("x", tUnit(), mVar("x")), mLam("y", tUnit(), mVar("x"))));
    CHECK(alphaEq(tMu("a", tSum(tUnit(), tVar("a"))), tMu("b", tSum(tUnit(), tVar("b")))));
    CHECK(!alphaEq(tMu("a", tSum(tUnit(), tVar("a"))), tMu("b", tSum(tUnit(), tUnit()))));
    // free variables must match by name
    CHECK(!alphaEq(mVar("x"), mVar("y")));
    CHECK(alphaEq(mVar("x"), mVar("x")));
}

TEST_CASE("alpha-equivalence is an equivalence and substitution respects it") {
    testutil::Gen gen;
    for (int i = 0; i < 100; ++i) {
        TermPtr m = gen.term(4);
        CHECK(alphaEq(m, m));
        // a renamed variant
        long c = 1000;
        TermPtr m2 = testutil::freshenAll(m, c);
        CHECK(alphaEq(m, m2));
        CHECK(alphaEq(m2, m));
        TermPtr n = mPair(mUnit(), mVar("q"));
        CHECK(alphaEq(substTermInTerm(m, n, "x"), substTermInTerm(m2, n, "x")));
    }
}

TEST_CASE("substitution composition on disjoint variables") {
    // (M[N/x])[P/y] ~ (M[P/y])[N[P/y]/x]  when x not in FV(P), x != y
    testutil::Gen gen;
    for (int i = 0; i < 200; ++i) {
        TermPtr m = gen.term(4);
        TermPtr n = gen.term(2);
        TermPtr p = mPair(mUnit(), mVar("w"));  // no x free
        std::string x = "x", y = "y";
        TermPtr lhs = substTermInTerm(substTermInTerm(m, n, x), p, y);
        TermPtr rhs = substTermInTerm(substTermInTerm(m, p, y),
                                      substTermInTerm(n, p, y), x);
        CHECK(alphaEq(lhs, rhs));
    }
}

TEST_CASE("type substitution") {
    TypePtr nat = tMu("a", tSum(tUnit(), tVar("a")));
    SUBCASE("variable hit") {
        CHECK(alphaEq(substTypeInType(tVar("a"), nat, "a"), nat));
    }
    SUBCASE("unfolding Nat") {
        TypePtr body = tSum(tUnit(), tVar("a"));
        CHECK(alphaEq(substTypeInType(body, nat, "a"), tSum(tUnit(), nat)));
        CHECK(alphaEq(unfoldMu(nat), tSum(tUnit(), nat)));
    }
    SUBCASE("capture avoidance over Mu, naive oracle shape") {
        // (mu b. b -> a)[b/a]  ~  mu b'. b' -> b
        TypePtr t = tMu("b", tArrow(tVar("b"), tVar("a")));
        TypePtr got = substTypeInType(t, tVar("b"), "a");
        CHECK(alphaEq(got, tMu("c", tArrow(tVar("c"), tVar("b")))));
        CHECK(!alphaEq(got, tMu("b", tArrow(tVar("b"), tVar("b")))));
    }
}

TEST_CASE("isValue witnesses exactly the value grammar") {
    CHECK(isValue(mUnit()) == ValueHead::Unit);
    CHECK(isValue(mFold(mInl(mUnit()))) == ValueHead::Fold);
    CHECK(isValue(mInl(mVar("x"))) == ValueHead::Inl);
    CHECK(isValue(mPair(mUnit(), mUnit())) == ValueHead::Pair);
    CHECK(isValue(mLam("x", tUnit(), mVar("x"))) == ValueHead::Lam);
    CHECK(!isValue(mUnfold(mFold(mUnit()))).has_value());
    CHECK(!isValue(mApp(mLam("x", tUnit(), mVar("x")), mUnit())).has_value());
    CHECK(!isValue(mVar("x")).has_value());
}

TEST_CASE("stripAscriptions removes every ascription") {
    TermPtr m = mAscribe(mFold(mAscribe(mInl(mUnit()), tSum(tUnit(), tUnit()))),
                         tMu("a", tSum(tUnit(), tUnit())));
    TermPtr s = stripAscriptions(m);
    CHECK(alphaEq(s, mFold(mInl(mUnit()))));
}

TEST_CASE("fresh names avoid the given set and honour the seed") {
    CHECK(freshName("x", {"x"}) == "x'");
    CHECK(freshName("x", {"x", "x'"}) == "x''");
    CHECK(freshName("y", {}) == "y");
    setFreshSeed(2);
    CHECK(freshName("x", {}) == "x''");
    setFreshSeed(0);
}
