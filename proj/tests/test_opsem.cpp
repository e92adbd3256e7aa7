#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fpc/opsem.hpp"
#include "fpc/surface.hpp"
#include "testutil.hpp"

using namespace fpc;

static TermPtr tm(const std::string& s) { return stripAscriptions(parseTerm(s)); }

TEST_CASE("step: the three head redexes") {
    SUBCASE("unfold (fold <>) ->1 <>") {
        StepOutcome s = step(tm("unfold (fold ())"));
        REQUIRE(s.tag == StepOutcome::Tag::Stepped);
        CHECK(s.kind == StepKind::One);
        CHECK(alphaEq(s.term, mUnit()));
    }
    SUBCASE("beta ->0") {
        StepOutcome s = step(tm("(fn x : 1 => x) ()"));
        REQUIRE(s.tag == StepOutcome::Tag::Stepped);
        CHECK(s.kind == StepKind::Zero);
        CHECK(alphaEq(s.term, mUnit()));
    }
    SUBCASE("fst <<>,<>> ->0") {
        StepOutcome s = step(tm("fst <(), ()>"));
        REQUIRE(s.tag == StepOutcome::Tag::Stepped);
        CHECK(s.kind == StepKind::Zero);
        CHECK(alphaEq(s.term, mUnit()));
    }
}

TEST_CASE("step: evaluation happens in the context spine") {
    // case unfold (fold (inl ())) of ... steps inside the scrutinee first
    StepOutcome s = step(tm("case unfold (fold (inl ())) of { inl a => a | inr b => b }"));
    REQUIRE(s.tag == StepOutcome::Tag::Stepped);
    CHECK(s.kind == StepKind::One);
    CHECK(s.path == std::vector<int>{0});
}

TEST_CASE("step: values are normal forms; garbage is Stuck") {
    CHECK(step(tm("()")).tag == StepOutcome::Tag::NormalForm);
    CHECK(step(tm("fold (inl ())")).tag == StepOutcome::Tag::NormalForm);
    CHECK(step(tm("fn x : 1 => x")).tag == StepOutcome::Tag::NormalForm);
    CHECK(step(tm("fst ()")).tag == StepOutcome::Tag::Stuck);
    CHECK(step(tm("() ()")).tag == StepOutcome::Tag::Stuck);
    CHECK(step(mVar("x")).tag == StepOutcome::Tag::Stuck);
}

TEST_CASE("step is deterministic (a function) under repeated decomposition") {
    testutil::Gen gen;
    for (int i = 0; i < 200; ++i) {
        TermPtr m = gen.term(4);
        StepOutcome s1 = step(m);
        StepOutcome s2 = step(m);
        CHECK(s1.tag == s2.tag);
        if (s1.tag == StepOutcome::Tag::Stepped) {
            CHECK(s1.kind == s2.kind);
            CHECK(alphaEq(s1.term, s2.term));
            CHECK(s1.path == s2.path);
        }
    }
}

TEST_CASE("evalSmall: two unfolds give k=2 (naive oracle agrees)") {
    TermPtr m = tm("unfold (fold (unfold (fold ())))");
    RunResult r = evalSmall(m, 100);
    REQUIRE(r.converged());
    CHECK(alphaEq(r.value, mUnit()));
    CHECK(r.k == 2);
    auto oracle = testutil::naiveEval(m, 100);
    REQUIRE(oracle.value.has_value());
    CHECK(oracle.k == 2);
    CHECK(alphaEq(*oracle.value, r.value));
}

TEST_CASE("evalSmall: traces record paths, kinds, and the One count") {
    // fold M is a value for any M, so the outer redex fires first, twice at
    // the root
    Trace t;
    RunResult r = evalSmall(tm("unfold (fold (unfold (fold ())))"), 100, &t);
    REQUIRE(r.converged());
    CHECK(t.steps.size() == 2);
    CHECK(t.foldUnfoldCount == 2);
    CHECK(t.steps[0].kind == StepKind::One);
    CHECK(t.steps[0].path.empty());
    CHECK(t.steps[1].path.empty());
    CHECK(alphaEq(t.steps[0].result, tm("unfold (fold ())")));
    // a redex below the root: the scrutinee position
    Trace t2;
    evalSmall(tm("case unfold (fold (inl ())) of { inl a => a | inr b => b }"), 100, &t2);
    REQUIRE(t2.steps.size() >= 1);
    CHECK(t2.steps[0].path == std::vector<int>{0});
    std::string txt = traceToText(t);
    CHECK(txt.find("fold-unfold steps: 2") != std::string::npos);
    std::string js = traceToJson(t);
    CHECK(js.find("\"foldUnfoldCount\":2") != std::string::npos);
}

TEST_CASE("evalSmall: ifz zero M N steps once more than M") {
    std::string zero = "(fold (inl ()) : mu a. 1 + a)";
    for (int extra = 0; extra <= 3; ++extra) {
        std::string m = "()";
        for (int i = 0; i < extra; ++i) m = "unfold (fold " + m + ")";
        TermPtr prog = tm("case unfold " + zero + " of { inl x1 => " + m + " | inr x2 => () }");
        RunResult r = evalSmall(prog, 1000);
        REQUIRE(r.converged());
        CHECK(r.k == 1 + extra);
    }
}

TEST_CASE("evalSmall: the Turing fixpoint of the identity diverges") {
    std::string B = "mu b. b -> (1 -> 1) -> 1";
    std::string theta = "fn x : " + B + " => fn y : 1 -> 1 => y (unfold x x y)";
    TermPtr m = tm("(" + theta + ") (fold (" + theta + ") : " + B + ") (fn x : 1 => x)");
    RunResult r = evalSmall(m, 10000);
    CHECK(r.status == RunResult::Status::Timeout);
    CHECK(r.consumed == 10000);
}

TEST_CASE("evalBig: values evaluate to themselves in zero steps") {
    RunResult r = evalBig(tm("fold (inl ())"), 100);
    REQUIRE(r.converged());
    CHECK(alphaEq(r.value, tm("fold (inl ())")));
    CHECK(r.k == 0);
}

TEST_CASE("evalBig: one unfold-fold (evalSmall agrees)") {
    TermPtr m = tm("unfold (fold (inl ()))");
    RunResult big = evalBig(m, 100);
    RunResult small = evalSmall(m, 100);
    REQUIRE(big.converged());
    REQUIRE(small.converged());
    CHECK(alphaEq(big.value, mInl(mUnit())));
    CHECK(big.k == 1);
    CHECK(small.k == 1);
    CHECK(alphaEq(big.value, small.value));
}

TEST_CASE("evalBig: call-by-name discards a diverging pair component") {
    std::string B = "mu b. b -> (1 -> 1) -> 1";
    std::string theta = "fn x : " + B + " => fn y : 1 -> 1 => y (unfold x x y)";
    std::string diverge = "(" + theta + ") (fold (" + theta + ") : " + B + ") (fn x : 1 => x)";
    RunResult r = evalBig(tm("snd <" + diverge + ", ()>"), 1000);
    REQUIRE(r.converged());
    CHECK(alphaEq(r.value, mUnit()));
    CHECK(r.k == 0);
}

TEST_CASE("evalBig: timeout reports consumed budget") {
    std::string B = "mu b. b -> (1 -> 1) -> 1";
    std::string theta = "fn x : " + B + " => fn y : 1 -> 1 => y (unfold x x y)";
    RunResult r = evalBig(tm("(" + theta + ") (fold (" + theta + ") : " + B + ") (fn x : 1 => x)"),
                          500);
    CHECK(r.status == RunResult::Status::Timeout);
    CHECK(r.consumed == 500);
}

TEST_CASE("big/small agreement on random value-bound programs") {
    // Generated closed programs: delay towers over units, betas, projections.
    testutil::Gen gen;
    for (int i = 0; i < 60; ++i) {
        std::string m = "()";
        int wraps = gen.pick(4);
        for (int j = 0; j < wraps; ++j) {
            switch (gen.pick(3)) {
            case 0: m = "unfold (fold (" + m + "))"; break;
            case 1: m = "(fn x : 1 => x) (" + m + ")"; break;
            default: m = "fst <" + m + ", ()>"; break;
            }
        }
        TermPtr prog = tm(m);
        RunResult big = evalBig(prog, 10000);
        RunResult small = evalSmall(prog, 10000);
        REQUIRE(big.converged());
        REQUIRE(small.converged());
        CHECK(big.k == small.k);
        CHECK(alphaEq(big.value, small.value));
        auto oracle = testutil::naiveEval(prog, 10000);
        REQUIRE(oracle.value.has_value());
        CHECK(oracle.k == big.k);
    }
}

TEST_CASE("zero-step termination: Zero-only reduction reaches a decision") {
    // beta/pair/case reduction without fold-unfold is normalising
    ZeroNorm zn = zeroNormalize(tm("(fn x : 1 => fst <x, ()>) ()"), 1000);
    CHECK(zn.tag == ZeroNorm::Tag::Value);
    CHECK(alphaEq(zn.term, mUnit()));
}

TEST_CASE("zeroNormalize stops at the first fold-unfold step") {
    ZeroNorm zn = zeroNormalize(tm("(fn x : 1 => x) (unfold (fold ()))"), 1000);
    REQUIRE(zn.tag == ZeroNorm::Tag::OneReady);
    CHECK(alphaEq(zn.term, tm("unfold (fold ())")));
    CHECK(alphaEq(zn.afterOne, mUnit()));
}

TEST_CASE("trace replay: consecutive terms are related by single steps") {
    const char* progs[] = {
        "unfold (fold (unfold (fold ())))",
        "(fn x : 1 => x) (unfold (fold ()))",
        "case unfold (fold (inl ())) of { inl a => a | inr b => b }",
        "fst <snd <(), unfold (fold ())>, ()>",
    };
    for (auto* p : progs) {
        Trace t;
        RunResult r = evalSmall(tm(p), 1000, &t);
        REQUIRE(r.converged());
        TermPtr cur = t.initial;
        long ones = 0;
        for (const auto& rec : t.steps) {
            StepOutcome s = step(cur);
            REQUIRE(s.tag == StepOutcome::Tag::Stepped);
            CHECK(s.kind == rec.kind);
            CHECK(s.path == rec.path);
            CHECK(alphaEq(s.term, rec.result));
            if (rec.kind == StepKind::One) ++ones;
            cur = rec.result;
        }
        CHECK(ones == t.foldUnfoldCount);
        CHECK(ones == r.k);
        CHECK(alphaEq(cur, r.value));
    }
}

TEST_CASE("isValue agrees with step-yields-NormalForm on well-typed closed terms") {
    const char* progs[] = {"()", "fold (inl ())", "fn x : 1 => x", "<(), ()>",
                           "inl ()", "unfold (fold ())", "(fn x : 1 => x) ()",
                           "fst <(), ()>"};
    for (auto* p : progs) {
        TermPtr m = tm(p);
        CHECK(isValue(m).has_value() == (step(m).tag == StepOutcome::Tag::NormalForm));
    }
}
