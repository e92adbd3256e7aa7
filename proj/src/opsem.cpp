#include "fpc/opsem.hpp"

#include <sstream>

#include "fpc/surface.hpp"
#include "json.hpp"

namespace fpc {

namespace {

// Walk the evaluation-context spine E ::= [.] | E M | case E | fst E | snd E
// | unfold E and contract the head redex.
StepOutcome stepAt(const TermPtr& m, std::vector<int>& path) {
    switch (m->kind) {
    case TermKind::UnitVal:
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::Pair:
    case TermKind::Lam:
    case TermKind::Fold:
        return {StepOutcome::Tag::NormalForm, nullptr, StepKind::Zero, {}, ""};

    case TermKind::App: {
        if (m->a->kind == TermKind::Lam) {
            TermPtr res = substTermInTerm(m->a->a, m->b, m->a->name);
            return {StepOutcome::Tag::Stepped, res, StepKind::Zero, path, ""};
        }
        path.push_back(0);
        StepOutcome inner = stepAt(m->a, path);
        if (inner.tag == StepOutcome::Tag::Stepped)
            return {inner.tag, mApp(inner.term, m->b), inner.kind, inner.path, ""};
        if (inner.tag == StepOutcome::Tag::NormalForm)
            return {StepOutcome::Tag::Stuck, nullptr, StepKind::Zero, {},
                    "application of a non-function value"};
        return inner;
    }
    case TermKind::Case: {
        if (m->a->kind == TermKind::Inl) {
            TermPtr res = substTermInTerm(m->b, m->a->a, m->name);
            return {StepOutcome::Tag::Stepped, res, StepKind::Zero, path, ""};
        }
        if (m->a->kind == TermKind::Inr) {
            TermPtr res = substTermInTerm(m->c, m->a->a, m->name2);
            return {StepOutcome::Tag::Stepped, res, StepKind::Zero, path, ""};
        }
        path.push_back(0);
        StepOutcome inner = stepAt(m->a, path);
        if (inner.tag == StepOutcome::Tag::Stepped)
            return {inner.tag, mCase(inner.term, m->name, m->b, m->name2, m->c), inner.kind,
                    inner.path, ""};
        if (inner.tag == StepOutcome::Tag::NormalForm)
            return {StepOutcome::Tag::Stuck, nullptr, StepKind::Zero, {},
                    "case scrutinee is not an injection"};
        return inner;
    }
    case TermKind::Fst: {
        if (m->a->kind == TermKind::Pair)
            return {StepOutcome::Tag::Stepped, m->a->a, StepKind::Zero, path, ""};
        path.push_back(0);
        StepOutcome inner = stepAt(m->a, path);
        if (inner.tag == StepOutcome::Tag::Stepped)
            return {inner.tag, mFst(inner.term), inner.kind, inner.path, ""};
        if (inner.tag == StepOutcome::Tag::NormalForm)
            return {StepOutcome::Tag::Stuck, nullptr, StepKind::Zero, {}, "fst of a non-pair"};
        return inner;
    }
    case TermKind::Snd: {
        if (m->a->kind == TermKind::Pair)
            return {StepOutcome::Tag::Stepped, m->a->b, StepKind::Zero, path, ""};
        path.push_back(0);
        StepOutcome inner = stepAt(m->a, path);
        if (inner.tag == StepOutcome::Tag::Stepped)
            return {inner.tag, mSnd(inner.term), inner.kind, inner.path, ""};
        if (inner.tag == StepOutcome::Tag::NormalForm)
            return {StepOutcome::Tag::Stuck, nullptr, StepKind::Zero, {}, "snd of a non-pair"};
        return inner;
    }
    case TermKind::Unfold: {
        if (m->a->kind == TermKind::Fold)
            return {StepOutcome::Tag::Stepped, m->a->a, StepKind::One, path, ""};
        path.push_back(0);
        StepOutcome inner = stepAt(m->a, path);
        if (inner.tag == StepOutcome::Tag::Stepped)
            return {inner.tag, mUnfold(inner.term), inner.kind, inner.path, ""};
        if (inner.tag == StepOutcome::Tag::NormalForm)
            return {StepOutcome::Tag::Stuck, nullptr, StepKind::Zero, {},
                    "unfold of a non-fold value"};
        return inner;
    }
    case TermKind::Var:
        return {StepOutcome::Tag::Stuck, nullptr, StepKind::Zero, {}, "free variable"};
    case TermKind::Ascribe:
        return {StepOutcome::Tag::Stuck, nullptr, StepKind::Zero, {},
                "ascription in a runtime term (strip before evaluating)"};
    case TermKind::Hole:
        return {StepOutcome::Tag::Stuck, nullptr, StepKind::Zero, {}, "hole in a runtime term"};
    }
    return {StepOutcome::Tag::Stuck, nullptr, StepKind::Zero, {}, "unhandled term form"};
}

} // namespace

StepOutcome step(const TermPtr& m) {
    std::vector<int> path;
    return stepAt(m, path);
}

RunResult evalSmall(const TermPtr& m, long maxSteps, Trace* trace) {
    if (trace) {
        trace->initial = m;
        trace->steps.clear();
        trace->foldUnfoldCount = 0;
    }
    TermPtr cur = m;
    long k = 0;
    for (long used = 0;; ++used) {
        StepOutcome s = step(cur);
        if (s.tag == StepOutcome::Tag::NormalForm)
            return {RunResult::Status::Value, cur, k, used, ""};
        if (s.tag == StepOutcome::Tag::Stuck)
            return {RunResult::Status::Stuck, nullptr, 0, used, s.reason};
        if (used >= maxSteps)
            return {RunResult::Status::Timeout, nullptr, 0, used, "step budget exhausted"};
        if (s.kind == StepKind::One) ++k;
        if (trace) {
            trace->steps.push_back({s.path, s.kind, s.term});
            if (s.kind == StepKind::One) ++trace->foldUnfoldCount;
        }
        cur = s.term;
    }
}

namespace {

struct BigBudget {
    long left;
};

// Returns the value and its k, or signals exhaustion/stuckness via status.
RunResult evalBigRec(const TermPtr& m, BigBudget& budget) {
    if (budget.left <= 0)
        return {RunResult::Status::Timeout, nullptr, 0, 0, "rule budget exhausted"};
    --budget.left;

    if (isValue(m)) return {RunResult::Status::Value, m, 0, 0, ""};

    auto sub = [&](const TermPtr& n) { return evalBigRec(n, budget); };

    switch (m->kind) {
    case TermKind::Case: {
        RunResult l = sub(m->a);
        if (!l.converged()) return l;
        if (l.value->kind == TermKind::Inl) {
            RunResult r = sub(substTermInTerm(m->b, l.value->a, m->name));
            if (!r.converged()) return r;
            r.k += l.k;
            return r;
        }
        if (l.value->kind == TermKind::Inr) {
            RunResult r = sub(substTermInTerm(m->c, l.value->a, m->name2));
            if (!r.converged()) return r;
            r.k += l.k;
            return r;
        }
        return {RunResult::Status::Stuck, nullptr, 0, 0, "case scrutinee is not an injection"};
    }
    case TermKind::Fst: {
        RunResult l = sub(m->a);
        if (!l.converged()) return l;
        if (l.value->kind != TermKind::Pair)
            return {RunResult::Status::Stuck, nullptr, 0, 0, "fst of a non-pair"};
        RunResult r = sub(l.value->a);
        if (!r.converged()) return r;
        r.k += l.k;
        return r;
    }
    case TermKind::Snd: {
        RunResult l = sub(m->a);
        if (!l.converged()) return l;
        if (l.value->kind != TermKind::Pair)
            return {RunResult::Status::Stuck, nullptr, 0, 0, "snd of a non-pair"};
        RunResult r = sub(l.value->b);
        if (!r.converged()) return r;
        r.k += l.k;
        return r;
    }
    case TermKind::App: {
        RunResult f = sub(m->a);
        if (!f.converged()) return f;
        if (f.value->kind != TermKind::Lam)
            return {RunResult::Status::Stuck, nullptr, 0, 0,
                    "application of a non-function value"};
        RunResult r = sub(substTermInTerm(f.value->a, m->b, f.value->name));
        if (!r.converged()) return r;
        r.k += f.k;
        return r;
    }
    case TermKind::Unfold: {
        RunResult f = sub(m->a);
        if (!f.converged()) return f;
        if (f.value->kind != TermKind::Fold)
            return {RunResult::Status::Stuck, nullptr, 0, 0, "unfold of a non-fold value"};
        RunResult r = sub(f.value->a);
        if (!r.converged()) return r;
        r.k += f.k + 1;
        return r;
    }
    case TermKind::Var:
        return {RunResult::Status::Stuck, nullptr, 0, 0, "free variable"};
    case TermKind::Ascribe:
        return {RunResult::Status::Stuck, nullptr, 0, 0,
                "ascription in a runtime term (strip before evaluating)"};
    default:
        return {RunResult::Status::Stuck, nullptr, 0, 0, "unhandled term form"};
    }
}

} // namespace

RunResult evalBig(const TermPtr& m, long fuel) {
    BigBudget budget{fuel};
    RunResult r = evalBigRec(m, budget);
    r.consumed = fuel - budget.left;
    return r;
}

ZeroNorm zeroNormalize(const TermPtr& m, long budget) {
    TermPtr cur = m;
    for (long used = 0; used <= budget; ++used) {
        StepOutcome s = step(cur);
        if (s.tag == StepOutcome::Tag::NormalForm) return {ZeroNorm::Tag::Value, cur, nullptr};
        if (s.tag == StepOutcome::Tag::Stuck) return {ZeroNorm::Tag::Stuck, cur, nullptr};
        if (s.kind == StepKind::One) return {ZeroNorm::Tag::OneReady, cur, s.term};
        if (used == budget) break;
        cur = s.term;
    }
    return {ZeroNorm::Tag::Budget, cur, nullptr};
}

std::string traceToText(const Trace& t) {
    std::ostringstream o;
    o << "initial: " << printTerm(t.initial) << "\n";
    long i = 0;
    for (const auto& s : t.steps) {
        o << "  [" << i++ << "] ->" << (s.kind == StepKind::One ? "1" : "0") << " at ";
        if (s.path.empty()) {
            o << "root";
        } else {
            for (size_t j = 0; j < s.path.size(); ++j) o << (j ? "." : "") << s.path[j];
        }
        o << ": " << printTerm(s.result) << "\n";
    }
    o << "fold-unfold steps: " << t.foldUnfoldCount << "\n";
    return o.str();
}

std::string traceToJson(const Trace& t) {
    nlohmann::json j;
    j["initial"] = printTerm(t.initial);
    j["foldUnfoldCount"] = t.foldUnfoldCount;
    j["steps"] = nlohmann::json::array();
    for (const auto& s : t.steps) {
        nlohmann::json e;
        e["path"] = s.path;
        e["kind"] = s.kind == StepKind::One ? 1 : 0;
        e["result"] = printTerm(s.result);
        j["steps"].push_back(std::move(e));
    }
    return j.dump();
}

} // namespace fpc
