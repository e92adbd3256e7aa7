#include "fpc/meta.hpp"

#include <algorithm>

#include "fpc/surface.hpp"
#include "json.hpp"

namespace fpc {

using kernel::Delay;
using kernel::Susp;

// ---------------------------------------------------------------------------
// Battery
// ---------------------------------------------------------------------------

namespace {

void enumInto(const TypePtr& tau, int budget, std::vector<TermPtr>& out, size_t cap) {
    if (budget <= 0 || out.size() >= cap) return;
    switch (tau->kind) {
    case TypeKind::Unit:
        out.push_back(mUnit());
        return;
    case TypeKind::Sum: {
        std::vector<TermPtr> ls, rs;
        enumInto(tau->lhs, budget - 1, ls, cap);
        enumInto(tau->rhs, budget - 1, rs, cap);
        for (auto& l : ls)
            if (out.size() < cap) out.push_back(mInl(l));
        for (auto& r : rs)
            if (out.size() < cap) out.push_back(mInr(r));
        return;
    }
    case TypeKind::Prod: {
        std::vector<TermPtr> ls, rs;
        enumInto(tau->lhs, budget - 2, ls, cap);
        enumInto(tau->rhs, budget - 2, rs, cap);
        for (auto& l : ls)
            for (auto& r : rs)
                if (out.size() < cap) out.push_back(mPair(l, r));
        return;
    }
    case TypeKind::Arrow: {
        if (alphaEq(tau->lhs, tau->rhs) && out.size() < cap)
            out.push_back(mLam("x", tau->lhs, mVar("x")));
        std::vector<TermPtr> bodies;
        enumInto(tau->rhs, budget - 2, bodies, cap);
        for (auto& b : bodies)
            if (out.size() < cap) out.push_back(mLam("x", tau->lhs, b));
        return;
    }
    case TypeKind::Mu: {
        std::vector<TermPtr> bodies;
        enumInto(unfoldMu(tau), budget - 1, bodies, cap);
        for (auto& b : bodies)
            if (out.size() < cap) out.push_back(mFold(b));
        return;
    }
    case TypeKind::Var:
        return;  // closed types only
    }
}

// One counted operational step at the same type: unfold (fold t).
TermPtr delayWrap(const TermPtr& t) { return mUnfold(mFold(t)); }

} // namespace

std::vector<TermPtr> Battery::enumerateTerms(const TypePtr& tau) const {
    std::vector<TermPtr> out;
    enumInto(tau, maxSize_, out, maxCount_);
    auto key = printType(tau);
    auto it = registered_.find(key);
    if (it != registered_.end())
        for (auto& t : it->second)
            out.push_back(t);
    return out;
}

void Battery::registerTerm(const TypePtr& tau, const TermPtr& closedTerm) {
    registered_[printType(tau)].push_back(closedTerm);
    relCache_.erase(printType(tau));
    bisimCache_.erase(printType(tau));
}

const std::vector<Battery::RelEntry>& Battery::logrelEntries(const TypePtr& tau) const {
    auto key = printType(tau);
    auto it = relCache_.find(key);
    if (it != relCache_.end()) return it->second;
    std::vector<RelEntry> es;
    for (auto& t : enumerateTerms(tau)) {
        SemVal den = denote(elaborateAgainst({}, t, tau));
        es.push_back({den, t});
        es.push_back({delaySem(tau, den), delayWrap(t)});
    }
    return relCache_.emplace(key, std::move(es)).first->second;
}

const std::vector<Battery::BisimEntry>& Battery::bisimEntries(const TypePtr& tau) const {
    auto key = printType(tau);
    auto it = bisimCache_.find(key);
    if (it != bisimCache_.end()) return it->second;
    std::vector<BisimEntry> es;
    for (auto& t : enumerateTerms(tau)) {
        SemVal den = denote(elaborateAgainst({}, t, tau));
        SemVal delayed = delaySem(tau, den);
        std::string l = printTerm(t);
        es.push_back({den, den, l});
        es.push_back({delayed, den, "delay(" + l + ") vs " + l});
        es.push_back({den, delayed, l + " vs delay(" + l + ")"});
    }
    return bisimCache_.emplace(key, std::move(es)).first->second;
}

const Battery& defaultBattery() {
    static Battery b;
    return b;
}

// ---------------------------------------------------------------------------
// logrel (the relation between |tau| and closed terms of type tau)
// ---------------------------------------------------------------------------

namespace {

const Battery& batteryOf(const MetaOptions& o) {
    return o.battery ? *o.battery : defaultBattery();
}

ZeroNorm normalizeOrThrow(const TermPtr& m, const MetaOptions& opts) {
    ZeroNorm zn = zeroNormalize(m, opts.zeroStepBudget);
    if (zn.tag == ZeroNorm::Tag::Budget)
        throw FuelExhausted("0-step normalisation exceeded its bound at " + printTerm(m));
    return zn;
}

} // namespace

Verdict logrel(const TypePtr& sigma, const SemVal& d, const TermPtr& m, int n,
               const MetaOptions& opts) {
    if (n <= 0) return Verdict::holdsAt(n);
    switch (sigma->kind) {
    case TypeKind::Unit: {
        const Delay<UnitTok>& del = d.asUnit();
        ZeroNorm zn = normalizeOrThrow(m, opts);
        if (del.isNow()) {
            if (zn.tag == ZeroNorm::Tag::Value && zn.term->kind == TermKind::UnitVal)
                return Verdict::holdsAt(n);
            return Verdict::failsAt(n, "unit: term does not 0-reduce to <>");
        }
        if (zn.tag != ZeroNorm::Tag::OneReady)
            return Verdict::failsAt(n, "unit: delayed value but term admits no fold-unfold step");
        return logrel(sigma, SemVal::makeUnit(del.tail().get()), zn.afterOne, n - 1, opts);
    }
    case TypeKind::Sum: {
        const Delay<SumV>& del = d.asSum();
        ZeroNorm zn = normalizeOrThrow(m, opts);
        if (del.isNow()) {
            const SumV& v = del.value();
            if (zn.tag != ZeroNorm::Tag::Value)
                return Verdict::failsAt(n, "sum: term does not 0-reduce to an injection");
            bool isInl = zn.term->kind == TermKind::Inl;
            bool isInr = zn.term->kind == TermKind::Inr;
            if (v.left && isInl)
                return logrel(sigma->lhs, v.payload, zn.term->a, n, opts);
            if (!v.left && isInr)
                return logrel(sigma->rhs, v.payload, zn.term->a, n, opts);
            return Verdict::failsAt(n, "sum: injection side mismatch");
        }
        if (zn.tag != ZeroNorm::Tag::OneReady)
            return Verdict::failsAt(n, "sum: delayed value but term admits no fold-unfold step");
        return logrel(sigma, SemVal::makeSum(del.tail().get()), zn.afterOne, n - 1, opts);
    }
    case TypeKind::Prod: {
        Verdict l = logrel(sigma->lhs, d.fst(), mFst(m), n, opts);
        if (!l.holds) return Verdict::failsAt(n, "fst." + l.path);
        Verdict r = logrel(sigma->rhs, d.snd(), mSnd(m), n, opts);
        if (!r.holds) return Verdict::failsAt(n, "snd." + r.path);
        return Verdict::holdsAt(n);
    }
    case TypeKind::Arrow: {
        for (const auto& e : batteryOf(opts).logrelEntries(sigma->lhs)) {
            if (!logrel(sigma->lhs, e.sem, e.term, n, opts).holds) continue;  // pre-validation
            Verdict r = logrel(sigma->rhs, d.apply(e.sem), mApp(m, e.term), n, opts);
            if (!r.holds)
                return Verdict::failsAt(n, "arrow[" + printTerm(e.term) + "]." + r.path);
        }
        return Verdict::holdsAt(n);
    }
    case TypeKind::Mu: {
        ZeroNorm zn = normalizeOrThrow(mUnfold(m), opts);
        if (zn.tag != ZeroNorm::Tag::OneReady)
            return Verdict::failsAt(n, "mu: unfolding admits no fold-unfold step");
        return logrel(unfoldMu(sigma), d.asLater().get(), zn.afterOne, n - 1, opts);
    }
    case TypeKind::Var:
        break;
    }
    return Verdict::failsAt(n, "open type");
}

// ---------------------------------------------------------------------------
// bisim (weak bisimulation between denotations)
// ---------------------------------------------------------------------------

Verdict bisim(const TypePtr& sigma, const SemVal& d1, const SemVal& d2, int n,
              const MetaOptions& opts) {
    if (n <= 0) return Verdict::holdsAt(n);
    switch (sigma->kind) {
    case TypeKind::Unit: {
        auto rel = [](const UnitTok&, const UnitTok&, int m) { return Verdict::holdsAt(m); };
        return liftRel(rel, d1.asUnit(), d2.asUnit(), n);
    }
    case TypeKind::Sum: {
        auto rel = [&](const SumV& x, const SumV& y, int m) {
            if (x.left != y.left) return Verdict::failsAt(m, "sum: sides differ");
            Verdict v = bisim(x.left ? sigma->lhs : sigma->rhs, x.payload, y.payload, m, opts);
            if (!v.holds) return Verdict::failsAt(m, std::string(x.left ? "inl." : "inr.") + v.path);
            return Verdict::holdsAt(m);
        };
        return liftRel(rel, d1.asSum(), d2.asSum(), n);
    }
    case TypeKind::Prod: {
        Verdict l = bisim(sigma->lhs, d1.fst(), d2.fst(), n, opts);
        if (!l.holds) return Verdict::failsAt(n, "fst." + l.path);
        Verdict r = bisim(sigma->rhs, d1.snd(), d2.snd(), n, opts);
        if (!r.holds) return Verdict::failsAt(n, "snd." + r.path);
        return Verdict::holdsAt(n);
    }
    case TypeKind::Arrow: {
        for (const auto& e : batteryOf(opts).bisimEntries(sigma->lhs)) {
            if (!bisim(sigma->lhs, e.a, e.b, n, opts).holds) continue;  // pre-validation
            Verdict r = bisim(sigma->rhs, d1.apply(e.a), d2.apply(e.b), n, opts);
            if (!r.holds) return Verdict::failsAt(n, "arrow[" + e.label + "]." + r.path);
        }
        return Verdict::holdsAt(n);
    }
    case TypeKind::Mu:
        return bisim(unfoldMu(sigma), d1.asLater().get(), d2.asLater().get(), n - 1, opts);
    case TypeKind::Var:
        break;
    }
    return Verdict::failsAt(n, "open type");
}

// ---------------------------------------------------------------------------
// Contexts
// ---------------------------------------------------------------------------

int holeCount(const TermPtr& ctx) {
    if (!ctx) return 0;
    if (ctx->kind == TermKind::Hole) return 1;
    return holeCount(ctx->a) + holeCount(ctx->b) + holeCount(ctx->c);
}

TermPtr fill(const TermPtr& ctx, const TermPtr& m) {
    if (!ctx) return ctx;
    switch (ctx->kind) {
    case TermKind::Hole:
        return m;
    case TermKind::Var:
    case TermKind::UnitVal:
        return ctx;
    case TermKind::Lam:
        return mLam(ctx->name, ctx->annot, fill(ctx->a, m));
    case TermKind::Case:
        return mCase(fill(ctx->a, m), ctx->name, fill(ctx->b, m), ctx->name2, fill(ctx->c, m));
    case TermKind::Pair:
        return mPair(fill(ctx->a, m), fill(ctx->b, m));
    case TermKind::App:
        return mApp(fill(ctx->a, m), fill(ctx->b, m));
    case TermKind::Fst:
        return mFst(fill(ctx->a, m));
    case TermKind::Snd:
        return mSnd(fill(ctx->a, m));
    case TermKind::Inl:
        return mInl(fill(ctx->a, m));
    case TermKind::Inr:
        return mInr(fill(ctx->a, m));
    case TermKind::Fold:
        return mFold(fill(ctx->a, m));
    case TermKind::Unfold:
        return mUnfold(fill(ctx->a, m));
    case TermKind::Ascribe:
        return mAscribe(fill(ctx->a, m), ctx->annot);
    }
    return ctx;
}

bool ctxCheck(const TermPtr& ctx, const TermCtx& gamma, const TypePtr& tau,
              const TermCtx& delta, const TypePtr& sigma) {
    if (holeCount(ctx) != 1) return false;
    try {
        TypePtr got = inferContextType(delta, ctx, gamma, tau);
        return alphaEq(got, sigma);
    } catch (const TypeError&) {
        return false;
    }
}

CtxReport ctxEquivSuite(const TermPtr& m, const TermPtr& n,
                        const std::vector<NamedContext>& contexts, long fuel) {
    CtxReport rep;
    for (const auto& [name, ctx] : contexts) {
        CtxRow row;
        row.name = name;
        RunResult rm = evalBig(stripAscriptions(fill(ctx, m)), fuel);
        RunResult rn = evalBig(stripAscriptions(fill(ctx, n)), fuel);
        row.mConverged = rm.converged();
        row.nConverged = rn.converged();
        if (rm.converged()) row.mk = rm.k;
        if (rn.converged()) row.nk = rn.k;
        row.agree = rm.converged() && rn.converged();
        row.unknown = !row.agree;  // a timeout is never reported as disagreement
        rep.allAgree = rep.allAgree && row.agree;
        rep.anyUnknown = rep.anyUnknown || row.unknown;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// runstep / exec
// ---------------------------------------------------------------------------

ExecResult runstep(const Delay<SumV>& d) {
    if (d.isNow()) return {true, d.value().left, std::nullopt};
    return {false, false, d.tail().get()};
}

ExecResult exec(long n, Delay<SumV> d) {
    for (long i = 0; i <= n; ++i) {
        ExecResult r = runstep(d);
        if (r.done) return r;
        d = *r.more;
    }
    return {false, false, d};
}

std::string checkReportToJson(const CheckReport& r) {
    nlohmann::json j;
    j["relation"] = r.relation;
    j["type"] = r.type;
    j["depth"] = r.depth;
    j["verdict"] = r.verdict.holds ? "HoldsAt" : "FailsAt";
    if (!r.verdict.holds) j["counterexample-path"] = r.verdict.path;
    return j.dump();
}

} // namespace fpc
