#ifndef FPC_META_HPP
#define FPC_META_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpc/denot.hpp"
#include "fpc/opsem.hpp"

namespace fpc {

// ---------------------------------------------------------------------------
// Depth-indexed verdicts.  Depth 0 is the truth base: every checker holds
// there.  Each later in a relation definition and each unrolled Step in an
// eta-vs-theta search consumes one unit of the same budget.
// ---------------------------------------------------------------------------

struct Verdict {
    bool holds = true;
    int depth = 0;
    std::string path;  // counterexample path when !holds

    static Verdict holdsAt(int n) { return {true, n, ""}; }
    static Verdict failsAt(int n, std::string p) { return {false, n, std::move(p)}; }
};

struct FuelExhausted : std::runtime_error {
    explicit FuelExhausted(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// liftRel: the lifting of a depth-indexed relation to delayed computations.
// rel(a, b, m) is consulted with whatever budget is left after the search.
// ---------------------------------------------------------------------------

template <class A, class B, class Rel>
Verdict liftRel(const Rel& rel, kernel::Delay<A> da, kernel::Delay<B> db, int n) {
    if (n <= 0) return Verdict::holdsAt(n);
    if (da.isNow() && db.isNow()) return rel(da.value(), db.value(), n);
    if (da.isNow()) {
        kernel::Delay<B> cur = db;
        for (int j = 1; j <= n; ++j) {
            cur = cur.tail().get();
            if (cur.isNow()) return rel(da.value(), cur.value(), n - j);
        }
        return Verdict::failsAt(n, "lift: right side produced no value within depth");
    }
    if (db.isNow()) {
        kernel::Delay<A> cur = da;
        for (int j = 1; j <= n; ++j) {
            cur = cur.tail().get();
            if (cur.isNow()) return rel(cur.value(), db.value(), n - j);
        }
        return Verdict::failsAt(n, "lift: left side produced no value within depth");
    }
    return liftRel(rel, da.tail().get(), db.tail().get(), n - 1);
}

// ---------------------------------------------------------------------------
// Argument batteries for the arrow cases.  Entries come from a typed
// enumeration of small closed terms (node count <= maxSize, capped per
// type), their denotations, and one-delay perturbed variants; corpus terms
// can be registered on top.  Arrow verdicts are sound for FailsAt and
// heuristic for HoldsAt.
// ---------------------------------------------------------------------------

class Battery {
public:
    explicit Battery(int maxSize = 8, size_t maxCount = 4)
        : maxSize_(maxSize), maxCount_(maxCount) {}

    struct RelEntry {
        SemVal sem;
        TermPtr term;
    };
    struct BisimEntry {
        SemVal a;
        SemVal b;
        std::string label;
    };

    const std::vector<RelEntry>& logrelEntries(const TypePtr& tau) const;
    const std::vector<BisimEntry>& bisimEntries(const TypePtr& tau) const;

    void registerTerm(const TypePtr& tau, const TermPtr& closedTerm);

    std::vector<TermPtr> enumerateTerms(const TypePtr& tau) const;

private:
    int maxSize_;
    size_t maxCount_;
    std::map<std::string, std::vector<TermPtr>> registered_;
    mutable std::map<std::string, std::vector<RelEntry>> relCache_;
    mutable std::map<std::string, std::vector<BisimEntry>> bisimCache_;
};

const Battery& defaultBattery();

// ---------------------------------------------------------------------------
// The logical relation between semantics and syntax, and weak bisimulation
// between denotations.
// ---------------------------------------------------------------------------

struct MetaOptions {
    const Battery* battery = nullptr;  // null: defaultBattery()
    long zeroStepBudget = 1000000;     // bound on 0-step normalisation
};

Verdict logrel(const TypePtr& sigma, const SemVal& d, const TermPtr& m, int n,
               const MetaOptions& opts = {});

Verdict bisim(const TypePtr& sigma, const SemVal& d1, const SemVal& d2, int n,
              const MetaOptions& opts = {});

// ---------------------------------------------------------------------------
// Contexts: terms with exactly one hole.  fill is textual (may capture).
// ---------------------------------------------------------------------------

int holeCount(const TermPtr& ctx);
TermPtr fill(const TermPtr& ctx, const TermPtr& m);

/// C : (gamma, tau) -> (delta, sigma)?
bool ctxCheck(const TermPtr& ctx, const TermCtx& gamma, const TypePtr& tau,
              const TermCtx& delta, const TypePtr& sigma);

struct NamedContext {
    std::string name;
    TermPtr ctx;
};

struct CtxRow {
    std::string name;
    bool mConverged = false, nConverged = false;
    long mk = -1, nk = -1;
    bool agree = false;    // both converged
    bool unknown = false;  // at least one side timed out
};

struct CtxReport {
    std::vector<CtxRow> rows;
    bool allAgree = true;   // every row agrees
    bool anyUnknown = false;
};

CtxReport ctxEquivSuite(const TermPtr& m, const TermPtr& n,
                        const std::vector<NamedContext>& contexts, long fuel);

// ---------------------------------------------------------------------------
// Running denotations of Bool programs one observable step at a time.
// ---------------------------------------------------------------------------

struct ExecResult {
    bool done = false;
    bool left = false;                          // valid when done
    std::optional<kernel::Delay<SumV>> more;    // engaged when !done
};

ExecResult runstep(const kernel::Delay<SumV>& d);

/// Iterates runstep at most n+1 times.
ExecResult exec(long n, kernel::Delay<SumV> d);

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

struct CheckReport {
    std::string relation;  // "logrel" | "bisim" | ...
    std::string type;
    int depth = 0;
    Verdict verdict;
};

std::string checkReportToJson(const CheckReport& r);

} // namespace fpc

#endif
