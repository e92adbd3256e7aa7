#ifndef FPC_OPSEM_HPP
#define FPC_OPSEM_HPP

#include <string>
#include <vector>

#include "fpc/syntax.hpp"

namespace fpc {

enum class StepKind { Zero, One };  // One exactly for unfold (fold M) -> M

struct StepRec {
    std::vector<int> path;  // child indices from the root down to the redex
    StepKind kind;
    TermPtr result;         // whole term after the step
};

struct Trace {
    TermPtr initial;
    std::vector<StepRec> steps;
    long foldUnfoldCount = 0;
};

std::string traceToText(const Trace& t);
std::string traceToJson(const Trace& t);

struct StepOutcome {
    enum class Tag { Stepped, NormalForm, Stuck };
    Tag tag;
    TermPtr term;           // result after the step (Stepped only)
    StepKind kind = StepKind::Zero;
    std::vector<int> path;
    std::string reason;     // Stuck diagnostic
};

/// One deterministic small step of the unique E[redex] decomposition.
StepOutcome step(const TermPtr& m);

struct RunResult {
    enum class Status { Value, Timeout, Stuck };
    Status status = Status::Value;
    TermPtr value;          // Value only
    long k = 0;             // fold-unfold count (Value only)
    long consumed = 0;      // reductions (small) or rule applications (big)
    std::string reason;
    bool converged() const { return status == Status::Value; }
};

/// Iterate `step` to a value; maxSteps bounds total reductions of both kinds.
RunResult evalSmall(const TermPtr& m, long maxSteps, Trace* trace = nullptr);

/// Big-step evaluator (call-by-name, structural recursion on the rules);
/// fuel bounds the number of rule applications.
RunResult evalBig(const TermPtr& m, long fuel);

/// Run Zero steps only, stopping when the next step would be a One step,
/// a value is reached, or the budget runs out.
struct ZeroNorm {
    enum class Tag { Value, OneReady, Stuck, Budget };
    Tag tag;
    TermPtr term;      // the zero-normal form reached
    TermPtr afterOne;  // OneReady: the term after taking the pending One step
};
ZeroNorm zeroNormalize(const TermPtr& m, long budget);

} // namespace fpc

#endif
