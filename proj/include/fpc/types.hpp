#ifndef FPC_TYPES_HPP
#define FPC_TYPES_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpc/syntax.hpp"

namespace fpc {

using TypeCtx = std::vector<std::string>;                      // Theta
using TermCtx = std::vector<std::pair<std::string, TypePtr>>;  // Gamma

struct TypeError : std::runtime_error {
    std::string node;      // printed snippet of the offending term
    TypePtr expected;      // may be null
    TypePtr found;         // may be null
    bool synthesisGap;     // true: fold/inl/inr needed an expected type, not a mismatch
    TypeError(std::string node_, std::string msg, TypePtr exp = nullptr, TypePtr fnd = nullptr,
              bool gap = false);
};

bool wfType(const TypeCtx& theta, const TypePtr& tau);

/// Returns the unique type of M in Gamma, up to alpha-equivalence.
/// fold/inl/inr are checked bidirectionally: they need an expected type from
/// an ascription, a Lam annotation, or an application/pair/case position.
TypePtr infer(const TermCtx& gamma, const TermPtr& m);

/// Checks M against tau; throws TypeError on mismatch.
void check(const TermCtx& gamma, const TermPtr& m, const TypePtr& tau);

// ---------------------------------------------------------------------------
// CoreTerm: the elaborated, type-annotated tree.  Every node carries its own
// type; Unfold's type is the unfolded recursive type, Case's the branch
// result type.  Ascriptions are absorbed during elaboration, so erasure
// yields the ascription-stripped source term.
// ---------------------------------------------------------------------------

struct CoreTerm;
using CorePtr = std::shared_ptr<const CoreTerm>;

struct CoreTerm {
    TermKind kind;
    TypePtr type;
    std::string name;    // Var / Lam binder / Case left binder
    std::string name2;   // Case right binder
    TypePtr annot;       // Lam domain
    CorePtr a, b, c;
};

CorePtr elaborate(const TermCtx& gamma, const TermPtr& m);
CorePtr elaborateAgainst(const TermCtx& gamma, const TermPtr& m, const TypePtr& tau);

/// Synthesise the result type of a one-hole context whose hole has typing
/// (holeGamma, holeType); the context itself is typed in delta.  The hole
/// rule demands the ambient context at the hole equal holeGamma exactly.
TypePtr inferContextType(const TermCtx& delta, const TermPtr& ctx, const TermCtx& holeGamma,
                         const TypePtr& holeType);

TermPtr eraseCore(const CorePtr& c);

/// Local consistency of annotations with the typing rules (throws on defect).
void checkAnnotations(const CorePtr& c);

} // namespace fpc

#endif
