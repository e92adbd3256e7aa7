#ifndef FPC_SYNTAX_HPP
#define FPC_SYNTAX_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fpc {

// ---------------------------------------------------------------------------
// Types:  t ::= a | 1 | t + t | t * t | t -> t | mu a. t
// ---------------------------------------------------------------------------

enum class TypeKind { Var, Unit, Sum, Prod, Arrow, Mu };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
    TypeKind kind;
    std::string name;   // Var name, Mu binder
    TypePtr lhs, rhs;   // Sum/Prod/Arrow children; Mu body lives in rhs
};

TypePtr tVar(std::string name);
TypePtr tUnit();
TypePtr tSum(TypePtr l, TypePtr r);
TypePtr tProd(TypePtr l, TypePtr r);
TypePtr tArrow(TypePtr l, TypePtr r);
TypePtr tMu(std::string binder, TypePtr body);

std::set<std::string> freeTypeVars(const TypePtr& t);

/// tau[sigma/alpha], capture-avoiding over Mu binders.
TypePtr substTypeInType(const TypePtr& tau, const TypePtr& sigma, const std::string& alpha);

/// For mu = Mu(a, body): body[mu/a].
TypePtr unfoldMu(const TypePtr& mu);

bool alphaEq(const TypePtr& a, const TypePtr& b);

// ---------------------------------------------------------------------------
// Terms.  Ascribe `(M : T)` drives bidirectional checking of fold/inl/inr and
// is erased before evaluation.  Hole `[-]` only ever appears inside contexts.
// ---------------------------------------------------------------------------

enum class TermKind {
    Var, UnitVal, Pair, Fst, Snd, Inl, Inr, Case, Lam, App, Fold, Unfold,
    Ascribe, Hole
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermKind kind;
    std::string name;    // Var name; Lam binder; Case left binder
    std::string name2;   // Case right binder
    TypePtr annot;       // Lam domain; Ascribe target
    TermPtr a, b, c;     // children (Case: a=scrutinee b=left c=right)
};

TermPtr mVar(std::string name);
TermPtr mUnit();
TermPtr mPair(TermPtr l, TermPtr r);
TermPtr mFst(TermPtr m);
TermPtr mSnd(TermPtr m);
TermPtr mInl(TermPtr m);
TermPtr mInr(TermPtr m);
TermPtr mCase(TermPtr scrut, std::string x1, TermPtr left, std::string x2, TermPtr right);
TermPtr mLam(std::string binder, TypePtr dom, TermPtr body);
TermPtr mApp(TermPtr f, TermPtr arg);
TermPtr mFold(TermPtr m);
TermPtr mUnfold(TermPtr m);
TermPtr mAscribe(TermPtr m, TypePtr ty);
TermPtr mHole();

std::set<std::string> freeVars(const TermPtr& m);

bool alphaEq(const TermPtr& a, const TermPtr& b);

/// M[N/x], capture-avoiding; binders are renamed through the deterministic
/// fresh-name supply when they would capture free variables of N.
TermPtr substTermInTerm(const TermPtr& m, const TermPtr& n, const std::string& x);

/// Remove every Ascribe node (used after typechecking, before evaluation).
TermPtr stripAscriptions(const TermPtr& m);

// ---------------------------------------------------------------------------
// Value grammar:  v ::= <> | inl M | inr M | <M,N> | \x.M | fold M
// ---------------------------------------------------------------------------

enum class ValueHead { Unit, Inl, Inr, Pair, Lam, Fold };

/// Witness that a closed term matches the value grammar.
std::optional<ValueHead> isValue(const TermPtr& m);

// ---------------------------------------------------------------------------
// Fresh names.  Candidates are base, base', base'', ...; the seed (set once
// from FPC_SEED) offsets where the scan starts so traces stay reproducible
// for a given seed.
// ---------------------------------------------------------------------------

void setFreshSeed(unsigned seed);
unsigned freshSeed();
std::string freshName(const std::string& base, const std::set<std::string>& avoid);

} // namespace fpc

#endif
