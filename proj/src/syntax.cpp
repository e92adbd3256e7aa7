#include "fpc/syntax.hpp"

#include <map>

namespace fpc {

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

static TypePtr mkType(TypeKind k, std::string name, TypePtr l, TypePtr r) {
    auto t = std::make_shared<Type>();
    t->kind = k;
    t->name = std::move(name);
    t->lhs = std::move(l);
    t->rhs = std::move(r);
    return t;
}

TypePtr tVar(std::string name) { return mkType(TypeKind::Var, std::move(name), nullptr, nullptr); }
TypePtr tUnit() {
    static const TypePtr u = mkType(TypeKind::Unit, "", nullptr, nullptr);
    return u;
}
TypePtr tSum(TypePtr l, TypePtr r) { return mkType(TypeKind::Sum, "", std::move(l), std::move(r)); }
TypePtr tProd(TypePtr l, TypePtr r) { return mkType(TypeKind::Prod, "", std::move(l), std::move(r)); }
TypePtr tArrow(TypePtr l, TypePtr r) { return mkType(TypeKind::Arrow, "", std::move(l), std::move(r)); }
TypePtr tMu(std::string binder, TypePtr body) {
    return mkType(TypeKind::Mu, std::move(binder), nullptr, std::move(body));
}

static TermPtr mkTerm(TermKind k) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    return t;
}

TermPtr mVar(std::string name) {
    auto t = mkTerm(TermKind::Var);
    const_cast<Term&>(*t).name = std::move(name);
    return t;
}
TermPtr mUnit() {
    static const TermPtr u = mkTerm(TermKind::UnitVal);
    return u;
}
TermPtr mPair(TermPtr l, TermPtr r) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Pair;
    t->a = std::move(l);
    t->b = std::move(r);
    return t;
}
static TermPtr unary(TermKind k, TermPtr m) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->a = std::move(m);
    return t;
}
TermPtr mFst(TermPtr m) { return unary(TermKind::Fst, std::move(m)); }
TermPtr mSnd(TermPtr m) { return unary(TermKind::Snd, std::move(m)); }
TermPtr mInl(TermPtr m) { return unary(TermKind::Inl, std::move(m)); }
TermPtr mInr(TermPtr m) { return unary(TermKind::Inr, std::move(m)); }
TermPtr mFold(TermPtr m) { return unary(TermKind::Fold, std::move(m)); }
TermPtr mUnfold(TermPtr m) { return unary(TermKind::Unfold, std::move(m)); }
TermPtr mCase(TermPtr scrut, std::string x1, TermPtr left, std::string x2, TermPtr right) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Case;
    t->a = std::move(scrut);
    t->name = std::move(x1);
    t->b = std::move(left);
    t->name2 = std::move(x2);
    t->c = std::move(right);
    return t;
}
TermPtr mLam(std::string binder, TypePtr dom, TermPtr body) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Lam;
    t->name = std::move(binder);
    t->annot = std::move(dom);
    t->a = std::move(body);
    return t;
}
TermPtr mApp(TermPtr f, TermPtr arg) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::App;
    t->a = std::move(f);
    t->b = std::move(arg);
    return t;
}
TermPtr mAscribe(TermPtr m, TypePtr ty) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Ascribe;
    t->a = std::move(m);
    t->annot = std::move(ty);
    return t;
}
TermPtr mHole() { return mkTerm(TermKind::Hole); }

// ---------------------------------------------------------------------------
// Fresh names
// ---------------------------------------------------------------------------

static unsigned g_freshSeed = 0;

void setFreshSeed(unsigned seed) { g_freshSeed = seed; }
unsigned freshSeed() { return g_freshSeed; }

std::string freshName(const std::string& base, const std::set<std::string>& avoid) {
    // Strip trailing primes so renaming a renamed binder does not pile up.
    std::string stem = base;
    while (!stem.empty() && stem.back() == '\'') stem.pop_back();
    if (stem.empty()) stem = "x";
    std::string cand = stem;
    for (unsigned i = 0; i < g_freshSeed; ++i) cand += '\'';
    while (avoid.count(cand)) cand += '\'';
    return cand;
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

static void ftv(const TypePtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
    if (!t) return;
    switch (t->kind) {
    case TypeKind::Var:
        if (!bound.count(t->name)) out.insert(t->name);
        return;
    case TypeKind::Unit:
        return;
    case TypeKind::Sum:
    case TypeKind::Prod:
    case TypeKind::Arrow:
        ftv(t->lhs, bound, out);
        ftv(t->rhs, bound, out);
        return;
    case TypeKind::Mu: {
        bool fresh = bound.insert(t->name).second;
        ftv(t->rhs, bound, out);
        if (fresh) bound.erase(t->name);
        return;
    }
    }
}

std::set<std::string> freeTypeVars(const TypePtr& t) {
    std::set<std::string> bound, out;
    ftv(t, bound, out);
    return out;
}

static void fvTerm(const TermPtr& m, std::set<std::string>& bound, std::set<std::string>& out) {
    if (!m) return;
    switch (m->kind) {
    case TermKind::Var:
        if (!bound.count(m->name)) out.insert(m->name);
        return;
    case TermKind::Lam: {
        bool fresh = bound.insert(m->name).second;
        fvTerm(m->a, bound, out);
        if (fresh) bound.erase(m->name);
        return;
    }
    case TermKind::Case: {
        fvTerm(m->a, bound, out);
        bool f1 = bound.insert(m->name).second;
        fvTerm(m->b, bound, out);
        if (f1) bound.erase(m->name);
        bool f2 = bound.insert(m->name2).second;
        fvTerm(m->c, bound, out);
        if (f2) bound.erase(m->name2);
        return;
    }
    default:
        fvTerm(m->a, bound, out);
        fvTerm(m->b, bound, out);
        fvTerm(m->c, bound, out);
        return;
    }
}

std::set<std::string> freeVars(const TermPtr& m) {
    std::set<std::string> bound, out;
    fvTerm(m, bound, out);
    return out;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence: compare under parallel binder numbering.
// ---------------------------------------------------------------------------

namespace {

struct Scope {
    std::map<std::string, int> levels;  // name -> binder index (last binding wins)
    std::vector<std::pair<std::string, int>> saved;

    int lookup(const std::string& n) const {
        auto it = levels.find(n);
        return it == levels.end() ? -1 : it->second;
    }
    void push(const std::string& n, int lvl) {
        auto it = levels.find(n);
        saved.emplace_back(n, it == levels.end() ? -1 : it->second);
        levels[n] = lvl;
    }
    void pop() {
        auto [n, old] = saved.back();
        saved.pop_back();
        if (old < 0)
            levels.erase(n);
        else
            levels[n] = old;
    }
};

bool aeqType(const TypePtr& a, const TypePtr& b, Scope& sa, Scope& sb, int& lvl) {
    if (a == b && sa.levels.empty() && sb.levels.empty()) return true;
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case TypeKind::Var: {
        int la = sa.lookup(a->name), lb = sb.lookup(b->name);
        if (la != lb) return false;
        return la >= 0 || a->name == b->name;
    }
    case TypeKind::Unit:
        return true;
    case TypeKind::Sum:
    case TypeKind::Prod:
    case TypeKind::Arrow:
        return aeqType(a->lhs, b->lhs, sa, sb, lvl) && aeqType(a->rhs, b->rhs, sa, sb, lvl);
    case TypeKind::Mu: {
        sa.push(a->name, lvl);
        sb.push(b->name, lvl);
        ++lvl;
        bool ok = aeqType(a->rhs, b->rhs, sa, sb, lvl);
        sa.pop();
        sb.pop();
        return ok;
    }
    }
    return false;
}

bool aeqTerm(const TermPtr& a, const TermPtr& b, Scope& sa, Scope& sb, Scope& ta, Scope& tb,
             int& lvl) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case TermKind::Var: {
        int la = sa.lookup(a->name), lb = sb.lookup(b->name);
        if (la != lb) return false;
        return la >= 0 || a->name == b->name;
    }
    case TermKind::UnitVal:
    case TermKind::Hole:
        return true;
    case TermKind::Lam: {
        if (!aeqType(a->annot, b->annot, ta, tb, lvl)) return false;
        sa.push(a->name, lvl);
        sb.push(b->name, lvl);
        ++lvl;
        bool ok = aeqTerm(a->a, b->a, sa, sb, ta, tb, lvl);
        sa.pop();
        sb.pop();
        return ok;
    }
    case TermKind::Case: {
        if (!aeqTerm(a->a, b->a, sa, sb, ta, tb, lvl)) return false;
        sa.push(a->name, lvl);
        sb.push(b->name, lvl);
        ++lvl;
        bool okl = aeqTerm(a->b, b->b, sa, sb, ta, tb, lvl);
        sa.pop();
        sb.pop();
        if (!okl) return false;
        sa.push(a->name2, lvl);
        sb.push(b->name2, lvl);
        ++lvl;
        bool okr = aeqTerm(a->c, b->c, sa, sb, ta, tb, lvl);
        sa.pop();
        sb.pop();
        return okr;
    }
    case TermKind::Ascribe:
        return aeqType(a->annot, b->annot, ta, tb, lvl) && aeqTerm(a->a, b->a, sa, sb, ta, tb, lvl);
    default:
        return aeqTerm(a->a, b->a, sa, sb, ta, tb, lvl) &&
               aeqTerm(a->b, b->b, sa, sb, ta, tb, lvl) &&
               aeqTerm(a->c, b->c, sa, sb, ta, tb, lvl);
    }
}

} // namespace

bool alphaEq(const TypePtr& a, const TypePtr& b) {
    Scope sa, sb;
    int lvl = 0;
    return aeqType(a, b, sa, sb, lvl);
}

bool alphaEq(const TermPtr& a, const TermPtr& b) {
    Scope sa, sb, ta, tb;
    int lvl = 0;
    return aeqTerm(a, b, sa, sb, ta, tb, lvl);
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

TypePtr substTypeInType(const TypePtr& tau, const TypePtr& sigma, const std::string& alpha) {
    if (!tau) return tau;
    switch (tau->kind) {
    case TypeKind::Var:
        return tau->name == alpha ? sigma : tau;
    case TypeKind::Unit:
        return tau;
    case TypeKind::Sum:
        return tSum(substTypeInType(tau->lhs, sigma, alpha), substTypeInType(tau->rhs, sigma, alpha));
    case TypeKind::Prod:
        return tProd(substTypeInType(tau->lhs, sigma, alpha), substTypeInType(tau->rhs, sigma, alpha));
    case TypeKind::Arrow:
        return tArrow(substTypeInType(tau->lhs, sigma, alpha), substTypeInType(tau->rhs, sigma, alpha));
    case TypeKind::Mu: {
        if (tau->name == alpha) return tau;
        auto fvBody = freeTypeVars(tau->rhs);
        if (!fvBody.count(alpha)) return tau;
        auto fvSigma = freeTypeVars(sigma);
        if (fvSigma.count(tau->name)) {
            std::set<std::string> avoid = fvSigma;
            for (auto& v : fvBody) avoid.insert(v);
            avoid.insert(alpha);
            avoid.insert(tau->name);
            std::string nb = freshName(tau->name, avoid);
            auto body = substTypeInType(tau->rhs, tVar(nb), tau->name);
            return tMu(nb, substTypeInType(body, sigma, alpha));
        }
        return tMu(tau->name, substTypeInType(tau->rhs, sigma, alpha));
    }
    }
    return tau;
}

TypePtr unfoldMu(const TypePtr& mu) {
    return substTypeInType(mu->rhs, mu, mu->name);
}

namespace {

// Rename one term binder when it would capture free variables of the payload.
std::string avoidCapture(const std::string& binder, const std::set<std::string>& fvPayload,
                         const TermPtr& body, TermPtr& bodyOut) {
    if (!fvPayload.count(binder)) {
        bodyOut = body;
        return binder;
    }
    std::set<std::string> avoid = fvPayload;
    auto fvBody = freeVars(body);
    for (auto& v : fvBody) avoid.insert(v);
    avoid.insert(binder);
    std::string nb = freshName(binder, avoid);
    bodyOut = substTermInTerm(body, mVar(nb), binder);
    return nb;
}

TermPtr substT(const TermPtr& m, const TermPtr& n, const std::string& x,
               const std::set<std::string>& fvN) {
    if (!m) return m;
    switch (m->kind) {
    case TermKind::Var:
        return m->name == x ? n : m;
    case TermKind::UnitVal:
    case TermKind::Hole:
        return m;
    case TermKind::Lam: {
        if (m->name == x) return m;
        if (!freeVars(m).count(x)) return m;
        TermPtr body;
        std::string nb = avoidCapture(m->name, fvN, m->a, body);
        return mLam(nb, m->annot, substT(body, n, x, fvN));
    }
    case TermKind::Case: {
        if (!freeVars(m).count(x)) return m;
        auto scrut = substT(m->a, n, x, fvN);
        TermPtr lb = m->b, rb = m->c;
        std::string b1 = m->name, b2 = m->name2;
        if (b1 != x && freeVars(lb).count(x)) {
            b1 = avoidCapture(b1, fvN, lb, lb);
            lb = substT(lb, n, x, fvN);
        }
        if (b2 != x && freeVars(rb).count(x)) {
            b2 = avoidCapture(b2, fvN, rb, rb);
            rb = substT(rb, n, x, fvN);
        }
        return mCase(scrut, b1, lb, b2, rb);
    }
    case TermKind::Pair:
        return mPair(substT(m->a, n, x, fvN), substT(m->b, n, x, fvN));
    case TermKind::App:
        return mApp(substT(m->a, n, x, fvN), substT(m->b, n, x, fvN));
    case TermKind::Fst:
        return mFst(substT(m->a, n, x, fvN));
    case TermKind::Snd:
        return mSnd(substT(m->a, n, x, fvN));
    case TermKind::Inl:
        return mInl(substT(m->a, n, x, fvN));
    case TermKind::Inr:
        return mInr(substT(m->a, n, x, fvN));
    case TermKind::Fold:
        return mFold(substT(m->a, n, x, fvN));
    case TermKind::Unfold:
        return mUnfold(substT(m->a, n, x, fvN));
    case TermKind::Ascribe:
        return mAscribe(substT(m->a, n, x, fvN), m->annot);
    }
    return m;
}

} // namespace

TermPtr substTermInTerm(const TermPtr& m, const TermPtr& n, const std::string& x) {
    return substT(m, n, x, freeVars(n));
}

TermPtr stripAscriptions(const TermPtr& m) {
    if (!m) return m;
    switch (m->kind) {
    case TermKind::Ascribe:
        return stripAscriptions(m->a);
    case TermKind::Var:
    case TermKind::UnitVal:
    case TermKind::Hole:
        return m;
    case TermKind::Lam:
        return mLam(m->name, m->annot, stripAscriptions(m->a));
    case TermKind::Case:
        return mCase(stripAscriptions(m->a), m->name, stripAscriptions(m->b), m->name2,
                     stripAscriptions(m->c));
    case TermKind::Pair:
        return mPair(stripAscriptions(m->a), stripAscriptions(m->b));
    case TermKind::App:
        return mApp(stripAscriptions(m->a), stripAscriptions(m->b));
    case TermKind::Fst:
        return mFst(stripAscriptions(m->a));
    case TermKind::Snd:
        return mSnd(stripAscriptions(m->a));
    case TermKind::Inl:
        return mInl(stripAscriptions(m->a));
    case TermKind::Inr:
        return mInr(stripAscriptions(m->a));
    case TermKind::Fold:
        return mFold(stripAscriptions(m->a));
    case TermKind::Unfold:
        return mUnfold(stripAscriptions(m->a));
    }
    return m;
}

std::optional<ValueHead> isValue(const TermPtr& m) {
    switch (m->kind) {
    case TermKind::UnitVal: return ValueHead::Unit;
    case TermKind::Inl:     return ValueHead::Inl;
    case TermKind::Inr:     return ValueHead::Inr;
    case TermKind::Pair:    return ValueHead::Pair;
    case TermKind::Lam:     return ValueHead::Lam;
    case TermKind::Fold:    return ValueHead::Fold;
    default:                return std::nullopt;
    }
}

} // namespace fpc
