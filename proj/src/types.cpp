#include "fpc/types.hpp"

#include <algorithm>

#include "fpc/surface.hpp"

namespace fpc {

TypeError::TypeError(std::string node_, std::string msg, TypePtr exp, TypePtr fnd, bool gap)
    : std::runtime_error([&] {
          std::string s = "type error at `" + node_ + "`: " + msg;
          if (exp) s += " (expected " + printType(exp);
          if (fnd) s += ", found " + printType(fnd);
          if (exp) s += ")";
          return s;
      }()),
      node(std::move(node_)),
      expected(std::move(exp)),
      found(std::move(fnd)),
      synthesisGap(gap) {}

bool wfType(const TypeCtx& theta, const TypePtr& tau) {
    switch (tau->kind) {
    case TypeKind::Var:
        return std::find(theta.begin(), theta.end(), tau->name) != theta.end();
    case TypeKind::Unit:
        return true;
    case TypeKind::Sum:
    case TypeKind::Prod:
    case TypeKind::Arrow:
        return wfType(theta, tau->lhs) && wfType(theta, tau->rhs);
    case TypeKind::Mu: {
        if (std::find(theta.begin(), theta.end(), tau->name) != theta.end())
            return false;  // "alpha not in Theta" side condition
        TypeCtx ext = theta;
        ext.push_back(tau->name);
        return wfType(ext, tau->rhs);
    }
    }
    return false;
}

namespace {

// A term whose type can only be checked, never synthesised.
struct CannotInfer {
    std::string what;
};

const TypePtr* lookup(const TermCtx& gamma, const std::string& x) {
    for (auto it = gamma.rbegin(); it != gamma.rend(); ++it)
        if (it->first == x) return &it->second;
    return nullptr;
}

std::string snippet(const TermPtr& m) {
    std::string s = printTerm(m);
    if (s.size() > 60) s = s.substr(0, 57) + "...";
    return s;
}

// The context `[-]` typing hook.  When set, Hole nodes synthesise `type`
// after verifying the ambient context provides every binding the hole's
// gamma promises (innermost lookup, same type).  Ambient extras are fine:
// a filled term typed in gamma stays well-typed under the larger context.
struct HoleTyping {
    const TermCtx* gamma;
    TypePtr type;
};

bool providesCtx(const TermCtx& ambient, const TermCtx& gamma) {
    for (const auto& [name, ty] : gamma) {
        const TypePtr* got = nullptr;
        for (auto it = ambient.rbegin(); it != ambient.rend(); ++it)
            if (it->first == name) {
                got = &it->second;
                break;
            }
        if (!got || !alphaEq(*got, ty)) return false;
    }
    return true;
}

struct Checker {
    const HoleTyping* hole = nullptr;

    CorePtr core(TermKind k, TypePtr ty, std::string name, std::string name2, TypePtr annot,
                 CorePtr a, CorePtr b, CorePtr c) {
        auto n = std::make_shared<CoreTerm>();
        n->kind = k;
        n->type = std::move(ty);
        n->name = std::move(name);
        n->name2 = std::move(name2);
        n->annot = std::move(annot);
        n->a = std::move(a);
        n->b = std::move(b);
        n->c = std::move(c);
        return n;
    }

    CorePtr inferC(const TermCtx& gamma, const TermPtr& m) {
        switch (m->kind) {
        case TermKind::Var: {
            const TypePtr* t = lookup(gamma, m->name);
            if (!t) throw TypeError(snippet(m), "unbound variable '" + m->name + "'");
            return core(TermKind::Var, *t, m->name, "", nullptr, nullptr, nullptr, nullptr);
        }
        case TermKind::UnitVal:
            return core(TermKind::UnitVal, tUnit(), "", "", nullptr, nullptr, nullptr, nullptr);
        case TermKind::Pair: {
            CorePtr l = inferC(gamma, m->a);
            CorePtr r = inferC(gamma, m->b);
            return core(TermKind::Pair, tProd(l->type, r->type), "", "", nullptr, l, r, nullptr);
        }
        case TermKind::Fst: {
            CorePtr p = inferC(gamma, m->a);
            if (p->type->kind != TypeKind::Prod)
                throw TypeError(snippet(m), "fst needs a product", nullptr, p->type);
            return core(TermKind::Fst, p->type->lhs, "", "", nullptr, p, nullptr, nullptr);
        }
        case TermKind::Snd: {
            CorePtr p = inferC(gamma, m->a);
            if (p->type->kind != TypeKind::Prod)
                throw TypeError(snippet(m), "snd needs a product", nullptr, p->type);
            return core(TermKind::Snd, p->type->rhs, "", "", nullptr, p, nullptr, nullptr);
        }
        case TermKind::Inl:
        case TermKind::Inr:
            throw CannotInfer{"injection needs an expected sum type"};
        case TermKind::Fold:
            throw CannotInfer{"fold needs an expected recursive type"};
        case TermKind::Lam: {
            if (!wfType({}, m->annot))
                throw TypeError(snippet(m), "annotation is not a closed well-formed type",
                                nullptr, m->annot);
            TermCtx ext = gamma;
            ext.emplace_back(m->name, m->annot);
            CorePtr body = inferC(ext, m->a);
            return core(TermKind::Lam, tArrow(m->annot, body->type), m->name, "", m->annot,
                        body, nullptr, nullptr);
        }
        case TermKind::App: {
            CorePtr f = inferC(gamma, m->a);
            if (f->type->kind != TypeKind::Arrow)
                throw TypeError(snippet(m), "application head is not a function", nullptr,
                                f->type);
            CorePtr arg = checkC(gamma, m->b, f->type->lhs);
            return core(TermKind::App, f->type->rhs, "", "", nullptr, f, arg, nullptr);
        }
        case TermKind::Unfold: {
            CorePtr u = inferC(gamma, m->a);
            if (u->type->kind != TypeKind::Mu)
                throw TypeError(snippet(m), "unfold needs a recursive type", nullptr, u->type);
            return core(TermKind::Unfold, unfoldMu(u->type), "", "", nullptr, u, nullptr,
                        nullptr);
        }
        case TermKind::Case: {
            CorePtr scrut = inferC(gamma, m->a);
            if (scrut->type->kind != TypeKind::Sum)
                throw TypeError(snippet(m), "case scrutinee is not a sum", nullptr, scrut->type);
            TermCtx g1 = gamma;
            g1.emplace_back(m->name, scrut->type->lhs);
            TermCtx g2 = gamma;
            g2.emplace_back(m->name2, scrut->type->rhs);
            // Either branch may synthesise the result type; the other checks.
            try {
                CorePtr l = inferC(g1, m->b);
                CorePtr r = checkC(g2, m->c, l->type);
                return core(TermKind::Case, l->type, m->name, m->name2, nullptr, scrut, l, r);
            } catch (const CannotInfer&) {
                CorePtr r = inferC(g2, m->c);
                CorePtr l = checkC(g1, m->b, r->type);
                return core(TermKind::Case, r->type, m->name, m->name2, nullptr, scrut, l, r);
            }
        }
        case TermKind::Ascribe: {
            if (!wfType({}, m->annot))
                throw TypeError(snippet(m), "ascription is not a closed well-formed type",
                                nullptr, m->annot);
            return checkC(gamma, m->a, m->annot);
        }
        case TermKind::Hole: {
            if (!hole) throw TypeError(snippet(m), "hole outside a context file");
            if (!providesCtx(gamma, *hole->gamma))
                throw TypeError(snippet(m), "hole used under a context not providing its typing");
            return core(TermKind::Hole, hole->type, "", "", nullptr, nullptr, nullptr, nullptr);
        }
        }
        throw TypeError(snippet(m), "unhandled term form");
    }

    CorePtr checkC(const TermCtx& gamma, const TermPtr& m, const TypePtr& tau) {
        switch (m->kind) {
        case TermKind::Lam: {
            if (tau->kind != TypeKind::Arrow)
                throw TypeError(snippet(m), "function against non-arrow type", tau, nullptr);
            if (!alphaEq(m->annot, tau->lhs))
                throw TypeError(snippet(m), "parameter annotation mismatch", tau->lhs, m->annot);
            TermCtx ext = gamma;
            ext.emplace_back(m->name, m->annot);
            CorePtr body = checkC(ext, m->a, tau->rhs);
            return core(TermKind::Lam, tau, m->name, "", m->annot, body, nullptr, nullptr);
        }
        case TermKind::Pair: {
            if (tau->kind != TypeKind::Prod)
                throw TypeError(snippet(m), "pair against non-product type", tau, nullptr);
            CorePtr l = checkC(gamma, m->a, tau->lhs);
            CorePtr r = checkC(gamma, m->b, tau->rhs);
            return core(TermKind::Pair, tau, "", "", nullptr, l, r, nullptr);
        }
        case TermKind::Inl: {
            if (tau->kind != TypeKind::Sum)
                throw TypeError(snippet(m), "inl against non-sum type", tau, nullptr);
            CorePtr p = checkC(gamma, m->a, tau->lhs);
            return core(TermKind::Inl, tau, "", "", nullptr, p, nullptr, nullptr);
        }
        case TermKind::Inr: {
            if (tau->kind != TypeKind::Sum)
                throw TypeError(snippet(m), "inr against non-sum type", tau, nullptr);
            CorePtr p = checkC(gamma, m->a, tau->rhs);
            return core(TermKind::Inr, tau, "", "", nullptr, p, nullptr, nullptr);
        }
        case TermKind::Fold: {
            if (tau->kind != TypeKind::Mu)
                throw TypeError(snippet(m), "fold against non-recursive type", tau, nullptr);
            CorePtr p = checkC(gamma, m->a, unfoldMu(tau));
            return core(TermKind::Fold, tau, "", "", nullptr, p, nullptr, nullptr);
        }
        case TermKind::Case: {
            CorePtr scrut = inferC(gamma, m->a);
            if (scrut->type->kind != TypeKind::Sum)
                throw TypeError(snippet(m), "case scrutinee is not a sum", nullptr, scrut->type);
            TermCtx g1 = gamma;
            g1.emplace_back(m->name, scrut->type->lhs);
            TermCtx g2 = gamma;
            g2.emplace_back(m->name2, scrut->type->rhs);
            CorePtr l = checkC(g1, m->b, tau);
            CorePtr r = checkC(g2, m->c, tau);
            return core(TermKind::Case, tau, m->name, m->name2, nullptr, scrut, l, r);
        }
        case TermKind::Ascribe: {
            CorePtr p = inferC(gamma, m);
            if (!alphaEq(p->type, tau))
                throw TypeError(snippet(m), "ascription does not match expected type", tau,
                                p->type);
            return p;
        }
        default: {
            CorePtr p = inferC(gamma, m);
            if (!alphaEq(p->type, tau))
                throw TypeError(snippet(m), "type mismatch", tau, p->type);
            return p;
        }
        }
    }
};

void checkCtx(const TermCtx& gamma) {
    for (size_t i = 0; i < gamma.size(); ++i) {
        if (!wfType({}, gamma[i].second))
            throw TypeError(gamma[i].first, "context type is not closed and well-formed",
                            nullptr, gamma[i].second);
        for (size_t j = i + 1; j < gamma.size(); ++j)
            if (gamma[i].first == gamma[j].first)
                throw TypeError(gamma[i].first, "duplicate variable in context");
    }
}

} // namespace

TypePtr infer(const TermCtx& gamma, const TermPtr& m) {
    checkCtx(gamma);
    Checker ck;
    try {
        return ck.inferC(gamma, m)->type;
    } catch (const CannotInfer& ci) {
        throw TypeError(printTerm(m), ci.what, nullptr, nullptr, true);
    }
}

void check(const TermCtx& gamma, const TermPtr& m, const TypePtr& tau) {
    checkCtx(gamma);
    Checker ck;
    try {
        ck.checkC(gamma, m, tau);
    } catch (const CannotInfer& ci) {
        throw TypeError(printTerm(m), ci.what, nullptr, nullptr, true);
    }
}

CorePtr elaborate(const TermCtx& gamma, const TermPtr& m) {
    checkCtx(gamma);
    Checker ck;
    try {
        return ck.inferC(gamma, m);
    } catch (const CannotInfer& ci) {
        throw TypeError(printTerm(m), ci.what, nullptr, nullptr, true);
    }
}

CorePtr elaborateAgainst(const TermCtx& gamma, const TermPtr& m, const TypePtr& tau) {
    checkCtx(gamma);
    Checker ck;
    try {
        return ck.checkC(gamma, m, tau);
    } catch (const CannotInfer& ci) {
        throw TypeError(printTerm(m), ci.what, nullptr, nullptr, true);
    }
}

TypePtr inferContextType(const TermCtx& delta, const TermPtr& ctx, const TermCtx& holeGamma,
                         const TypePtr& holeType) {
    checkCtx(delta);
    checkCtx(holeGamma);
    HoleTyping hs{&holeGamma, holeType};
    Checker ck;
    ck.hole = &hs;
    try {
        return ck.inferC(delta, ctx)->type;
    } catch (const CannotInfer& ci) {
        throw TypeError(printTerm(ctx), ci.what, nullptr, nullptr, true);
    }
}

TermPtr eraseCore(const CorePtr& c) {
    if (!c) return nullptr;
    switch (c->kind) {
    case TermKind::Var:     return mVar(c->name);
    case TermKind::UnitVal: return mUnit();
    case TermKind::Hole:    return mHole();
    case TermKind::Pair:    return mPair(eraseCore(c->a), eraseCore(c->b));
    case TermKind::Fst:     return mFst(eraseCore(c->a));
    case TermKind::Snd:     return mSnd(eraseCore(c->a));
    case TermKind::Inl:     return mInl(eraseCore(c->a));
    case TermKind::Inr:     return mInr(eraseCore(c->a));
    case TermKind::Fold:    return mFold(eraseCore(c->a));
    case TermKind::Unfold:  return mUnfold(eraseCore(c->a));
    case TermKind::Lam:     return mLam(c->name, c->annot, eraseCore(c->a));
    case TermKind::App:     return mApp(eraseCore(c->a), eraseCore(c->b));
    case TermKind::Case:
        return mCase(eraseCore(c->a), c->name, eraseCore(c->b), c->name2, eraseCore(c->c));
    case TermKind::Ascribe:
        break;  // never present in core
    }
    throw std::logic_error("eraseCore: unexpected node");
}

namespace {

void annot(const CorePtr& c, const TermCtx& gamma) {
    auto fail = [&](const char* why) {
        throw std::logic_error(std::string("annotation defect: ") + why);
    };
    switch (c->kind) {
    case TermKind::Var: {
        const TypePtr* t = lookup(gamma, c->name);
        if (!t || !alphaEq(*t, c->type)) fail("variable type");
        return;
    }
    case TermKind::UnitVal:
        if (c->type->kind != TypeKind::Unit) fail("unit type");
        return;
    case TermKind::Hole:
        return;
    case TermKind::Pair: {
        if (c->type->kind != TypeKind::Prod || !alphaEq(c->type->lhs, c->a->type) ||
            !alphaEq(c->type->rhs, c->b->type))
            fail("pair type");
        annot(c->a, gamma);
        annot(c->b, gamma);
        return;
    }
    case TermKind::Fst:
        if (c->a->type->kind != TypeKind::Prod || !alphaEq(c->a->type->lhs, c->type))
            fail("fst type");
        annot(c->a, gamma);
        return;
    case TermKind::Snd:
        if (c->a->type->kind != TypeKind::Prod || !alphaEq(c->a->type->rhs, c->type))
            fail("snd type");
        annot(c->a, gamma);
        return;
    case TermKind::Inl:
        if (c->type->kind != TypeKind::Sum || !alphaEq(c->type->lhs, c->a->type))
            fail("inl type");
        annot(c->a, gamma);
        return;
    case TermKind::Inr:
        if (c->type->kind != TypeKind::Sum || !alphaEq(c->type->rhs, c->a->type))
            fail("inr type");
        annot(c->a, gamma);
        return;
    case TermKind::Fold:
        if (c->type->kind != TypeKind::Mu || !alphaEq(unfoldMu(c->type), c->a->type))
            fail("fold type");
        annot(c->a, gamma);
        return;
    case TermKind::Unfold:
        if (c->a->type->kind != TypeKind::Mu || !alphaEq(unfoldMu(c->a->type), c->type))
            fail("unfold type");
        annot(c->a, gamma);
        return;
    case TermKind::Lam: {
        if (c->type->kind != TypeKind::Arrow || !alphaEq(c->type->lhs, c->annot) ||
            !alphaEq(c->type->rhs, c->a->type))
            fail("lambda type");
        TermCtx ext = gamma;
        ext.emplace_back(c->name, c->annot);
        annot(c->a, ext);
        return;
    }
    case TermKind::App:
        if (c->a->type->kind != TypeKind::Arrow || !alphaEq(c->a->type->lhs, c->b->type) ||
            !alphaEq(c->a->type->rhs, c->type))
            fail("application type");
        annot(c->a, gamma);
        annot(c->b, gamma);
        return;
    case TermKind::Case: {
        if (c->a->type->kind != TypeKind::Sum) fail("case scrutinee type");
        if (!alphaEq(c->b->type, c->type) || !alphaEq(c->c->type, c->type))
            fail("case branch type");
        annot(c->a, gamma);
        TermCtx g1 = gamma;
        g1.emplace_back(c->name, c->a->type->lhs);
        annot(c->b, g1);
        TermCtx g2 = gamma;
        g2.emplace_back(c->name2, c->a->type->rhs);
        annot(c->c, g2);
        return;
    }
    case TermKind::Ascribe:
        fail("ascription survived elaboration");
    }
}

} // namespace

void checkAnnotations(const CorePtr& c) { annot(c, {}); }

} // namespace fpc
