#include "fpc/denot.hpp"

#include "json.hpp"

namespace fpc {

using kernel::Delay;
using kernel::Susp;

// ---------------------------------------------------------------------------
// SemVal
// ---------------------------------------------------------------------------

SemVal SemVal::makeUnit(Delay<UnitTok> d) {
    return SemVal(std::make_shared<const Node>(Node{{std::move(d)}}));
}
SemVal SemVal::makeSum(Delay<SumV> d) {
    return SemVal(std::make_shared<const Node>(Node{{std::move(d)}}));
}
SemVal SemVal::makePair(SemVal l, SemVal r) {
    return SemVal(std::make_shared<const Node>(Node{{std::make_pair(std::move(l), std::move(r))}}));
}
SemVal SemVal::makeFun(Fun f) {
    return SemVal(std::make_shared<const Node>(Node{{std::move(f)}}));
}
SemVal SemVal::makeLater(Susp<SemVal> s) {
    return SemVal(std::make_shared<const Node>(Node{{std::move(s)}}));
}

SemVal::Kind SemVal::kind() const { return static_cast<Kind>(p_->v.index()); }

namespace {
[[noreturn]] void wrongVariant(const char* want) {
    throw std::logic_error(std::string("semantic value has the wrong shape: wanted ") + want);
}
} // namespace

const Delay<UnitTok>& SemVal::asUnit() const {
    if (kind() != Kind::Unit) wrongVariant("unit");
    return std::get<0>(p_->v);
}
const Delay<SumV>& SemVal::asSum() const {
    if (kind() != Kind::Sum) wrongVariant("sum");
    return std::get<1>(p_->v);
}
const SemVal& SemVal::fst() const {
    if (kind() != Kind::Pair) wrongVariant("pair");
    return std::get<2>(p_->v).first;
}
const SemVal& SemVal::snd() const {
    if (kind() != Kind::Pair) wrongVariant("pair");
    return std::get<2>(p_->v).second;
}
const SemVal::Fun& SemVal::asFun() const {
    if (kind() != Kind::Fun) wrongVariant("function");
    return std::get<3>(p_->v);
}
const Susp<SemVal>& SemVal::asLater() const {
    if (kind() != Kind::Later) wrongVariant("later");
    return std::get<4>(p_->v);
}

Env Env::extend(const std::string& name, SemVal v) const {
    auto n = std::make_shared<Node>(Node{name, std::move(v), head_});
    Env e;
    e.head_ = std::move(n);
    return e;
}

const SemVal* Env::find(const std::string& name) const {
    for (const Node* n = head_.get(); n; n = n->next.get())
        if (n->name == name) return &n->val;
    return nullptr;
}

// ---------------------------------------------------------------------------
// tick / delay
// ---------------------------------------------------------------------------

SemVal tick(const TypePtr& sigma, Susp<SemVal> s) {
    switch (sigma->kind) {
    case TypeKind::Unit:
        return SemVal::makeUnit(kernel::stepL(
            Susp<Delay<UnitTok>>([s] { return s.get().asUnit(); })));
    case TypeKind::Sum:
        return SemVal::makeSum(kernel::stepL(
            Susp<Delay<SumV>>([s] { return s.get().asSum(); })));
    case TypeKind::Prod:
        return SemVal::makePair(
            tick(sigma->lhs, Susp<SemVal>([s] { return s.get().fst(); })),
            tick(sigma->rhs, Susp<SemVal>([s] { return s.get().snd(); })));
    case TypeKind::Arrow: {
        TypePtr cod = sigma->rhs;
        return SemVal::makeFun([cod, s](const SemVal& x) {
            return tick(cod, Susp<SemVal>([s, x] { return s.get().apply(x); }));
        });
    }
    case TypeKind::Mu: {
        TypePtr unf = unfoldMu(sigma);
        return SemVal::makeLater(
            Susp<SemVal>([unf, s] { return tick(unf, s.get().asLater()); }));
    }
    case TypeKind::Var:
        break;
    }
    throw std::logic_error("tick: open type");
}

SemVal delaySem(const TypePtr& sigma, SemVal d) {
    return tick(sigma, Susp<SemVal>::pure(std::move(d)));
}

// ---------------------------------------------------------------------------
// denote
// ---------------------------------------------------------------------------

SemVal denote(const CorePtr& m, const Env& env) {
    switch (m->kind) {
    case TermKind::Var: {
        const SemVal* v = env.find(m->name);
        if (!v) throw std::logic_error("denote: unbound variable " + m->name);
        return *v;
    }
    case TermKind::UnitVal:
        return SemVal::makeUnit(kernel::eta(UnitTok{}));
    case TermKind::Pair:
        return SemVal::makePair(denote(m->a, env), denote(m->b, env));
    case TermKind::Fst:
        return denote(m->a, env).fst();
    case TermKind::Snd:
        return denote(m->a, env).snd();
    case TermKind::Inl:
        return SemVal::makeSum(kernel::eta(SumV{true, denote(m->a, env)}));
    case TermKind::Inr:
        return SemVal::makeSum(kernel::eta(SumV{false, denote(m->a, env)}));
    case TermKind::Lam: {
        CorePtr body = m->a;
        std::string binder = m->name;
        return SemVal::makeFun([body, binder, env](const SemVal& x) {
            return denote(body, env.extend(binder, x));
        });
    }
    case TermKind::App:
        return denote(m->a, env).apply(denote(m->b, env));
    case TermKind::Case: {
        TypePtr res = m->type;
        CorePtr lb = m->b, rb = m->c;
        std::string x1 = m->name, x2 = m->name2;
        std::function<SemVal(const SumV&)> branch = [lb, rb, x1, x2, env](const SumV& v) {
            return v.left ? denote(lb, env.extend(x1, v.payload))
                          : denote(rb, env.extend(x2, v.payload));
        };
        std::function<SemVal(Susp<SemVal>)> alg = [res](Susp<SemVal> s) {
            return tick(res, std::move(s));
        };
        auto hom = kernel::ext<SumV, SemVal>(std::move(branch), std::move(alg));
        return hom(denote(m->a, env).asSum());
    }
    case TermKind::Fold: {
        CorePtr body = m->a;
        Env captured = env;
        return SemVal::makeLater(Susp<SemVal>([body, captured] { return denote(body, captured); }));
    }
    case TermKind::Unfold: {
        // The node's own type is the unfolded recursive type.
        SemVal inner = denote(m->a, env);
        return tick(m->type, inner.asLater());
    }
    case TermKind::Ascribe:
    case TermKind::Hole:
        break;
    }
    throw std::logic_error("denote: unexpected node");
}

// ---------------------------------------------------------------------------
// Ground observations
// ---------------------------------------------------------------------------

Observation observeUnit(const SemVal& d, long fuel) {
    auto r = kernel::force(d.asUnit(), fuel);
    Observation o;
    if (r.converged()) {
        o.converged = true;
        o.steps = r.steps;
    } else {
        o.fuel = r.steps;
    }
    return o;
}

Observation observeBool(const SemVal& d, long fuel) {
    auto r = kernel::force(d.asSum(), fuel);
    Observation o;
    if (r.converged()) {
        o.converged = true;
        o.steps = r.steps;
        o.left = r.value->left;  // the payload itself stays unforced
    } else {
        o.fuel = r.steps;
    }
    return o;
}

std::string observationToJson(const Observation& o) {
    nlohmann::json j;
    j["verdict"] = o.converged ? "converged" : "timeout";
    if (o.converged) {
        j["steps"] = o.steps;
        if (o.left.has_value()) j["side"] = *o.left ? "inl" : "inr";
    } else {
        j["fuel"] = o.fuel;
    }
    return j.dump();
}

} // namespace fpc
