#ifndef FPC_KERNEL_HPP
#define FPC_KERNEL_HPP

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>

namespace fpc::kernel {

/// Thrown when a suspension demands itself while it is being computed, i.e.
/// the producer violated the productivity contract.
struct NonProductive : std::logic_error {
    NonProductive() : std::logic_error("suspension demanded itself during construction") {}
};

// ---------------------------------------------------------------------------
// Susp<T>: a memoized suspension (the later modality).  Demanding twice
// returns the first result; construction never runs the body.  Contract:
// construct and demand from one thread per evaluation session.
// ---------------------------------------------------------------------------

template <typename T>
class Susp {
    struct Cell {
        std::function<T()> compute;
        std::optional<T> value;
        bool running = false;
    };
    std::shared_ptr<Cell> cell_;
    Susp() : cell_(std::make_shared<Cell>()) {}

public:
    explicit Susp(std::function<T()> f) : Susp() { cell_->compute = std::move(f); }

    /// next: anything available now is also available later.
    static Susp pure(T v) {
        Susp s;
        s.cell_->value = std::move(v);
        return s;
    }

    const T& get() const {
        Cell& c = *cell_;
        if (!c.value) {
            if (c.running) throw NonProductive();
            c.running = true;
            auto f = std::move(c.compute);
            c.compute = nullptr;
            c.value = f();  // the closure is dropped after this, freeing captures
            c.running = false;
        }
        return *c.value;
    }

    bool evaluated() const { return cell_->value.has_value(); }

    /// Teardown support: move the cached value out iff this cell is owned by
    /// exactly `owners` handles and has been evaluated.  Destroying a forced
    /// chain link-by-link must not recurse through nested destructors.
    std::optional<T> stealValueForTeardown(long owners) {
        if (cell_.use_count() != owners || !cell_->value) return std::nullopt;
        std::optional<T> out = std::move(cell_->value);
        cell_->value.reset();
        return out;
    }
};

// ---------------------------------------------------------------------------
// Delay<T>:  L T  with  L T ~ T + later(L T).  Now is a value, Step ticks.
// The Step chain may be infinite; only force (with fuel) may unroll it.
// ---------------------------------------------------------------------------

template <typename T>
class Delay {
    using Node = std::variant<T, Susp<Delay>>;
    std::shared_ptr<const Node> n_;
    explicit Delay(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

public:
    static Delay now(T v) { return Delay(std::make_shared<const Node>(std::move(v))); }
    static Delay step(Susp<Delay> s) { return Delay(std::make_shared<const Node>(std::move(s))); }

    bool isNow() const { return n_->index() == 0; }
    const T& value() const { return std::get<0>(*n_); }
    const Susp<Delay>& tail() const { return std::get<1>(*n_); }

    Delay(const Delay&) = default;
    Delay(Delay&&) noexcept = default;
    Delay& operator=(const Delay&) = default;
    Delay& operator=(Delay&&) noexcept = default;

    // A forced chain links node -> cell -> node ...; letting the default
    // destructor recurse over 10^4 Step layers overflows the stack, so
    // exclusively-owned links are unwound iteratively.
    ~Delay() {
        if (!n_ || n_.use_count() != 1) return;
        std::shared_ptr<const Node> cur = std::move(n_);
        while (cur && cur.use_count() == 1 && cur->index() == 1) {
            Susp<Delay> s = std::get<1>(*cur);  // cell refs: node's copy + s
            std::optional<Delay> next = s.stealValueForTeardown(2);
            if (!next) break;
            cur.reset();  // shallow: the stolen tail is safe in `next`
            cur = std::move(next->n_);
        }
    }
};

template <typename T>
Delay<T> eta(T v) {
    return Delay<T>::now(std::move(v));
}

template <typename T>
Delay<T> stepL(Susp<Delay<T>> s) {
    return Delay<T>::step(std::move(s));
}

/// delta = stepL . next: add one tick in front of a computation.
template <typename T>
Delay<T> deltaL(Delay<T> d) {
    return stepL(Susp<Delay<T>>::pure(std::move(d)));
}

// ---------------------------------------------------------------------------
// gfix: knot-tying guarded fixpoint.  f must not demand its argument before
// returning (productivity); a self-demand is reported as NonProductive.
// ---------------------------------------------------------------------------

template <typename T, typename F>
T gfix(F f) {
    auto hole = std::make_shared<std::optional<T>>();
    Susp<T> self([hole]() -> T {
        if (!hole->has_value()) throw NonProductive();
        return **hole;
    });
    T result = f(self);
    *hole = result;
    return result;
}

// ---------------------------------------------------------------------------
// ext: lift f : A -> B to the homomorphism of tick-algebras L A -> B, where
// tickB : Susp<B> -> B is the algebra on B.  The Step case wraps lazily; the
// suspension is only demanded when tickB's result is.
// ---------------------------------------------------------------------------

template <typename A, typename B>
std::function<B(Delay<A>)> ext(std::function<B(const A&)> f,
                               std::function<B(Susp<B>)> tickB) {
    auto holder = std::make_shared<std::function<B(const Delay<A>&)>>();
    std::weak_ptr<std::function<B(const Delay<A>&)>> wp = holder;
    *holder = [f = std::move(f), tickB = std::move(tickB), wp](const Delay<A>& d) -> B {
        if (d.isNow()) return f(d.value());
        Susp<Delay<A>> r = d.tail();
        auto self = wp.lock();
        return tickB(Susp<B>([self, r]() -> B { return (*self)(r.get()); }));
    };
    return [holder](Delay<A> d) { return (*holder)(d); };
}

// ---------------------------------------------------------------------------
// force: fuel-bounded unrolling (the clock-erased global observation).
// Converged(x, n) iff d = delta^n(eta x) with n <= fuel; otherwise Timeout
// after consuming all the fuel.
// ---------------------------------------------------------------------------

template <typename T>
struct ForceResult {
    std::optional<T> value;  // engaged iff converged
    long steps = 0;          // Step layers unrolled (converged) / fuel consumed
    bool converged() const { return value.has_value(); }
};

template <typename T>
ForceResult<T> force(Delay<T> d, long fuel) {
    for (long n = 0;; ++n) {
        if (d.isNow()) return {d.value(), n};
        if (n >= fuel) return {std::nullopt, fuel};
        d = d.tail().get();
    }
}

} // namespace fpc::kernel

#endif
