#ifndef FPC_DENOT_HPP
#define FPC_DENOT_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "fpc/kernel.hpp"
#include "fpc/types.hpp"

namespace fpc {

// ---------------------------------------------------------------------------
// SemVal: the semantic domain, one variant per type head.
//   unit    |1|          = L 1
//   sum     |t1 + t2|    = L (|t1| + |t2|)
//   pair    |t1 * t2|    = |t1| x |t2|
//   fun     |t1 -> t2|   = |t1| -> |t2|
//   later   |mu a. t|    = later |t[mu a. t / a]|
// ---------------------------------------------------------------------------

struct UnitTok {};

class SemVal;
struct SumV;

class SemVal {
public:
    enum class Kind { Unit, Sum, Pair, Fun, Later };
    using Fun = std::function<SemVal(const SemVal&)>;

    static SemVal makeUnit(kernel::Delay<UnitTok> d);
    static SemVal makeSum(kernel::Delay<SumV> d);
    static SemVal makePair(SemVal l, SemVal r);
    static SemVal makeFun(Fun f);
    static SemVal makeLater(kernel::Susp<SemVal> s);

    Kind kind() const;
    const kernel::Delay<UnitTok>& asUnit() const;
    const kernel::Delay<SumV>& asSum() const;
    const SemVal& fst() const;
    const SemVal& snd() const;
    const Fun& asFun() const;
    const kernel::Susp<SemVal>& asLater() const;

    SemVal apply(const SemVal& arg) const { return asFun()(arg); }

private:
    struct Node;
    std::shared_ptr<const Node> p_;
    explicit SemVal(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
};

struct SumV {
    bool left;
    SemVal payload;
};

struct SemVal::Node {
    std::variant<kernel::Delay<UnitTok>, kernel::Delay<SumV>, std::pair<SemVal, SemVal>, Fun,
                 kernel::Susp<SemVal>>
        v;
};

// ---------------------------------------------------------------------------
// Environments: persistent name -> SemVal maps.
// ---------------------------------------------------------------------------

class Env {
    struct Node {
        std::string name;
        SemVal val;
        std::shared_ptr<const Node> next;
    };
    std::shared_ptr<const Node> head_;

public:
    Env() = default;
    Env extend(const std::string& name, SemVal v) const;
    const SemVal* find(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// The tick algebra, delay, interpretation, and ground observation.
// ---------------------------------------------------------------------------

/// theta_sigma : later |sigma| -> |sigma|, by recursion on the closed type.
SemVal tick(const TypePtr& sigma, kernel::Susp<SemVal> s);

/// delta_sigma = theta_sigma . next.
SemVal delaySem(const TypePtr& sigma, SemVal d);

/// |M|(env), for an elaborated core term whose free variables env covers.
SemVal denote(const CorePtr& m, const Env& env = {});

struct Observation {
    bool converged = false;
    long steps = 0;                 // delays unrolled when converged
    long fuel = 0;                  // fuel consumed on timeout
    std::optional<bool> left;       // Bool observations: which injection
};

Observation observeUnit(const SemVal& d, long fuel);
Observation observeBool(const SemVal& d, long fuel);

std::string observationToJson(const Observation& o);

} // namespace fpc

#endif
