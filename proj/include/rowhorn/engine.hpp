#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "rowhorn/clause.hpp"
#include "rowhorn/term.hpp"

namespace rowhorn {

struct EngineConfig {
    enum class Mode { Inductive, Coinductive };

    Mode mode = Mode::Inductive;
    // Maximum resolution steps along one derivation branch.
    int depth_limit = 10000;
    // Empty = unbounded.
    std::optional<std::uint64_t> max_solutions;
    bool trace = false;
};

// How a goal was discharged. Indices are 0-based clause positions; the
// loop rule records the branch depth at which the ancestor was resolved.
struct ClauseRule {
    int index;
};
struct LoopRule {
    int ancestor_depth;
};
struct CofactRule {
    int index;
};
using RuleRef = std::variant<ClauseRule, LoopRule, CofactRule>;

// One node of the resolved branch of the derivation tree. Leaves are
// facts, co-fact closures, or loop closures.
struct DerivationNode {
    Atom goal;
    RuleRef rule;
    std::vector<std::shared_ptr<const DerivationNode>> children;
};

struct Solution {
    // Answer substitution restricted to the query variables (cyclic
    // answers keep their cycle nodes as auxiliary entries).
    Substitution bindings;
    // True iff a loop closure or co-fact closure was used on this branch.
    bool coinductive = false;
    // Resolution steps along the branch that produced this answer.
    int steps = 0;
    // Present when tracing is enabled.
    std::shared_ptr<const DerivationNode> derivation;
};

using TraceSink = std::function<void(const std::string&)>;

// Lazy, deterministic depth-first answer stream. The Program and VarGen
// must outlive the stream; one stream is consumed from one thread.
class SolutionStream {
public:
    SolutionStream(const Program& program, std::vector<Atom> goal,
                   EngineConfig config, VarGen& gen, TraceSink sink = {});
    ~SolutionStream();
    SolutionStream(SolutionStream&&) noexcept;
    SolutionStream& operator=(SolutionStream&&) noexcept;

    std::optional<Solution> next();

    // True once some branch was pruned by the step budget. After next()
    // returns empty this tells "no" (false) apart from "unknown" (true).
    bool budget_exceeded() const;

    // Drain the stream (max_solutions still applies).
    std::vector<Solution> collect();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Depth-first, left-to-right SLD resolution; clauses tried in source order
// after rename_apart. In coinductive mode, loop closure against
// same-predicate ancestors (rational unification) and co-fact closure are
// tried before the clauses, and all clause resolutions unify rationally.
SolutionStream solve(const Program& program, std::vector<Atom> goal,
                     const EngineConfig& config, VarGen& gen, TraceSink sink = {});

// solve with mode forced to Coinductive.
SolutionStream solve_coinductive(const Program& program, std::vector<Atom> goal,
                                 EngineConfig config, VarGen& gen, TraceSink sink = {});

// Query variables of a goal in first-occurrence order.
std::vector<TermPtr> goal_vars(const std::vector<Atom>& goal);

}  // namespace rowhorn
