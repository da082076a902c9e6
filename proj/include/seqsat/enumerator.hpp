#pragma once

#include "seqsat/cnf.hpp"
#include "seqsat/dataset.hpp"

#include <cstdint>
#include <vector>

namespace seqsat {

struct MiningCounters {
    std::uint64_t solver_calls = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    double encode_ms = 0.0;
    double solve_ms = 0.0;
    double total_ms = 0.0;
};

/// Patterns in emission order plus the run's configuration and counters.
struct PatternSet {
    std::vector<Pattern> patterns;
    Mode mode = Mode::All;
    MiningConfig config;
    int k_bound = 0;
    MiningCounters counters;

    const Pattern* find(const std::vector<int>& chars) const;
    bool contains(const std::vector<int>& chars) const { return find(chars) != nullptr; }
};

/// SAT-based mining, dispatching on config.mode. Enumerates models with
/// blocking clauses (all), or with the nested card/length assumption stacks
/// (closed, maximal); under gap/span/regex constraints the closed and maximal
/// sets are derived from the full run by a set-theoretic post-filter.
PatternSet mine(const Dataset& dataset, const MiningConfig& config);

} // namespace seqsat
