#pragma once

#include "seqsat/dataset.hpp"
#include "seqsat/enumerator.hpp"

#include <optional>
#include <vector>

namespace seqsat::oracle {

/// Embedding-side constraints for one query. All values follow the report
/// semantics: positions are counted 1-based, gap = distance between
/// consecutive embedding positions, span = last minus first.
struct EmbeddingConstraints {
    std::optional<int> max_gap;
    const GapTable* dep_gap = nullptr;
    std::optional<int> max_span;
};

/// True iff at least one embedding of `pattern` into `transaction` satisfies
/// every active constraint. Dynamic programming over (pattern position,
/// transaction position), tracking the latest feasible first position.
bool embeds(const std::vector<int>& pattern, const std::vector<int>& transaction,
            const EmbeddingConstraints& constraints = {});

/// 1-based ids of the transactions embedding the pattern.
std::vector<int> cover(const std::vector<int>& pattern, const Dataset& dataset,
                       const EmbeddingConstraints& constraints = {});

/// Brute-force miner: DFS over right-extensions with prefix-frequency
/// pruning, depth-capped at K; the regex constraint is a final filter and
/// closed/maximal are post-filters over the full frequent set. Shares no code
/// with the encoder or the solver.
PatternSet oracle_mine(const Dataset& dataset, const MiningConfig& config,
                       std::size_t node_budget = 50'000'000);

} // namespace seqsat::oracle
