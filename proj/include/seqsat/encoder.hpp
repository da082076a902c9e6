#pragma once

#include "seqsat/cnf.hpp"
#include "seqsat/dataset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace seqsat {

/// Deterministic complete automaton over the dataset vocabulary.
struct Dfa {
    int states = 0;
    int start = 0;
    int alphabet = 0;
    std::vector<bool> accepting;
    std::vector<int> delta; // states x alphabet, row-major

    int next(int s, int v) const { return delta[static_cast<std::size_t>(s) * alphabet + v]; }
    bool accepts(const std::vector<int>& word) const;
};

/// Token-level regular expressions: vocabulary literals, "." (any character),
/// "*" / "⋆" (any sequence), "|", and "( )" grouping, whitespace-separated.
Dfa compile_regex(const std::string& pattern, const std::vector<std::string>& vocabulary);

/// Well-formedness, symmetry, support compatibility, coverage and (optionally)
/// order-preservation clauses. `order_clauses` is dropped by the pipeline when
/// a gap constraint supplies the strengthened predecessor windows instead.
Cnf encode_base(const Dataset& dataset, int k_bound, const VarMap& vars, bool order_clauses = true);

/// Sequential-counter ladder over `cover_lits` exposing card(tau) for every
/// tau in 1..n (card true forces at least tau inputs true; card(tau+1) entails
/// card(tau)). Asserts card(minsup) as a unit clause.
Cnf encode_cardinality(const std::vector<Lit>& cover_lits, int minsup, const VarMap& vars);

/// Predecessor windows truncated to the last `gamma` positions (replaces the
/// base order-preservation clauses).
Cnf encode_max_gap(const Dataset& dataset, int k_bound, int gamma, const VarMap& vars);

/// Per-(position, preceding character) windows; `table` must be total.
Cnf encode_dep_gap(const Dataset& dataset, int k_bound, const GapTable& table, const VarMap& vars);

/// First-support / used-window variables enforcing last - first <= gamma for
/// the chosen embedding of every covered transaction.
Cnf encode_max_span(const Dataset& dataset, int k_bound, int gamma, const VarMap& vars);

/// Unrolled-automaton encoding: one state layer per pattern position, epsilon
/// freezes the state, final layer restricted to accepting states.
Cnf encode_regular(const Dfa& dfa, int k_bound, const VarMap& vars);

/// Fully assembled mining instance for one (dataset, config) pair.
struct Problem {
    int k_bound;
    VarMap vars;
    Cnf cnf;
    std::optional<Dfa> dfa;
};

Problem assemble(const Dataset& dataset, const MiningConfig& config);

} // namespace seqsat
