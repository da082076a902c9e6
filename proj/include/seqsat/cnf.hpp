#pragma once

#include "seqsat/dataset.hpp"
#include "seqsat/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace seqsat {

/// Clause database in solver-native literal form.
struct Cnf {
    int var_count = 0;
    std::vector<Clause> clauses;

    void add_clause(Clause clause);
    void append(Cnf&& other);
    std::size_t clause_count() const { return clauses.size(); }
};

/// Which auxiliary pools alloc_vars lays out after the m/c/t blocks.
struct VarLayout {
    bool counter = true;
    bool span = false;
    int automaton_states = 0; // 0 = no automaton pool
};

/// Bijection between semantic variables and dense solver ids.
///
/// Allocation order is fixed: all m (position-major, real characters before
/// epsilon), then all c, then all t (transaction, position, pattern-position),
/// then the counter, span and automaton pools in that order. t(i,j,k) exists
/// iff k <= min(j, K).
class VarMap {
  public:
    VarMap(const Dataset& dataset, int k_bound, const VarLayout& layout);

    int k_bound() const { return k_bound_; }
    int transaction_count() const { return static_cast<int>(lengths_.size()); }
    int transaction_length(int i) const { return lengths_[i - 1]; }
    int vocab_size() const { return static_cast<int>(vocabulary_.size()); }
    const std::vector<std::string>& vocabulary() const { return vocabulary_; }
    int total_vars() const { return total_vars_; }
    const VarLayout& layout() const { return layout_; }

    /// Symbol code for a pattern position: 0..|V|-1 are characters, eps_sym() is epsilon.
    int eps_sym() const { return vocab_size(); }

    Var pattern_var(int k, int sym) const;        // m(k, v), k in 1..K
    Var cover_var(int i) const;                   // c(i), i in 1..|T|
    Var support_var(int i, int j, int k) const;   // t(i,j,k), k <= min(j, K)
    bool has_support_var(int i, int j, int k) const;

    Var card_var(int tau) const;                  // card(tau), tau in 1..|T|
    Var counter_var(int i, int j) const;          // partial-sum cell, j <= i, i < |T|
    Var span_first_var(int i, int j) const;       // f(i,j)
    Var span_used_var(int i, int j) const;        // u(i,j)
    Var state_var(int k, int s) const;            // q(k,s), k in 0..K

    /// Semantic name for the DIMACS sidecar ("m_1_A", "c_3", "t_2_4_1", ...).
    std::string name(Var v) const;

  private:
    int k_bound_;
    std::vector<std::string> vocabulary_;
    std::vector<int> lengths_;
    VarLayout layout_;

    Var m_base_ = 0, c_base_ = 0, t_base_ = 0;
    Var counter_base_ = 0, span_f_base_ = 0, span_u_base_ = 0, state_base_ = 0;
    int total_vars_ = 0;
    std::vector<Var> t_transaction_base_;     // per transaction
    std::vector<std::vector<int>> t_col_off_; // per transaction, per position j (0-based)
    std::vector<int> pos_base_;               // cumulative transaction lengths for f/u pools
};

/// vocab indices + support; the epsilon padding of the SAT representation is
/// already stripped. Witness positions are 1-based like the report formats.
struct Witness {
    int transaction = 0; // 1-based
    std::vector<int> positions;
};

struct Pattern {
    std::vector<int> chars;
    int support = 0;
    std::optional<std::vector<Witness>> witnesses;

    std::string render(const std::vector<std::string>& vocabulary) const;
};

/// Reads the pattern, cover count and (optionally) one embedding per covered
/// transaction out of a total model. Throws IllFormedModel when the m block
/// does not describe a well-formed epsilon-padded pattern.
Pattern decode_pattern(const std::vector<bool>& model, const VarMap& vars,
                       bool want_witnesses = false);

/// Clause forbidding exactly this pattern: negated m literals of its
/// characters plus the epsilon pin at position |S|+1 (omitted when |S| = K).
Clause blocking_clause_exact(const std::vector<int>& chars, const VarMap& vars);

/// One exact blocking clause per distinct nonempty subsequence of `chars`.
/// Throws SubsequenceBlowup when 2^|S| exceeds `cap`.
std::vector<Clause> blocking_clauses_subsequences(const std::vector<int>& chars, const VarMap& vars,
                                                  std::size_t cap = std::size_t{1} << 20);

void export_dimacs(const Cnf& cnf, std::ostream& out);
void export_varmap(const VarMap& vars, std::ostream& out);
Cnf parse_dimacs(std::istream& in);

} // namespace seqsat
