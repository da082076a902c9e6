#pragma once

#include "seqsat/cnf.hpp"
#include "seqsat/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace seqsat {

/// Incremental CDCL solver with assumption-based solving.
///
/// Two-watched-literal propagation, VSIDS branching, first-UIP learning with
/// basic minimization, phase saving, Luby restarts and activity-driven learnt
/// reduction. Learnt clauses are consequences of the problem clauses alone;
/// assumptions enter a solve only as forced first decisions, so they persist
/// across calls. Fully deterministic: same inputs, same model sequence.
class Solver {
  public:
    enum class Result { Sat, Unsat };

    Solver();

    Var new_var();
    void ensure_vars(int count);
    int num_vars() const { return static_cast<int>(assigns_.size()); }

    /// Returns false when the clause makes the solver permanently unsatisfiable
    /// (the TrivialConflict state). Must be called between solves.
    bool add_clause(Clause lits);
    void add_cnf(const Cnf& cnf);

    Result solve(std::span<const Lit> assumptions = {});
    Result solve(std::initializer_list<Lit> assumptions) {
        return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
    }

    /// Total assignment; valid after a Sat result.
    const std::vector<bool>& model() const { return model_; }
    /// Subset of the assumptions inconsistent with the clauses; valid after Unsat.
    const std::vector<Lit>& conflict_core() const { return conflict_core_; }
    bool okay() const { return ok_; }

    /// Nonzero seeds perturb the initial branching activities (deterministically).
    void set_seed(std::uint64_t seed);

    /// Initial phase hint; phase saving takes over once the variable is touched.
    void suggest_polarity(Var v, bool prefer_true) { polarity_[v] = prefer_true ? 0 : 1; }

    static bool verify_model(const Cnf& cnf, const std::vector<bool>& model);

    struct Stats {
        std::uint64_t solves = 0, starts = 0, decisions = 0, propagations = 0, conflicts = 0;
        std::uint64_t learnt = 0, removed = 0;
    };
    const Stats& stats() const { return stats_; }

  private:
    enum class Value : std::uint8_t { True, False, Undef };
    using CRef = std::uint32_t;
    static constexpr CRef kCRefUndef = 0xFFFFFFFFU;

    // Clause layout in the arena: [meta][activity][lits...]; meta packs
    // size<<2 | learnt<<1 | dead. Freed space is not compacted.
    CRef alloc_clause(std::span<const Lit> lits, bool learnt);
    std::uint32_t clause_size(CRef c) const { return arena_[c] >> 2; }
    bool clause_learnt(CRef c) const { return arena_[c] & 2; }
    bool clause_dead(CRef c) const { return arena_[c] & 1; }
    void mark_dead(CRef c) { arena_[c] |= 1; }
    float& clause_activity(CRef c) { return reinterpret_cast<float&>(arena_[c + 1]); }
    Lit* clause_lits(CRef c) { return reinterpret_cast<Lit*>(arena_.data() + c + 2); }
    const Lit* clause_lits(CRef c) const {
        return reinterpret_cast<const Lit*>(arena_.data() + c + 2);
    }

    struct Watcher {
        CRef cref;
        Lit blocker;
    };

    Value value(Var v) const { return assigns_[v]; }
    Value value(Lit p) const {
        Value v = assigns_[var(p)];
        if (v == Value::Undef) return Value::Undef;
        return (v == Value::True) != sign(p) ? Value::True : Value::False;
    }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }
    int level(Var v) const { return level_[v]; }
    CRef reason(Var v) const { return reason_[v]; }
    bool locked(CRef c) const;

    void attach_clause(CRef c);
    void detach_clause(CRef c);
    void remove_clause(CRef c);

    void unchecked_enqueue(Lit p, CRef from = kCRefUndef);
    CRef propagate();
    void cancel_until(int target_level);
    void new_decision_level() { trail_lim_.push_back(static_cast<int>(trail_.size())); }

    void analyze(CRef conflict, Clause& out_learnt, int& out_btlevel);
    bool literal_redundant_basic(Lit p) const;
    void analyze_final(Lit p, std::vector<Lit>& out_core);

    Lit pick_branch_lit();
    void bump_var(Var v);
    void decay_var_activity() { var_inc_ /= var_decay_; }
    void bump_clause(CRef c);
    void decay_clause_activity() { cla_inc_ /= cla_decay_; }

    void reduce_db();
    enum class SearchStatus { Sat, Unsat, Restart };
    SearchStatus search(std::int64_t conflict_budget);

    // Indexed max-heap over variable activities; ties break on the lower index.
    struct VarHeap {
        std::vector<Var> heap;
        std::vector<int> position; // var -> heap slot, -1 when absent
        const std::vector<double>* activity = nullptr;

        bool less(Var a, Var b) const {
            return (*activity)[a] > (*activity)[b] || ((*activity)[a] == (*activity)[b] && a < b);
        }
        bool contains(Var v) const { return position[v] >= 0; }
        bool empty() const { return heap.empty(); }
        void grow(int vars) { position.resize(vars, -1); }
        void sift_up(int i);
        void sift_down(int i);
        void insert(Var v);
        void update_up(Var v) {
            if (contains(v)) sift_up(position[v]);
        }
        Var pop();
    };

    // clause database
    std::vector<std::uint32_t> arena_;
    std::vector<CRef> clauses_;
    std::vector<CRef> learnts_;
    std::vector<std::vector<Watcher>> watches_; // indexed by Lit::x

    // assignment
    std::vector<Value> assigns_;
    std::vector<int> level_;
    std::vector<CRef> reason_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;

    // heuristics
    std::vector<double> activity_;
    std::vector<std::uint8_t> polarity_; // saved phase; 1 = branch negative
    VarHeap order_;
    double var_inc_ = 1.0;
    double var_decay_ = 0.95;
    double cla_inc_ = 1.0;
    double cla_decay_ = 0.999;
    int restart_first_ = 100;
    double max_learnts_ = 0.0;

    // per-solve state
    std::vector<Lit> assumptions_;
    std::vector<bool> model_;
    std::vector<Lit> conflict_core_;
    std::vector<std::uint8_t> seen_;
    std::vector<Lit> analyze_toclear_;

    bool ok_ = true;
    std::uint64_t seed_ = 0;
    Stats stats_;
};

} // namespace seqsat
