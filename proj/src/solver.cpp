#include "seqsat/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace seqsat {

namespace {

// Finite-subsequence index used by Luby-style restart scheduling.
double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

void Solver::VarHeap::sift_up(int i) {
    Var v = heap[i];
    while (i > 0) {
        int parent = (i - 1) >> 1;
        if (!less(v, heap[parent])) break;
        heap[i] = heap[parent];
        position[heap[i]] = i;
        i = parent;
    }
    heap[i] = v;
    position[v] = i;
}

void Solver::VarHeap::sift_down(int i) {
    Var v = heap[i];
    const int n = static_cast<int>(heap.size());
    for (;;) {
        int child = 2 * i + 1;
        if (child >= n) break;
        if (child + 1 < n && less(heap[child + 1], heap[child])) ++child;
        if (!less(heap[child], v)) break;
        heap[i] = heap[child];
        position[heap[i]] = i;
        i = child;
    }
    heap[i] = v;
    position[v] = i;
}

void Solver::VarHeap::insert(Var v) {
    if (contains(v)) return;
    position[v] = static_cast<int>(heap.size());
    heap.push_back(v);
    sift_up(position[v]);
}

Var Solver::VarHeap::pop() {
    Var top = heap[0];
    heap[0] = heap.back();
    position[heap[0]] = 0;
    heap.pop_back();
    position[top] = -1;
    if (!heap.empty()) sift_down(0);
    return top;
}

Solver::Solver() { order_.activity = &activity_; }

Var Solver::new_var() {
    const Var v = num_vars();
    assigns_.push_back(Value::Undef);
    level_.push_back(0);
    reason_.push_back(kCRefUndef);
    activity_.push_back(seed_ == 0 ? 0.0
                                   : static_cast<double>(splitmix64(seed_ ^ (0xA5A5ULL * (v + 1)))) /
                                         static_cast<double>(UINT64_MAX) * 1e-6);
    polarity_.push_back(1);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    order_.grow(v + 1);
    order_.insert(v);
    return v;
}

void Solver::ensure_vars(int count) {
    while (num_vars() < count) new_var();
}

void Solver::set_seed(std::uint64_t seed) {
    seed_ = seed;
    for (Var v = 0; v < num_vars(); ++v) {
        activity_[v] = seed_ == 0 ? 0.0
                                  : static_cast<double>(splitmix64(seed_ ^ (0xA5A5ULL * (v + 1)))) /
                                        static_cast<double>(UINT64_MAX) * 1e-6;
        order_.update_up(v);
    }
}

Solver::CRef Solver::alloc_clause(std::span<const Lit> lits, bool learnt) {
    const CRef c = static_cast<CRef>(arena_.size());
    arena_.push_back(static_cast<std::uint32_t>(lits.size()) << 2 | (learnt ? 2U : 0U));
    arena_.push_back(0);
    clause_activity(c) = 0.0f;
    for (Lit p : lits) arena_.push_back(static_cast<std::uint32_t>(p.x));
    return c;
}

bool Solver::locked(CRef c) const {
    const Lit first = clause_lits(c)[0];
    return value(first) == Value::True && reason(var(first)) == c;
}

void Solver::attach_clause(CRef c) {
    const Lit* lits = clause_lits(c);
    assert(clause_size(c) >= 2);
    watches_[(~lits[0]).x].push_back({c, lits[1]});
    watches_[(~lits[1]).x].push_back({c, lits[0]});
}

void Solver::detach_clause(CRef c) {
    const Lit* lits = clause_lits(c);
    for (int w = 0; w < 2; ++w) {
        auto& list = watches_[(~lits[w]).x];
        auto it = std::find_if(list.begin(), list.end(),
                               [c](const Watcher& watcher) { return watcher.cref == c; });
        assert(it != list.end());
        *it = list.back();
        list.pop_back();
    }
}

void Solver::remove_clause(CRef c) {
    detach_clause(c);
    if (locked(c)) reason_[var(clause_lits(c)[0])] = kCRefUndef;
    mark_dead(c);
    ++stats_.removed;
}

bool Solver::add_clause(Clause lits) {
    assert(decision_level() == 0);
    if (!ok_) return false;

    std::sort(lits.begin(), lits.end());
    Lit prev = lit_undef();
    std::size_t out = 0;
    for (Lit p : lits) {
        if (value(p) == Value::True || p == ~prev) return true; // satisfied or tautology
        if (value(p) != Value::False && p != prev) {
            prev = p;
            lits[out++] = p;
        }
    }
    lits.resize(out);

    if (lits.empty()) {
        ok_ = false;
        return false;
    }
    if (lits.size() == 1) {
        unchecked_enqueue(lits[0]);
        ok_ = propagate() == kCRefUndef;
        return ok_;
    }
    const CRef c = alloc_clause(lits, false);
    clauses_.push_back(c);
    attach_clause(c);
    return true;
}

void Solver::add_cnf(const Cnf& cnf) {
    ensure_vars(cnf.var_count);
    for (const auto& clause : cnf.clauses) add_clause(clause);
}

void Solver::unchecked_enqueue(Lit p, CRef from) {
    assert(value(p) == Value::Undef);
    assigns_[var(p)] = sign(p) ? Value::False : Value::True;
    level_[var(p)] = decision_level();
    reason_[var(p)] = from;
    trail_.push_back(p);
}

Solver::CRef Solver::propagate() {
    CRef conflict = kCRefUndef;
    while (qhead_ < trail_.size()) {
        const Lit p = trail_[qhead_++];
        ++stats_.propagations;
        auto& ws = watches_[p.x];
        std::size_t i = 0, j = 0;
        const std::size_t end = ws.size();
        while (i < end) {
            const Watcher w = ws[i];
            if (value(w.blocker) == Value::True) {
                ws[j++] = ws[i++];
                continue;
            }
            const CRef c = w.cref;
            Lit* lits = clause_lits(c);
            const Lit false_lit = ~p;
            if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
            assert(lits[1] == false_lit);
            ++i;

            const Lit first = lits[0];
            if (first != w.blocker && value(first) == Value::True) {
                ws[j++] = {c, first};
                continue;
            }
            const std::uint32_t size = clause_size(c);
            bool moved = false;
            for (std::uint32_t k = 2; k < size; ++k) {
                if (value(lits[k]) != Value::False) {
                    lits[1] = lits[k];
                    lits[k] = false_lit;
                    watches_[(~lits[1]).x].push_back({c, first});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;

            ws[j++] = {c, first};
            if (value(first) == Value::False) {
                conflict = c;
                qhead_ = trail_.size();
                while (i < end) ws[j++] = ws[i++];
            } else {
                unchecked_enqueue(first, c);
            }
        }
        ws.resize(j);
        if (conflict != kCRefUndef) break;
    }
    return conflict;
}

void Solver::cancel_until(int target_level) {
    if (decision_level() <= target_level) return;
    const int bound = trail_lim_[target_level];
    for (int c = static_cast<int>(trail_.size()) - 1; c >= bound; --c) {
        const Var x = var(trail_[c]);
        polarity_[x] = sign(trail_[c]);
        assigns_[x] = Value::Undef;
        order_.insert(x);
    }
    qhead_ = static_cast<std::size_t>(bound);
    trail_.resize(bound);
    trail_lim_.resize(target_level);
}

void Solver::bump_var(Var v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (double& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    order_.update_up(v);
}

void Solver::bump_clause(CRef c) {
    float& act = clause_activity(c);
    act += static_cast<float>(cla_inc_);
    if (act > 1e20f) {
        for (CRef learnt : learnts_)
            if (!clause_dead(learnt)) clause_activity(learnt) *= 1e-20f;
        cla_inc_ *= 1e-20;
    }
}

// First-UIP conflict analysis with basic self-subsumption minimization.
void Solver::analyze(CRef conflict, Clause& out_learnt, int& out_btlevel) {
    out_learnt.clear();
    out_learnt.push_back(lit_undef()); // slot for the asserting literal

    int path_count = 0;
    Lit p = lit_undef();
    int index = static_cast<int>(trail_.size()) - 1;

    do {
        assert(conflict != kCRefUndef);
        if (clause_learnt(conflict)) bump_clause(conflict);
        const Lit* lits = clause_lits(conflict);
        const std::uint32_t size = clause_size(conflict);
        for (std::uint32_t j = (p == lit_undef()) ? 0 : 1; j < size; ++j) {
            const Lit q = lits[j];
            if (!seen_[var(q)] && level(var(q)) > 0) {
                bump_var(var(q));
                seen_[var(q)] = 1;
                if (level(var(q)) >= decision_level())
                    ++path_count;
                else
                    out_learnt.push_back(q);
            }
        }
        while (!seen_[var(trail_[index--])]) {}
        p = trail_[index + 1];
        conflict = reason(var(p));
        seen_[var(p)] = 0;
        --path_count;
    } while (path_count > 0);
    out_learnt[0] = ~p;

    analyze_toclear_.assign(out_learnt.begin(), out_learnt.end());
    std::size_t kept = 1;
    for (std::size_t i = 1; i < out_learnt.size(); ++i) {
        const Lit q = out_learnt[i];
        if (reason(var(q)) == kCRefUndef || !literal_redundant_basic(q)) out_learnt[kept++] = q;
    }
    out_learnt.resize(kept);

    if (out_learnt.size() == 1) {
        out_btlevel = 0;
    } else {
        std::size_t max_i = 1;
        for (std::size_t i = 2; i < out_learnt.size(); ++i)
            if (level(var(out_learnt[i])) > level(var(out_learnt[max_i]))) max_i = i;
        std::swap(out_learnt[1], out_learnt[max_i]);
        out_btlevel = level(var(out_learnt[1]));
    }

    for (Lit q : analyze_toclear_) seen_[var(q)] = 0;
}

bool Solver::literal_redundant_basic(Lit p) const {
    const CRef c = reason(var(p));
    assert(c != kCRefUndef);
    const Lit* lits = clause_lits(c);
    const std::uint32_t size = clause_size(c);
    for (std::uint32_t k = 1; k < size; ++k)
        if (!seen_[var(lits[k])] && level(var(lits[k])) > 0) return false;
    return true;
}

// Collects the assumption literals responsible for forcing ~p.
void Solver::analyze_final(Lit p, std::vector<Lit>& out_core) {
    out_core.clear();
    out_core.push_back(~p);
    if (decision_level() == 0) return;

    seen_[var(p)] = 1;
    for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[0]; --i) {
        const Var x = var(trail_[i]);
        if (!seen_[x]) continue;
        if (reason(x) == kCRefUndef) {
            assert(level(x) > 0);
            out_core.push_back(trail_[i]); // an assumption decision
        } else {
            const Lit* lits = clause_lits(reason(x));
            const std::uint32_t size = clause_size(reason(x));
            for (std::uint32_t j = 1; j < size; ++j)
                if (level(var(lits[j])) > 0) seen_[var(lits[j])] = 1;
        }
        seen_[x] = 0;
    }
    seen_[var(p)] = 0;
}

Lit Solver::pick_branch_lit() {
    while (!order_.empty()) {
        const Var v = order_.pop();
        if (value(v) == Value::Undef) return mkLit(v, polarity_[v] != 0);
    }
    return lit_undef();
}

void Solver::reduce_db() {
    std::vector<CRef> live;
    live.reserve(learnts_.size());
    for (CRef c : learnts_)
        if (!clause_dead(c)) live.push_back(c);
    std::sort(live.begin(), live.end(), [this](CRef a, CRef b) {
        const bool bin_a = clause_size(a) == 2, bin_b = clause_size(b) == 2;
        if (bin_a != bin_b) return bin_b; // non-binary first (removal candidates)
        if (clause_activity(a) != clause_activity(b))
            return clause_activity(a) < clause_activity(b);
        return a < b;
    });
    const double extra = cla_inc_ / std::max<std::size_t>(live.size(), 1);
    for (std::size_t i = 0; i < live.size(); ++i) {
        CRef c = live[i];
        if (clause_size(c) > 2 && !locked(c) &&
            (i < live.size() / 2 || clause_activity(c) < extra))
            remove_clause(c);
    }
    learnts_.erase(std::remove_if(learnts_.begin(), learnts_.end(),
                                  [this](CRef c) { return clause_dead(c); }),
                   learnts_.end());
}

Solver::SearchStatus Solver::search(std::int64_t conflict_budget) {
    assert(ok_);
    std::int64_t conflicts_here = 0;
    Clause learnt;
    ++stats_.starts;

    for (;;) {
        const CRef conflict = propagate();
        if (conflict != kCRefUndef) {
            ++stats_.conflicts;
            ++conflicts_here;
            if (decision_level() == 0) {
                ok_ = false;
                return SearchStatus::Unsat;
            }
            int backtrack_level = 0;
            analyze(conflict, learnt, backtrack_level);
            cancel_until(backtrack_level);
            if (learnt.size() == 1) {
                unchecked_enqueue(learnt[0]);
            } else {
                const CRef c = alloc_clause(learnt, true);
                learnts_.push_back(c);
                attach_clause(c);
                bump_clause(c);
                unchecked_enqueue(learnt[0], c);
            }
            ++stats_.learnt;
            decay_var_activity();
            decay_clause_activity();
            continue;
        }

        if (conflict_budget >= 0 && conflicts_here >= conflict_budget) {
            cancel_until(0);
            return SearchStatus::Restart;
        }
        if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >=
            max_learnts_) {
            reduce_db();
            max_learnts_ *= 1.1;
        }

        Lit next = lit_undef();
        while (decision_level() < static_cast<int>(assumptions_.size())) {
            const Lit p = assumptions_[decision_level()];
            if (value(p) == Value::True) {
                new_decision_level(); // dummy level keeps stack aligned with assumptions
            } else if (value(p) == Value::False) {
                analyze_final(~p, conflict_core_);
                return SearchStatus::Unsat;
            } else {
                next = p;
                break;
            }
        }
        if (next == lit_undef()) {
            next = pick_branch_lit();
            if (next == lit_undef()) return SearchStatus::Sat; // all variables assigned
            ++stats_.decisions;
        }
        new_decision_level();
        unchecked_enqueue(next);
    }
}

Solver::Result Solver::solve(std::span<const Lit> assumptions) {
    model_.clear();
    conflict_core_.clear();
    ++stats_.solves;
    if (!ok_) return Result::Unsat;

    assumptions_.assign(assumptions.begin(), assumptions.end());
    max_learnts_ = std::max(2000.0, static_cast<double>(clauses_.size()) / 3.0);

    SearchStatus status = SearchStatus::Restart;
    int restarts = 0;
    while (status == SearchStatus::Restart)
        status = search(static_cast<std::int64_t>(luby(2.0, restarts++)) * restart_first_);

    if (status == SearchStatus::Sat) {
        model_.resize(num_vars());
        for (Var v = 0; v < num_vars(); ++v) {
            assert(value(v) != Value::Undef);
            model_[v] = value(v) == Value::True;
        }
    }
    cancel_until(0);
    return status == SearchStatus::Sat ? Result::Sat : Result::Unsat;
}

bool Solver::verify_model(const Cnf& cnf, const std::vector<bool>& model) {
    for (const auto& clause : cnf.clauses) {
        bool satisfied = false;
        for (Lit p : clause) {
            if (var(p) >= static_cast<Var>(model.size())) return false;
            if (model[var(p)] != sign(p)) {
                satisfied = true;
                break;
            }
        }
        if (!satisfied) return false;
    }
    return true;
}

} // namespace seqsat
