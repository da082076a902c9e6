#include "seqsat/enumerator.hpp"

#include "seqsat/encoder.hpp"
#include "seqsat/errors.hpp"
#include "seqsat/solver.hpp"

#include <algorithm>
#include <chrono>

namespace seqsat {

namespace {

using Steady = std::chrono::steady_clock;

double ms_since(Steady::time_point start) {
    return std::chrono::duration<double, std::milli>(Steady::now() - start).count();
}

bool is_subsequence(const std::vector<int>& small, const std::vector<int>& big) {
    std::size_t i = 0;
    for (int v : big) {
        if (i < small.size() && small[i] == v) ++i;
        if (i == small.size()) return true;
    }
    return i == small.size();
}

bool is_strict_supersequence(const std::vector<int>& big, const std::vector<int>& small) {
    return big.size() > small.size() && is_subsequence(small, big);
}

/// One mining run: the assembled instance, the solver and the timers.
class Run {
  public:
    Run(const Dataset& dataset, const MiningConfig& config)
        : dataset_(dataset), config_(config), problem_([&] {
              const auto start = Steady::now();
              Problem p = assemble(dataset, config);
              encode_ms_ = ms_since(start);
              return p;
          }()) {
        solver_.set_seed(config.seed);
        solver_.add_cnf(problem_.cnf);
        // branching towards covered transactions makes the first model of a
        // pattern carry a near-maximal cover, which keeps the support probes short
        for (int i = 1; i <= dataset.transaction_count(); ++i)
            solver_.suggest_polarity(problem_.vars.cover_var(i), true);
    }

    const VarMap& vars() const { return problem_.vars; }
    int k_bound() const { return problem_.k_bound; }
    int transaction_count() const { return dataset_.transaction_count(); }

    Solver::Result solve(const std::vector<Lit>& assumptions) {
        const auto start = Steady::now();
        const auto result = solver_.solve(assumptions);
        solve_ms_ += ms_since(start);
        return result;
    }

    const std::vector<bool>& model() const { return solver_.model(); }

    void block(Clause clause) { solver_.add_clause(std::move(clause)); }

    /// Assumption literals pinning the full epsilon-padded form of `chars`.
    std::vector<Lit> pattern_assumptions(const std::vector<int>& chars) const {
        std::vector<Lit> lits;
        for (std::size_t k = 0; k < chars.size(); ++k)
            lits.push_back(pos(vars().pattern_var(static_cast<int>(k) + 1, chars[k])));
        if (static_cast<int>(chars.size()) < k_bound())
            lits.push_back(pos(vars().pattern_var(static_cast<int>(chars.size()) + 1, vars().eps_sym())));
        return lits;
    }

    /// Maximizes the number of true cover literals for a fixed pattern by
    /// binary search over card(tau) assumptions. Returns the cover and leaves
    /// the maximizing model in `best`.
    std::vector<int> maximize_cover(const std::vector<int>& chars, std::vector<bool>& best) {
        const auto base = pattern_assumptions(chars);
        const int n = transaction_count();
        int achieved = count_true_cover(best);
        int hi = n;
        // cheap first probe: with the cover-polarity hint the initial model is
        // usually already maximal, so one UNSAT answer settles it
        if (achieved < hi) {
            std::vector<Lit> assumptions = base;
            assumptions.push_back(pos(vars().card_var(achieved + 1)));
            if (solve(assumptions) == Solver::Result::Sat) {
                best = model();
                achieved = count_true_cover(best);
            } else {
                hi = achieved;
            }
        }
        while (achieved < hi) {
            const int mid = achieved + (hi - achieved + 1) / 2;
            std::vector<Lit> assumptions = base;
            assumptions.push_back(pos(vars().card_var(mid)));
            if (solve(assumptions) == Solver::Result::Sat) {
                best = model();
                achieved = count_true_cover(best);
            } else {
                hi = mid - 1;
            }
        }
        std::vector<int> cover;
        for (int i = 1; i <= n; ++i)
            if (best[vars().cover_var(i)]) cover.push_back(i);
        return cover;
    }

    int count_true_cover(const std::vector<bool>& model) const {
        int count = 0;
        for (int i = 1; i <= transaction_count(); ++i)
            if (model[vars().cover_var(i)]) ++count;
        return count;
    }

    void add_subsequence_blocks(const std::vector<int>& chars) {
        std::vector<Clause> blocks;
        try {
            blocks = blocking_clauses_subsequences(chars, vars(), config_.subsequence_cap);
        } catch (const Error& e) {
            if (e.code() == Errc::SubsequenceBlowup) {
                Pattern p;
                p.chars = chars;
                raise(Errc::SubsequenceBlowup,
                      std::string(e.what()) + " (pattern: " + p.render(dataset_.vocabulary) + ")");
            }
            throw;
        }
        for (auto& clause : blocks) block(std::move(clause));
    }

    PatternSet finish(std::vector<Pattern> patterns, Mode mode, Steady::time_point start) {
        PatternSet out;
        out.patterns = std::move(patterns);
        out.mode = mode;
        out.config = config_;
        out.k_bound = k_bound();
        out.counters.solver_calls = solver_.stats().solves;
        out.counters.conflicts = solver_.stats().conflicts;
        out.counters.propagations = solver_.stats().propagations;
        out.counters.encode_ms = encode_ms_;
        out.counters.solve_ms = solve_ms_;
        out.counters.total_ms = ms_since(start);
        return out;
    }

  private:
    const Dataset& dataset_;
    MiningConfig config_;
    Problem problem_;
    Solver solver_;
    double encode_ms_ = 0.0;
    double solve_ms_ = 0.0;
};

struct MinedEntry {
    Pattern pattern;
    std::vector<int> cover;
};

/// Algorithm: solve, decode, block the exact pattern, repeat until UNSAT.
std::vector<MinedEntry> run_all(Run& run, const MiningConfig& config) {
    std::vector<MinedEntry> found;
    while (run.solve({}) == Solver::Result::Sat) {
        std::vector<bool> best = run.model();
        Pattern p = decode_pattern(best, run.vars(), false);
        MinedEntry entry;
        entry.cover = run.maximize_cover(p.chars, best);
        Pattern full = decode_pattern(best, run.vars(), config.want_witnesses);
        full.support = static_cast<int>(entry.cover.size());
        entry.pattern = std::move(full);
        run.block(blocking_clause_exact(entry.pattern.chars, run.vars()));
        found.push_back(std::move(entry));
    }
    return found;
}

/// Nested assumption stacks: the outer stack holds the cover floor at sigma
/// via card literals, the inner stack holds the length floor via negated
/// epsilon literals; every found pattern blocks all of its subsequences.
std::vector<Pattern> run_closed_base(Run& run, const MiningConfig& config) {
    const int n = run.transaction_count();
    const int K = run.k_bound();
    std::vector<Pattern> found;
    for (int floor = n; floor >= config.minsup; --floor) {
        std::vector<Lit> outer;
        for (int tau = config.minsup + 1; tau <= floor; ++tau)
            outer.push_back(pos(run.vars().card_var(tau)));
        for (int len = K; len >= 1; --len) {
            std::vector<Lit> assumptions = outer;
            for (int k = 1; k <= len; ++k)
                assumptions.push_back(neg(run.vars().pattern_var(k, run.vars().eps_sym())));
            while (run.solve(assumptions) == Solver::Result::Sat) {
                Pattern p = decode_pattern(run.model(), run.vars(), config.want_witnesses);
                // a pattern first reachable at this floor has cover exactly = floor
                p.support = floor;
                run.add_subsequence_blocks(p.chars);
                found.push_back(std::move(p));
            }
        }
    }
    return found;
}

/// The maximal variant: outer stack removed, only the length floor relaxes.
std::vector<Pattern> run_maximal_base(Run& run, const MiningConfig& config) {
    const int K = run.k_bound();
    std::vector<Pattern> found;
    for (int len = K; len >= 1; --len) {
        std::vector<Lit> assumptions;
        for (int k = 1; k <= len; ++k)
            assumptions.push_back(neg(run.vars().pattern_var(k, run.vars().eps_sym())));
        while (run.solve(assumptions) == Solver::Result::Sat) {
            std::vector<bool> best = run.model();
            Pattern p = decode_pattern(best, run.vars(), false);
            const auto cover = run.maximize_cover(p.chars, best);
            Pattern full = decode_pattern(best, run.vars(), config.want_witnesses);
            full.support = static_cast<int>(cover.size());
            run.add_subsequence_blocks(full.chars);
            found.push_back(std::move(full));
        }
    }
    return found;
}

std::vector<Pattern> post_filter(std::vector<MinedEntry> entries, Mode mode) {
    std::vector<bool> keep(entries.size(), true);
    for (std::size_t a = 0; a < entries.size(); ++a)
        for (std::size_t b = 0; b < entries.size(); ++b) {
            if (a == b) continue;
            if (!is_strict_supersequence(entries[b].pattern.chars, entries[a].pattern.chars)) continue;
            if (mode == Mode::Maximal || entries[b].cover == entries[a].cover) {
                keep[a] = false;
                break;
            }
        }
    std::vector<Pattern> kept;
    for (std::size_t a = 0; a < entries.size(); ++a)
        if (keep[a]) kept.push_back(std::move(entries[a].pattern));
    return kept;
}

} // namespace

const Pattern* PatternSet::find(const std::vector<int>& chars) const {
    for (const auto& p : patterns)
        if (p.chars == chars) return &p;
    return nullptr;
}

PatternSet mine(const Dataset& dataset, const MiningConfig& config) {
    const auto start = Steady::now();
    Run run(dataset, config);

    std::vector<Pattern> patterns;
    if (config.mode == Mode::All) {
        auto entries = run_all(run, config);
        patterns.reserve(entries.size());
        for (auto& entry : entries) patterns.push_back(std::move(entry.pattern));
    } else if (!config.has_constraints()) {
        patterns = config.mode == Mode::Closed ? run_closed_base(run, config)
                                               : run_maximal_base(run, config);
    } else {
        patterns = post_filter(run_all(run, config), config.mode);
    }
    return run.finish(std::move(patterns), config.mode, start);
}

} // namespace seqsat
