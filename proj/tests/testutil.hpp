#pragma once

#include "seqsat/cnf.hpp"
#include "seqsat/dataset.hpp"
#include "seqsat/enumerator.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace seqsat::testutil {

inline Dataset dataset_of(std::initializer_list<const char*> rows, std::string name = "") {
    std::ostringstream text;
    for (const char* row : rows) text << row << '\n';
    return parse_dataset_string(text.str(), DatasetFormat::Tokens, std::move(name));
}

/// Single-letter rows ("ACCBAB") expanded to token lines ("A C C B A B").
inline Dataset dataset_of_strings(std::initializer_list<const char*> rows, std::string name = "") {
    std::ostringstream text;
    for (const char* row : rows) {
        for (const char* c = row; *c; ++c) {
            if (c != row) text << ' ';
            text << *c;
        }
        text << '\n';
    }
    return parse_dataset_string(text.str(), DatasetFormat::Tokens, std::move(name));
}

inline std::vector<int> chars_of(const Dataset& dataset, const std::string& letters) {
    std::vector<int> chars;
    for (char c : letters) {
        const int v = dataset.token_index(std::string(1, c));
        if (v < 0) throw std::runtime_error("test pattern uses unknown token");
        chars.push_back(v);
    }
    return chars;
}

struct RandomDatasetParams {
    int min_transactions = 5, max_transactions = 30;
    int min_vocab = 2, max_vocab = 5;
    int min_length = 1, max_length = 12;
    bool numeric_tokens = false; // "1".."5" instead of "A".."E" (spmf-compatible)
};

inline Dataset random_dataset(std::mt19937_64& rng, const RandomDatasetParams& params = {}) {
    std::uniform_int_distribution<int> n_dist(params.min_transactions, params.max_transactions);
    std::uniform_int_distribution<int> v_dist(params.min_vocab, params.max_vocab);
    std::uniform_int_distribution<int> len_dist(params.min_length, params.max_length);
    const int n = n_dist(rng);
    const int vocab = v_dist(rng);
    std::uniform_int_distribution<int> tok_dist(0, vocab - 1);

    std::ostringstream text;
    for (int i = 0; i < n; ++i) {
        const int len = len_dist(rng);
        for (int j = 0; j < len; ++j) {
            if (j) text << ' ';
            if (params.numeric_tokens)
                text << tok_dist(rng) + 1;
            else
                text << static_cast<char>('A' + tok_dist(rng));
        }
        text << '\n';
    }
    return parse_dataset_string(text.str(), DatasetFormat::Tokens, "random");
}

// ---------------------------------------------------------------------------
// Exhaustive truth-table SAT decider (mask-based, <= 25 vars).

inline std::optional<std::uint32_t> truth_table_solve(const Cnf& cnf) {
    struct Masks {
        std::uint32_t pos, neg;
    };
    std::vector<Masks> clauses;
    clauses.reserve(cnf.clauses.size());
    for (const auto& clause : cnf.clauses) {
        Masks m{0, 0};
        for (Lit p : clause)
            (sign(p) ? m.neg : m.pos) |= (std::uint32_t{1} << var(p));
        clauses.push_back(m);
    }
    const std::uint64_t count = std::uint64_t{1} << cnf.var_count;
    for (std::uint64_t a = 0; a < count; ++a) {
        const auto bits = static_cast<std::uint32_t>(a);
        bool ok = true;
        for (const auto& m : clauses)
            if (!((bits & m.pos) || (~bits & m.neg))) {
                ok = false;
                break;
            }
        if (ok) return bits;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Second-level oracle: exhaustive string enumeration with a recursive
// backtracking embedder, structured differently from the library's DP.

struct DumbConstraints {
    std::optional<int> max_gap;
    const GapTable* dep_gap = nullptr;
    std::optional<int> max_span;
};

inline bool dumb_embeds_from(const std::vector<int>& pattern, const std::vector<int>& transaction,
                             const DumbConstraints& cons, std::size_t k, int last, int first) {
    if (k == pattern.size()) return !cons.max_span || last - first <= *cons.max_span;
    for (int j = last + 1; j < static_cast<int>(transaction.size()); ++j) {
        if (transaction[j] != pattern[k]) continue;
        if (k > 0) {
            int bound = static_cast<int>(transaction.size());
            if (cons.max_gap) bound = *cons.max_gap;
            if (cons.dep_gap)
                bound = std::min(bound, cons.dep_gap->at(static_cast<int>(k), pattern[k - 1]));
            if (j - last > bound) continue;
        }
        if (dumb_embeds_from(pattern, transaction, cons, k + 1, j, k == 0 ? j : first)) return true;
    }
    return false;
}

inline bool dumb_embeds(const std::vector<int>& pattern, const std::vector<int>& transaction,
                        const DumbConstraints& cons = {}) {
    return dumb_embeds_from(pattern, transaction, cons, 0, -1, -1);
}

struct DumbPattern {
    std::vector<int> chars;
    std::vector<int> cover; // 1-based transaction ids
};

/// Every frequent string of length 1..K by odometer enumeration over V^len.
inline std::vector<DumbPattern> dumb_frequent(const Dataset& dataset, int minsup, int k_bound,
                                              const DumbConstraints& cons = {}) {
    std::vector<DumbPattern> found;
    for (int len = 1; len <= k_bound; ++len) {
        std::vector<int> word(len, 0);
        for (;;) {
            DumbPattern entry;
            entry.chars = word;
            for (int i = 1; i <= dataset.transaction_count(); ++i)
                if (dumb_embeds(word, dataset.transactions[i - 1], cons)) entry.cover.push_back(i);
            if (static_cast<int>(entry.cover.size()) >= minsup) found.push_back(std::move(entry));
            int pos = len - 1;
            while (pos >= 0 && word[pos] == dataset.vocab_size() - 1) word[pos--] = 0;
            if (pos < 0) break;
            ++word[pos];
        }
    }
    return found;
}

inline bool dumb_subseq(const std::vector<int>& small, const std::vector<int>& big) {
    std::size_t i = 0;
    for (int v : big)
        if (i < small.size() && small[i] == v) ++i;
    return i == small.size();
}

inline std::vector<DumbPattern> dumb_mode_filter(std::vector<DumbPattern> found, Mode mode) {
    if (mode == Mode::All) return found;
    std::vector<DumbPattern> kept;
    for (const auto& a : found) {
        bool dominated = false;
        for (const auto& b : found) {
            if (b.chars.size() <= a.chars.size() || !dumb_subseq(a.chars, b.chars)) continue;
            if (mode == Mode::Maximal || a.cover == b.cover) {
                dominated = true;
                break;
            }
        }
        if (!dominated) kept.push_back(a);
    }
    return kept;
}

// ---------------------------------------------------------------------------
// Assumption literals pinning a full epsilon-padded pattern.

inline std::vector<Lit> pattern_assumptions(const VarMap& vars, const std::vector<int>& chars) {
    std::vector<Lit> lits;
    for (std::size_t k = 0; k < chars.size(); ++k)
        lits.push_back(pos(vars.pattern_var(static_cast<int>(k) + 1, chars[k])));
    if (static_cast<int>(chars.size()) < vars.k_bound())
        lits.push_back(pos(vars.pattern_var(static_cast<int>(chars.size()) + 1, vars.eps_sym())));
    return lits;
}

// ---------------------------------------------------------------------------
// Canonical (pattern, support) key sets for diffing miners.

using PatternKey = std::pair<std::vector<int>, int>;

inline std::set<PatternKey> keys(const PatternSet& result) {
    std::set<PatternKey> out;
    for (const auto& p : result.patterns) out.insert({p.chars, p.support});
    return out;
}

inline std::set<PatternKey> keys(const std::vector<DumbPattern>& found) {
    std::set<PatternKey> out;
    for (const auto& p : found) out.insert({p.chars, static_cast<int>(p.cover.size())});
    return out;
}

} // namespace seqsat::testutil
