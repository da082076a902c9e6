#include "seqsat/cnf.hpp"

#include "seqsat/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cassert>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace seqsat {

void Cnf::add_clause(Clause clause) {
    assert(!clause.empty());
    for ([[maybe_unused]] Lit p : clause) assert(var(p) >= 0 && var(p) < var_count);
    clauses.push_back(std::move(clause));
}

void Cnf::append(Cnf&& other) {
    var_count = std::max(var_count, other.var_count);
    clauses.reserve(clauses.size() + other.clauses.size());
    for (auto& clause : other.clauses) clauses.push_back(std::move(clause));
    other.clauses.clear();
}

VarMap::VarMap(const Dataset& dataset, int k_bound, const VarLayout& layout)
    : k_bound_(k_bound), vocabulary_(dataset.vocabulary), layout_(layout) {
    if (k_bound_ < 1) raise(Errc::MinsupOutOfRange, "pattern bound K must be >= 1");
    lengths_.reserve(dataset.transactions.size());
    for (const auto& t : dataset.transactions) lengths_.push_back(static_cast<int>(t.size()));

    const std::int64_t n = static_cast<std::int64_t>(lengths_.size());
    const std::int64_t symbols = vocab_size() + 1;

    std::int64_t next = 0;
    m_base_ = static_cast<Var>(next);
    next += static_cast<std::int64_t>(k_bound_) * symbols;
    c_base_ = static_cast<Var>(next);
    next += n;

    t_base_ = static_cast<Var>(next);
    t_transaction_base_.reserve(lengths_.size());
    t_col_off_.reserve(lengths_.size());
    for (int len : lengths_) {
        t_transaction_base_.push_back(static_cast<Var>(next));
        std::vector<int> cols(len);
        int off = 0;
        for (int j = 1; j <= len; ++j) {
            cols[j - 1] = off;
            off += std::min(j, k_bound_);
        }
        t_col_off_.push_back(std::move(cols));
        next += off;
    }

    if (layout_.counter) {
        counter_base_ = static_cast<Var>(next);
        next += n * (n + 1) / 2;
    }
    if (layout_.span) {
        std::int64_t total_positions = 0;
        pos_base_.reserve(lengths_.size());
        for (int len : lengths_) {
            pos_base_.push_back(static_cast<int>(total_positions));
            total_positions += len;
        }
        span_f_base_ = static_cast<Var>(next);
        next += total_positions;
        span_u_base_ = static_cast<Var>(next);
        next += total_positions;
    }
    if (layout_.automaton_states > 0) {
        state_base_ = static_cast<Var>(next);
        next += static_cast<std::int64_t>(k_bound_ + 1) * layout_.automaton_states;
    }

    if (next > std::numeric_limits<Var>::max() / 2)
        raise(Errc::Overflow, "variable count " + std::to_string(next) + " exceeds the id space");
    total_vars_ = static_cast<int>(next);
}

Var VarMap::pattern_var(int k, int sym) const {
    assert(k >= 1 && k <= k_bound_ && sym >= 0 && sym <= vocab_size());
    return m_base_ + static_cast<Var>((k - 1) * (vocab_size() + 1) + sym);
}

Var VarMap::cover_var(int i) const {
    assert(i >= 1 && i <= transaction_count());
    return c_base_ + (i - 1);
}

bool VarMap::has_support_var(int i, int j, int k) const {
    return i >= 1 && i <= transaction_count() && j >= 1 && j <= lengths_[i - 1] && k >= 1 &&
           k <= std::min(j, k_bound_);
}

Var VarMap::support_var(int i, int j, int k) const {
    assert(has_support_var(i, j, k));
    return t_transaction_base_[i - 1] + t_col_off_[i - 1][j - 1] + (k - 1);
}

Var VarMap::card_var(int tau) const {
    const int n = transaction_count();
    assert(layout_.counter && tau >= 1 && tau <= n);
    return counter_var(n, tau);
}

Var VarMap::counter_var(int i, int j) const {
    assert(layout_.counter && i >= 1 && i <= transaction_count() && j >= 1 && j <= i);
    return counter_base_ + static_cast<Var>(static_cast<std::int64_t>(i - 1) * i / 2 + (j - 1));
}

Var VarMap::span_first_var(int i, int j) const {
    assert(layout_.span && i >= 1 && i <= transaction_count() && j >= 1 && j <= lengths_[i - 1]);
    return span_f_base_ + pos_base_[i - 1] + (j - 1);
}

Var VarMap::span_used_var(int i, int j) const {
    assert(layout_.span && i >= 1 && i <= transaction_count() && j >= 1 && j <= lengths_[i - 1]);
    return span_u_base_ + pos_base_[i - 1] + (j - 1);
}

Var VarMap::state_var(int k, int s) const {
    assert(layout_.automaton_states > 0 && k >= 0 && k <= k_bound_ && s >= 0 &&
           s < layout_.automaton_states);
    return state_base_ + static_cast<Var>(k) * layout_.automaton_states + s;
}

std::string VarMap::name(Var v) const {
    assert(v >= 0 && v < total_vars_);
    const int n = transaction_count();
    const std::int64_t counter_cells = layout_.counter ? static_cast<std::int64_t>(n) * (n + 1) / 2 : 0;
    const Var counter_end = counter_base_ + static_cast<Var>(counter_cells);
    const Var span_len = layout_.span ? span_u_base_ - span_f_base_ : 0;

    if (v < c_base_) {
        const int idx = v - m_base_;
        const int k = idx / (vocab_size() + 1) + 1;
        const int sym = idx % (vocab_size() + 1);
        return "m_" + std::to_string(k) + "_" + (sym == eps_sym() ? "<eps>" : vocabulary_[sym]);
    }
    if (v < t_base_) return "c_" + std::to_string(v - c_base_ + 1);
    const Var t_end = layout_.counter              ? counter_base_
                      : layout_.span               ? span_f_base_
                      : layout_.automaton_states > 0 ? state_base_
                                                     : total_vars_;
    if (v < t_end) {
        auto it = std::upper_bound(t_transaction_base_.begin(), t_transaction_base_.end(), v);
        const int i = static_cast<int>(it - t_transaction_base_.begin()); // 1-based
        const int rel = v - t_transaction_base_[i - 1];
        const auto& cols = t_col_off_[i - 1];
        auto jt = std::upper_bound(cols.begin(), cols.end(), rel);
        const int j = static_cast<int>(jt - cols.begin());
        const int k = rel - cols[j - 1] + 1;
        return "t_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
    }
    if (layout_.counter && v < counter_end) {
        std::int64_t rel = v - counter_base_;
        int i = 1;
        while (static_cast<std::int64_t>(i) * (i + 1) / 2 <= rel) ++i;
        const int j = static_cast<int>(rel - static_cast<std::int64_t>(i - 1) * i / 2) + 1;
        if (i == n) return "card_" + std::to_string(j);
        return "cnt_" + std::to_string(i) + "_" + std::to_string(j);
    }
    if (layout_.span && v < span_u_base_ + span_len) {
        const bool used = v >= span_u_base_;
        const int rel = v - (used ? span_u_base_ : span_f_base_);
        auto it = std::upper_bound(pos_base_.begin(), pos_base_.end(), rel);
        const int i = static_cast<int>(it - pos_base_.begin());
        const int j = rel - pos_base_[i - 1] + 1;
        return std::string(used ? "u_" : "f_") + std::to_string(i) + "_" + std::to_string(j);
    }
    const int rel = v - state_base_;
    const int k = rel / layout_.automaton_states;
    const int s = rel % layout_.automaton_states;
    return "q_" + std::to_string(k) + "_" + std::to_string(s);
}

std::string Pattern::render(const std::vector<std::string>& vocabulary) const {
    std::string out;
    for (std::size_t k = 0; k < chars.size(); ++k) {
        if (k) out += ' ';
        out += vocabulary[chars[k]];
    }
    return out;
}

Pattern decode_pattern(const std::vector<bool>& model, const VarMap& vars, bool want_witnesses) {
    const int K = vars.k_bound();
    Pattern pattern;
    int first_eps = K + 1;
    for (int k = 1; k <= K; ++k) {
        int chosen = -1;
        for (int sym = 0; sym <= vars.eps_sym(); ++sym) {
            if (!model[vars.pattern_var(k, sym)]) continue;
            if (chosen != -1)
                raise(Errc::IllFormedModel, "two m literals true at pattern position " + std::to_string(k));
            chosen = sym;
        }
        if (chosen == -1)
            raise(Errc::IllFormedModel, "no m literal true at pattern position " + std::to_string(k));
        if (chosen == vars.eps_sym()) {
            if (first_eps > K) first_eps = k;
        } else {
            if (first_eps <= K)
                raise(Errc::IllFormedModel, "character after epsilon at position " + std::to_string(k));
            pattern.chars.push_back(chosen);
        }
    }
    if (pattern.chars.empty()) raise(Errc::IllFormedModel, "model decodes to the empty pattern");

    const int n = static_cast<int>(pattern.chars.size());
    for (int i = 1; i <= vars.transaction_count(); ++i)
        if (model[vars.cover_var(i)]) ++pattern.support;

    if (want_witnesses) {
        std::vector<Witness> witnesses;
        for (int i = 1; i <= vars.transaction_count(); ++i) {
            if (!model[vars.cover_var(i)]) continue;
            Witness w;
            w.transaction = i;
            w.positions.assign(n, 0);
            for (int j = 1; j <= vars.transaction_length(i); ++j)
                for (int k = 1; k <= std::min(j, std::min(K, n)); ++k)
                    if (model[vars.support_var(i, j, k)] && w.positions[k - 1] == 0)
                        w.positions[k - 1] = j;
            witnesses.push_back(std::move(w));
        }
        pattern.witnesses = std::move(witnesses);
    }
    return pattern;
}

Clause blocking_clause_exact(const std::vector<int>& chars, const VarMap& vars) {
    const int K = vars.k_bound();
    const int n = static_cast<int>(chars.size());
    assert(n >= 1 && n <= K);
    Clause clause;
    clause.reserve(n + 1);
    for (int k = 1; k <= n; ++k) clause.push_back(neg(vars.pattern_var(k, chars[k - 1])));
    if (n < K) clause.push_back(neg(vars.pattern_var(n + 1, vars.eps_sym())));
    return clause;
}

std::vector<Clause> blocking_clauses_subsequences(const std::vector<int>& chars, const VarMap& vars,
                                                  std::size_t cap) {
    const std::size_t n = chars.size();
    if (n >= 8 * sizeof(std::size_t) - 1 || (std::size_t{1} << n) > cap)
        raise(Errc::SubsequenceBlowup, "pattern of length " + std::to_string(n) +
                                           " has too many subsequences (cap " + std::to_string(cap) + ")");
    std::set<std::vector<int>> seen;
    std::vector<Clause> clauses;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<int> sub;
        for (std::size_t b = 0; b < n; ++b)
            if (mask & (std::size_t{1} << b)) sub.push_back(chars[b]);
        if (seen.insert(sub).second) clauses.push_back(blocking_clause_exact(sub, vars));
    }
    return clauses;
}

void export_dimacs(const Cnf& cnf, std::ostream& out) {
    out << "p cnf " << cnf.var_count << ' ' << cnf.clauses.size() << '\n';
    for (const auto& clause : cnf.clauses) {
        for (Lit p : clause) out << to_dimacs(p) << ' ';
        out << "0\n";
    }
}

void export_varmap(const VarMap& vars, std::ostream& out) {
    nlohmann::ordered_json sidecar;
    for (Var v = 0; v < vars.total_vars(); ++v) sidecar[vars.name(v)] = v + 1;
    out << sidecar.dump(2) << '\n';
}

Cnf parse_dimacs(std::istream& in) {
    Cnf cnf;
    std::string line;
    bool have_header = false;
    std::size_t expected_clauses = 0;
    Clause current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        if (line[0] == 'p') {
            std::istringstream header(line);
            std::string p, fmt;
            header >> p >> fmt >> cnf.var_count >> expected_clauses;
            if (fmt != "cnf") raise(Errc::MalformedLine, "DIMACS header format '" + fmt + "' != cnf");
            have_header = true;
            continue;
        }
        std::istringstream body(line);
        int d;
        while (body >> d) {
            if (d == 0) {
                if (!current.empty()) cnf.add_clause(std::move(current));
                current.clear();
            } else {
                if (std::abs(d) > cnf.var_count)
                    raise(Errc::MalformedLine, "literal " + std::to_string(d) + " out of range");
                current.push_back(from_dimacs(d));
            }
        }
    }
    if (!have_header) raise(Errc::MalformedLine, "missing DIMACS 'p cnf' header");
    if (!current.empty()) raise(Errc::MalformedLine, "unterminated clause at end of DIMACS input");
    if (cnf.clauses.size() != expected_clauses)
        raise(Errc::MalformedLine, "DIMACS clause count mismatch: header says " +
                                       std::to_string(expected_clauses) + ", found " +
                                       std::to_string(cnf.clauses.size()));
    return cnf;
}

} // namespace seqsat
