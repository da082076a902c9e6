#include "seqsat/oracle.hpp"

#include "seqsat/errors.hpp"

#include <algorithm>
#include <cassert>
#include <memory>

namespace seqsat::oracle {

namespace {

// Independent token-level regex engine (literal, ".", "*"/"⋆", "|", groups):
// position-set simulation over the parsed tree, no automaton construction.
struct RegexNode {
    enum Kind { Literal, Any, AnySeq, Seq, Or } kind;
    int symbol = -1;
    std::vector<RegexNode> children;
};

class RegexReader {
  public:
    RegexReader(const std::string& text, const std::vector<std::string>& vocab)
        : text_(text), vocab_(vocab) {}

    RegexNode read() {
        RegexNode root = read_or();
        skip_space();
        if (pos_ != text_.size()) raise(Errc::RegexSyntax, "unexpected ')' in regular expression");
        return root;
    }

  private:
    void skip_space() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }
    bool starts_star() const { return text_.compare(pos_, 3, "\xe2\x8b\x86") == 0; }

    RegexNode read_or() {
        RegexNode node{RegexNode::Or, -1, {read_seq()}};
        for (skip_space(); pos_ < text_.size() && text_[pos_] == '|'; skip_space()) {
            ++pos_;
            node.children.push_back(read_seq());
        }
        return node.children.size() == 1 ? node.children[0] : node;
    }

    RegexNode read_seq() {
        RegexNode node{RegexNode::Seq, -1, {}};
        for (;;) {
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] == '|' || text_[pos_] == ')') break;
            node.children.push_back(read_atom());
        }
        return node;
    }

    RegexNode read_atom() {
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            RegexNode inner = read_or();
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                raise(Errc::RegexSyntax, "missing ')' in regular expression");
            ++pos_;
            return inner;
        }
        if (c == '.') {
            ++pos_;
            return {RegexNode::Any, -1, {}};
        }
        if (c == '*' || starts_star()) {
            pos_ += c == '*' ? 1 : 3;
            return {RegexNode::AnySeq, -1, {}};
        }
        std::size_t j = pos_;
        while (j < text_.size() && text_[j] != ' ' && text_[j] != '\t' && text_[j] != '\n' &&
               text_[j] != '\r' && text_[j] != '(' && text_[j] != ')' && text_[j] != '|' &&
               text_[j] != '.' && text_[j] != '*' && text_.compare(j, 3, "\xe2\x8b\x86") != 0)
            ++j;
        const std::string word = text_.substr(pos_, j - pos_);
        pos_ = j;
        for (std::size_t v = 0; v < vocab_.size(); ++v)
            if (vocab_[v] == word) return {RegexNode::Literal, static_cast<int>(v), {}};
        raise(Errc::TokenNotInVocabulary, "regex token '" + word + "' not in the vocabulary");
    }

    const std::string& text_;
    const std::vector<std::string>& vocab_;
    std::size_t pos_ = 0;
};

// eval(node, S) = set of end positions reachable from any start position in S.
std::vector<bool> eval_regex(const RegexNode& node, const std::vector<bool>& starts,
                             const std::vector<int>& word) {
    const std::size_t n = word.size();
    std::vector<bool> ends(n + 1, false);
    switch (node.kind) {
    case RegexNode::Literal:
        for (std::size_t i = 0; i < n; ++i)
            if (starts[i] && word[i] == node.symbol) ends[i + 1] = true;
        break;
    case RegexNode::Any:
        for (std::size_t i = 0; i < n; ++i)
            if (starts[i]) ends[i + 1] = true;
        break;
    case RegexNode::AnySeq: {
        bool reached = false;
        for (std::size_t i = 0; i <= n; ++i) {
            reached = reached || starts[i];
            ends[i] = reached;
        }
        break;
    }
    case RegexNode::Seq: {
        std::vector<bool> current = starts;
        for (const auto& child : node.children) current = eval_regex(child, current, word);
        return current;
    }
    case RegexNode::Or:
        for (const auto& child : node.children) {
            const auto branch = eval_regex(child, starts, word);
            for (std::size_t i = 0; i <= n; ++i)
                if (branch[i]) ends[i] = true;
        }
        break;
    }
    return ends;
}

bool regex_matches(const RegexNode& root, const std::vector<int>& word) {
    std::vector<bool> starts(word.size() + 1, false);
    starts[0] = true;
    return eval_regex(root, starts, word)[word.size()];
}

} // namespace

bool embeds(const std::vector<int>& pattern, const std::vector<int>& transaction,
            const EmbeddingConstraints& constraints) {
    assert(!pattern.empty());
    const int n = static_cast<int>(pattern.size());
    const int len = static_cast<int>(transaction.size());
    if (n > len) return false;

    // latest_first[j]: the largest feasible first position over all embeddings
    // of pattern[0..k) whose k-th character sits at transaction position j
    // (0-based); -1 marks infeasible.
    std::vector<int> latest_first(len, -1);
    for (int j = 0; j < len; ++j)
        if (transaction[j] == pattern[0]) latest_first[j] = j;

    for (int k = 1; k < n; ++k) {
        int window = len; // unconstrained
        if (constraints.max_gap) window = *constraints.max_gap;
        if (constraints.dep_gap)
            window = std::min(window, constraints.dep_gap->at(k, pattern[k - 1]));
        std::vector<int> next(len, -1);
        for (int j = 0; j < len; ++j) {
            if (transaction[j] != pattern[k]) continue;
            const int lo = std::max(0, j - window);
            for (int j2 = lo; j2 < j; ++j2) next[j] = std::max(next[j], latest_first[j2]);
        }
        latest_first = std::move(next);
    }

    for (int j = 0; j < len; ++j) {
        if (latest_first[j] < 0) continue;
        if (!constraints.max_span || j - latest_first[j] <= *constraints.max_span) return true;
    }
    return false;
}

std::vector<int> cover(const std::vector<int>& pattern, const Dataset& dataset,
                       const EmbeddingConstraints& constraints) {
    std::vector<int> ids;
    for (int i = 1; i <= dataset.transaction_count(); ++i)
        if (embeds(pattern, dataset.transactions[i - 1], constraints)) ids.push_back(i);
    return ids;
}

namespace {

struct Found {
    std::vector<int> chars;
    std::vector<int> cover;
};

struct Dfs {
    const Dataset& dataset;
    const MiningConfig& config;
    EmbeddingConstraints constraints;
    const RegexNode* regex = nullptr;
    int k_bound = 0;
    std::size_t budget = 0;
    std::size_t nodes = 0;
    std::vector<Found> found;

    void extend(std::vector<int>& prefix, const std::vector<int>& prefix_cover) {
        if (static_cast<int>(prefix.size()) >= k_bound) return;
        for (int v = 0; v < dataset.vocab_size(); ++v) {
            if (++nodes > budget)
                raise(Errc::BudgetExceeded, "oracle node budget exceeded at " + std::to_string(nodes));
            prefix.push_back(v);
            std::vector<int> child_cover;
            for (int i : prefix_cover)
                if (embeds(prefix, dataset.transactions[i - 1], constraints)) child_cover.push_back(i);
            if (static_cast<int>(child_cover.size()) >= config.minsup) {
                if (!regex || regex_matches(*regex, prefix)) found.push_back({prefix, child_cover});
                extend(prefix, child_cover);
            }
            prefix.pop_back();
        }
    }
};

bool subsequence_of(const std::vector<int>& small, const std::vector<int>& big) {
    std::size_t i = 0;
    for (int v : big) {
        if (i < small.size() && small[i] == v) ++i;
        if (i == small.size()) return true;
    }
    return i == small.size();
}

} // namespace

PatternSet oracle_mine(const Dataset& dataset, const MiningConfig& config, std::size_t node_budget) {
    config.validate(dataset);

    Dfs dfs{dataset, config, {}, nullptr, compute_k(dataset, config.minsup), node_budget};
    dfs.constraints.max_gap = config.max_gap;
    dfs.constraints.max_span = config.max_span;
    std::unique_ptr<GapTable> table;
    if (config.dep_gap) {
        table = std::make_unique<GapTable>(
            build_gap_table(*config.dep_gap, dfs.k_bound, dataset.vocabulary));
        dfs.constraints.dep_gap = table.get();
    }
    RegexNode regex_root;
    if (config.regex) {
        regex_root = RegexReader(*config.regex, dataset.vocabulary).read();
        dfs.regex = &regex_root;
    }

    std::vector<int> all_ids;
    for (int i = 1; i <= dataset.transaction_count(); ++i) all_ids.push_back(i);
    std::vector<int> prefix;
    dfs.extend(prefix, all_ids);

    std::vector<Found>& found = dfs.found;
    std::vector<bool> keep(found.size(), true);
    if (config.mode != Mode::All) {
        for (std::size_t a = 0; a < found.size(); ++a)
            for (std::size_t b = 0; b < found.size(); ++b) {
                if (a == b || found[b].chars.size() <= found[a].chars.size()) continue;
                if (!subsequence_of(found[a].chars, found[b].chars)) continue;
                if (config.mode == Mode::Maximal || found[a].cover == found[b].cover) {
                    keep[a] = false;
                    break;
                }
            }
    }

    PatternSet out;
    out.mode = config.mode;
    out.config = config;
    out.k_bound = dfs.k_bound;
    for (std::size_t a = 0; a < found.size(); ++a) {
        if (!keep[a]) continue;
        Pattern p;
        p.chars = std::move(found[a].chars);
        p.support = static_cast<int>(found[a].cover.size());
        out.patterns.push_back(std::move(p));
    }
    return out;
}

} // namespace seqsat::oracle
