#include "seqsat/dataset.hpp"

#include "seqsat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace seqsat {

namespace {

constexpr const char* kEpsilonUtf8 = "\xce\xb5"; // "ε"
constexpr const char* kEpsilonAscii = "<eps>";

bool is_reserved_token(const std::string& token) {
    return token == kEpsilonUtf8 || token == kEpsilonAscii;
}

} // namespace

int Dataset::token_index(const std::string& token) const {
    auto it = std::find(vocabulary.begin(), vocabulary.end(), token);
    return it == vocabulary.end() ? -1 : static_cast<int>(it - vocabulary.begin());
}

void Dataset::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& token : vocabulary) {
        if (is_reserved_token(token))
            raise(Errc::ReservedToken, "vocabulary contains the reserved epsilon token '" + token + "'");
        if (!seen.insert(token).second)
            raise(Errc::MalformedLine, "duplicate vocabulary token '" + token + "'");
    }
    for (std::size_t i = 0; i < transactions.size(); ++i) {
        if (transactions[i].empty())
            raise(Errc::MalformedLine, "transaction " + std::to_string(i + 1) + " is empty");
        for (int v : transactions[i])
            if (v < 0 || v >= vocab_size())
                raise(Errc::MalformedLine,
                      "transaction " + std::to_string(i + 1) + " references character index " +
                          std::to_string(v) + " outside the vocabulary");
    }
}

std::string to_string(Mode mode) {
    switch (mode) {
    case Mode::All: return "all";
    case Mode::Closed: return "closed";
    case Mode::Maximal: return "maximal";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "all") return Mode::All;
    if (s == "closed") return Mode::Closed;
    if (s == "maximal") return Mode::Maximal;
    raise(Errc::MalformedLine, "unknown mode '" + s + "' (expected all|closed|maximal)");
}

GapTable::GapTable(int k_max, int vocab_size, int fill)
    : k_max_(k_max), vocab_size_(vocab_size),
      cells_(static_cast<std::size_t>(k_max) * vocab_size, fill) {}

GapTable::GapTable(int k_max, int vocab_size, std::vector<int> cells)
    : k_max_(k_max), vocab_size_(vocab_size), cells_(std::move(cells)) {
    if (cells_.size() != static_cast<std::size_t>(k_max_) * vocab_size_)
        raise(Errc::PartialGapTable, "gap table cell count mismatch");
}

int GapTable::at(int k, int v) const {
    return cells_[static_cast<std::size_t>(k - 1) * vocab_size_ + v];
}

void GapTable::set(int k, int v, int gap) {
    cells_[static_cast<std::size_t>(k - 1) * vocab_size_ + v] = gap;
}

std::vector<GapRule> parse_gap_rules(std::istream& in) {
    std::vector<GapRule> rules;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        // trim
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        std::istringstream row(line);
        std::string pos_field, token_field, gap_field;
        if (!std::getline(row, pos_field, ',') || !std::getline(row, token_field, ',') ||
            !std::getline(row, gap_field))
            raise(Errc::MalformedLine,
                  "gap table line " + std::to_string(lineno) + ": expected position,token,maxgap");

        GapRule rule;
        if (pos_field != "*") {
            try {
                rule.position = std::stoi(pos_field);
            } catch (const std::exception&) {
                raise(Errc::MalformedLine,
                      "gap table line " + std::to_string(lineno) + ": bad position '" + pos_field + "'");
            }
            if (*rule.position < 1)
                raise(Errc::MalformedLine,
                      "gap table line " + std::to_string(lineno) + ": position must be >= 1");
        }
        if (token_field != "*") rule.token = token_field;
        try {
            rule.gap = std::stoi(gap_field);
        } catch (const std::exception&) {
            raise(Errc::MalformedLine,
                  "gap table line " + std::to_string(lineno) + ": bad gap '" + gap_field + "'");
        }
        if (rule.gap < 1)
            raise(Errc::MalformedLine, "gap table line " + std::to_string(lineno) + ": gap must be >= 1");
        rules.push_back(std::move(rule));
    }
    return rules;
}

GapTable build_gap_table(const std::vector<GapRule>& rules, int k_max,
                         const std::vector<std::string>& vocabulary) {
    const int vs = static_cast<int>(vocabulary.size());
    GapTable table(k_max, vs, 0); // 0 marks an unset cell; valid gaps are >= 1
    for (const auto& rule : rules) {
        if (rule.position && *rule.position > k_max) continue; // beyond the pattern bound
        int v_lo = 0, v_hi = vs - 1;
        if (rule.token) {
            auto it = std::find(vocabulary.begin(), vocabulary.end(), *rule.token);
            if (it == vocabulary.end())
                raise(Errc::TokenNotInVocabulary, "gap table token '" + *rule.token + "' not in vocabulary");
            v_lo = v_hi = static_cast<int>(it - vocabulary.begin());
        }
        const int k_lo = rule.position ? *rule.position : 1;
        const int k_hi = rule.position ? *rule.position : k_max;
        for (int k = k_lo; k <= k_hi; ++k)
            for (int v = v_lo; v <= v_hi; ++v) table.set(k, v, rule.gap);
    }
    for (int k = 1; k <= k_max; ++k)
        for (int v = 0; v < vs; ++v)
            if (table.at(k, v) == 0)
                raise(Errc::PartialGapTable, "gap table has no entry for position " + std::to_string(k) +
                                                 ", token '" + vocabulary[v] + "'");
    return table;
}

void MiningConfig::validate(const Dataset& dataset) const {
    if (minsup < 1 || minsup > dataset.transaction_count())
        raise(Errc::MinsupOutOfRange, "minsup " + std::to_string(minsup) + " not in 1.." +
                                          std::to_string(dataset.transaction_count()));
    if (max_gap && *max_gap < 1) raise(Errc::MinsupOutOfRange, "max-gap must be >= 1");
    if (max_span && *max_span < 1) raise(Errc::MinsupOutOfRange, "max-span must be >= 1");
}

namespace {

Dataset parse_tokens(std::istream& in, std::string name) {
    Dataset d;
    d.name = std::move(name);
    std::unordered_map<std::string, int> index;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::vector<int> transaction;
        std::string token;
        while (words >> token) {
            if (is_reserved_token(token))
                raise(Errc::ReservedToken, "token '" + token + "' is the reserved epsilon sentinel");
            auto [it, inserted] = index.try_emplace(token, static_cast<int>(d.vocabulary.size()));
            if (inserted) d.vocabulary.push_back(token);
            transaction.push_back(it->second);
        }
        if (!transaction.empty()) d.transactions.push_back(std::move(transaction));
    }
    if (d.transactions.empty()) raise(Errc::EmptyDataset, "dataset has no transactions");
    return d;
}

// SPMF sequence format: items separated by -1, transactions terminated by -2.
// Only single-item elements are accepted here.
Dataset parse_spmf(std::istream& in, std::string name) {
    Dataset d;
    d.name = std::move(name);
    std::unordered_map<std::string, int> index;
    std::vector<int> transaction;
    int pending_items = 0;

    std::string word;
    while (in >> word) {
        long value;
        try {
            value = std::stol(word);
        } catch (const std::exception&) {
            raise(Errc::MalformedLine, "spmf: non-integer token '" + word + "'");
        }
        if (value == -1) {
            if (pending_items == 0) raise(Errc::MalformedLine, "spmf: -1 with no preceding item");
            pending_items = 0;
        } else if (value == -2) {
            if (pending_items != 0) raise(Errc::MalformedLine, "spmf: element not closed with -1 before -2");
            if (transaction.empty()) raise(Errc::MalformedLine, "spmf: empty transaction");
            d.transactions.push_back(std::move(transaction));
            transaction.clear();
        } else if (value < 0) {
            raise(Errc::MalformedLine, "spmf: unknown sentinel " + std::to_string(value));
        } else {
            if (pending_items != 0)
                raise(Errc::MalformedLine, "spmf: multi-item element (only single-character elements supported)");
            ++pending_items;
            auto [it, inserted] = index.try_emplace(word, static_cast<int>(d.vocabulary.size()));
            if (inserted) d.vocabulary.push_back(word);
            transaction.push_back(it->second);
        }
    }
    if (pending_items != 0 || !transaction.empty())
        raise(Errc::MalformedLine, "spmf: trailing transaction not terminated with -2");
    if (d.transactions.empty()) raise(Errc::EmptyDataset, "dataset has no transactions");
    return d;
}

} // namespace

Dataset parse_dataset(std::istream& in, DatasetFormat format, std::string name) {
    Dataset d = format == DatasetFormat::Tokens ? parse_tokens(in, std::move(name))
                                                : parse_spmf(in, std::move(name));
    d.validate();
    return d;
}

Dataset parse_dataset_string(const std::string& text, DatasetFormat format, std::string name) {
    std::istringstream in(text);
    return parse_dataset(in, format, std::move(name));
}

Dataset load_dataset(const std::string& path, DatasetFormat format) {
    std::ifstream in(path);
    if (!in) raise(Errc::Io, "cannot open dataset file '" + path + "'");
    return parse_dataset(in, format, path);
}

void render_dataset(const Dataset& dataset, std::ostream& out, DatasetFormat format) {
    if (format == DatasetFormat::Tokens) {
        for (const auto& transaction : dataset.transactions) {
            for (std::size_t j = 0; j < transaction.size(); ++j) {
                if (j) out << ' ';
                out << dataset.vocabulary[transaction[j]];
            }
            out << '\n';
        }
    } else {
        for (const auto& transaction : dataset.transactions) {
            for (int v : transaction) out << dataset.vocabulary[v] << " -1 ";
            out << "-2\n";
        }
    }
}

std::string render_dataset_string(const Dataset& dataset, DatasetFormat format) {
    std::ostringstream out;
    render_dataset(dataset, out, format);
    return out.str();
}

int compute_k(const Dataset& dataset, int minsup) {
    if (minsup < 1 || minsup > dataset.transaction_count())
        raise(Errc::MinsupOutOfRange, "minsup " + std::to_string(minsup) + " not in 1.." +
                                          std::to_string(dataset.transaction_count()));
    std::vector<int> lengths;
    lengths.reserve(dataset.transactions.size());
    for (const auto& t : dataset.transactions) lengths.push_back(static_cast<int>(t.size()));
    std::sort(lengths.begin(), lengths.end(), std::greater<>());
    return lengths[minsup - 1];
}

DatasetStats stats(const Dataset& dataset) {
    DatasetStats s;
    s.transaction_count = dataset.transaction_count();
    s.vocab_size = dataset.vocab_size();
    std::size_t total = 0;
    for (const auto& t : dataset.transactions) {
        s.max_length = std::max(s.max_length, static_cast<int>(t.size()));
        total += t.size();
    }
    if (!dataset.transactions.empty())
        s.avg_length = static_cast<double>(total) / static_cast<double>(dataset.transactions.size());
    return s;
}

int resolve_percent_minsup(double percent, int transaction_count) {
    int minsup = static_cast<int>(std::ceil(percent / 100.0 * transaction_count));
    return std::max(minsup, 1);
}

} // namespace seqsat
