#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace seqsat {

/// Vocabulary of distinct tokens plus ordered transactions of 0-based token indices.
/// Immutable after construction; safe to share read-only across threads.
struct Dataset {
    std::vector<std::string> vocabulary;
    std::vector<std::vector<int>> transactions;
    std::string name;

    int vocab_size() const { return static_cast<int>(vocabulary.size()); }
    int transaction_count() const { return static_cast<int>(transactions.size()); }

    /// Index of a token, or -1 when absent.
    int token_index(const std::string& token) const;

    /// Checks the structural invariants (index range, non-empty transactions,
    /// duplicate-free vocabulary, no reserved epsilon token). Throws on violation.
    void validate() const;
};

struct DatasetStats {
    int transaction_count = 0;
    int vocab_size = 0;
    int max_length = 0;
    double avg_length = 0.0;
};

enum class Mode { All, Closed, Maximal };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

/// Per-(pattern position, character) gap bound, total over 1..K x V.
class GapTable {
  public:
    GapTable(int k_max, int vocab_size, int fill);
    GapTable(int k_max, int vocab_size, std::vector<int> cells);

    int at(int k, int v) const; // k in 1..k_max, v in 0..vocab_size-1
    void set(int k, int v, int gap);
    int k_max() const { return k_max_; }
    int vocab_size() const { return vocab_size_; }

  private:
    int k_max_;
    int vocab_size_;
    std::vector<int> cells_; // k-major
};

/// One "position,token,maxgap" row of a dependent-gap CSV. Wildcards ("*")
/// expand over every position / token when the table is densified.
struct GapRule {
    std::optional<int> position; // 1-based; nullopt = every position
    std::optional<std::string> token;
    int gap = 1;
};

std::vector<GapRule> parse_gap_rules(std::istream& in);

/// Densify CSV rules into a total table for the given K and vocabulary.
/// Throws PartialGapTable when a (position, token) cell stays unset.
GapTable build_gap_table(const std::vector<GapRule>& rules, int k_max,
                         const std::vector<std::string>& vocabulary);

/// Everything the engine needs to know about one mining run. minsup is
/// absolute; fractional CLI input is resolved before this struct is built.
struct MiningConfig {
    int minsup = 1;
    std::optional<int> max_gap;
    std::optional<std::vector<GapRule>> dep_gap;
    std::optional<int> max_span;
    std::optional<std::string> regex;
    Mode mode = Mode::Closed;
    bool want_witnesses = false;
    std::uint64_t seed = 0;
    std::size_t subsequence_cap = std::size_t{1} << 20;

    bool has_embedding_constraints() const {
        return max_gap.has_value() || dep_gap.has_value() || max_span.has_value();
    }
    bool has_constraints() const { return has_embedding_constraints() || regex.has_value(); }

    /// Throws MinsupOutOfRange unless 1 <= minsup <= |T|.
    void validate(const Dataset& dataset) const;
};

enum class DatasetFormat { Tokens, Spmf };

Dataset parse_dataset(std::istream& in, DatasetFormat format, std::string name = "");
Dataset parse_dataset_string(const std::string& text, DatasetFormat format, std::string name = "");
Dataset load_dataset(const std::string& path, DatasetFormat format);

void render_dataset(const Dataset& dataset, std::ostream& out, DatasetFormat format);
std::string render_dataset_string(const Dataset& dataset, DatasetFormat format);

/// Length of the minsup-th longest transaction: the pattern-length bound K.
int compute_k(const Dataset& dataset, int minsup);

DatasetStats stats(const Dataset& dataset);

/// ceil(percent/100 * |T|), clamped to at least 1. Used by front ends to
/// resolve "P%" thresholds; the engine itself only sees absolute counts.
int resolve_percent_minsup(double percent, int transaction_count);

} // namespace seqsat
