#pragma once

#include <stdexcept>
#include <string>

namespace seqsat {

enum class Errc {
    EmptyDataset,
    MalformedLine,
    ReservedToken,
    MinsupOutOfRange,
    Overflow,
    IllFormedModel,
    SubsequenceBlowup,
    PartialGapTable,
    RegexSyntax,
    TokenNotInVocabulary,
    BudgetExceeded,
    Io,
};

/// Library error with a machine-checkable code; the CLI maps these to exit 2.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace seqsat
