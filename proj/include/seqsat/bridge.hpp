#pragma once

#include "seqsat/cnf.hpp"
#include "seqsat/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace seqsat {

struct BridgeResult {
    bool sat = false;
    std::vector<bool> model; // total over cnf.var_count when sat
};

/// Differential-testing lane: exports the formula (assumptions appended as
/// unit clauses) to a DIMACS file, runs `command <file>`, and parses the
/// standard "s SATISFIABLE" / "v ..." output.
BridgeResult solve_via_dimacs(const Cnf& cnf, std::span<const Lit> assumptions,
                              const std::string& command);

} // namespace seqsat
