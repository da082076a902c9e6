#pragma once

#include <cstdint>
#include <vector>

namespace seqsat {

// Variables are dense 0-based ints; DIMACS ids are var+1.
using Var = int32_t;
constexpr Var kNoVar = -1;

// MiniSat-style literal: index = 2*var + sign, sign set for the negation.
struct Lit {
    int32_t x = -2;

    constexpr bool operator==(const Lit&) const = default;
    constexpr auto operator<=>(const Lit&) const = default;
};

constexpr Lit mkLit(Var v, bool sign = false) { return Lit{v + v + (sign ? 1 : 0)}; }
constexpr Lit operator~(Lit p) { return Lit{p.x ^ 1}; }
constexpr bool sign(Lit p) { return p.x & 1; }
constexpr Var var(Lit p) { return p.x >> 1; }
constexpr Lit lit_undef() { return Lit{-2}; }

constexpr Lit pos(Var v) { return mkLit(v, false); }
constexpr Lit neg(Var v) { return mkLit(v, true); }

/// Signed DIMACS form: +/-(var+1).
constexpr int to_dimacs(Lit p) { return sign(p) ? -(var(p) + 1) : (var(p) + 1); }
constexpr Lit from_dimacs(int d) { return d > 0 ? pos(d - 1) : neg(-d - 1); }

using Clause = std::vector<Lit>;

} // namespace seqsat
