#include <doctest.h>

#include "seqsat/solver.hpp"
#include "testutil.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace seqsat;
using namespace seqsat::testutil;

namespace {

Cnf random_cnf(std::mt19937_64& rng, int max_vars = 16) {
    Cnf cnf;
    cnf.var_count = 1 + static_cast<int>(rng() % max_vars);
    std::uniform_int_distribution<int> var_dist(0, cnf.var_count - 1);
    // mostly ternary around the hard density, a sprinkle of binaries and units
    const int clause_count = 1 + static_cast<int>(cnf.var_count * 3.8);
    for (int c = 0; c < clause_count; ++c) {
        Clause clause;
        const int roll = static_cast<int>(rng() % 20);
        const int width = roll == 0 ? 1 : (roll <= 4 ? 2 : (roll <= 17 ? 3 : 4));
        for (int l = 0; l < width; ++l) clause.push_back(mkLit(var_dist(rng), rng() % 2 == 0));
        cnf.add_clause(std::move(clause));
    }
    return cnf;
}

} // namespace

TEST_CASE("contradictory units make the solver permanently unsat") {
    Solver solver;
    const Var x = solver.new_var();
    CHECK(solver.add_clause({pos(x)}));
    CHECK_FALSE(solver.add_clause({neg(x)}));
    CHECK_FALSE(solver.okay());
    CHECK(solver.solve() == Solver::Result::Unsat);
    CHECK(solver.conflict_core().empty());
}

TEST_CASE("basic sat and model extraction") {
    Solver solver;
    const Var x = solver.new_var();
    const Var y = solver.new_var();
    solver.add_clause({pos(x), pos(y)});
    REQUIRE(solver.solve() == Solver::Result::Sat);
    CHECK((solver.model()[x] || solver.model()[y]));
}

TEST_CASE("assumptions yield cores and respect forced values") {
    Solver solver;
    const Var x = solver.new_var();
    const Var y = solver.new_var();
    solver.add_clause({pos(x), pos(y)});

    REQUIRE(solver.solve({neg(x), neg(y)}) == Solver::Result::Unsat);
    CHECK(!solver.conflict_core().empty());
    for (Lit p : solver.conflict_core()) CHECK((p == neg(x) || p == neg(y)));

    REQUIRE(solver.solve({neg(x)}) == Solver::Result::Sat);
    CHECK_FALSE(solver.model()[x]);
    CHECK(solver.model()[y]);

    // the same solver is reusable after an assumption conflict
    REQUIRE(solver.solve() == Solver::Result::Sat);
}

TEST_CASE("unsat core re-solves to unsat on its own") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 50; ++round) {
        const Cnf cnf = random_cnf(rng, 12);
        Solver solver;
        solver.add_cnf(cnf);
        std::vector<Lit> assumptions;
        for (Var v = 0; v < std::min(cnf.var_count, 6); ++v)
            assumptions.push_back(mkLit(v, rng() % 2 == 0));
        if (solver.solve(assumptions) == Solver::Result::Unsat && solver.okay()) {
            const auto core = solver.conflict_core();
            for (Lit p : core)
                CHECK(std::find(assumptions.begin(), assumptions.end(), p) != assumptions.end());
            CHECK(solver.solve(core) == Solver::Result::Unsat);
        }
    }
}

TEST_CASE("verdicts agree with the truth-table decider") {
    std::mt19937_64 rng(2024);
    int sats = 0, unsats = 0;
    for (int round = 0; round < 300; ++round) {
        const Cnf cnf = random_cnf(rng);
        Solver solver;
        solver.add_cnf(cnf);
        const bool sat = solver.solve() == Solver::Result::Sat;
        const bool expected = truth_table_solve(cnf).has_value();
        REQUIRE(sat == expected);
        if (sat) {
            ++sats;
            REQUIRE(Solver::verify_model(cnf, solver.model()));
        } else {
            ++unsats;
        }
    }
    CHECK(sats > 30);
    CHECK(unsats > 30);
}

TEST_CASE("verdicts stay correct across incremental clause additions") {
    std::mt19937_64 rng(5150);
    for (int round = 0; round < 40; ++round) {
        Cnf cnf = random_cnf(rng, 10);
        Solver solver;
        solver.add_cnf(cnf);
        for (int step = 0; step < 3; ++step) {
            const bool sat = solver.solve() == Solver::Result::Sat;
            CHECK(sat == truth_table_solve(cnf).has_value());
            if (sat) CHECK(Solver::verify_model(cnf, solver.model()));
            Clause extra;
            for (int l = 0; l < 2; ++l)
                extra.push_back(mkLit(static_cast<Var>(rng() % cnf.var_count), rng() % 2 == 0));
            cnf.add_clause(extra);
            solver.add_clause(extra);
        }
    }
}

TEST_CASE("verify_model checks every clause") {
    Cnf cnf;
    cnf.var_count = 1;
    cnf.add_clause({pos(0)});
    CHECK(Solver::verify_model(cnf, {true}));
    CHECK_FALSE(Solver::verify_model(cnf, {false}));
}

TEST_CASE("determinism: identical runs produce identical model sequences") {
    auto enumerate = [](std::uint64_t seed) {
        std::mt19937_64 rng(17);
        const Cnf cnf = random_cnf(rng, 10);
        Solver solver;
        solver.set_seed(seed);
        solver.add_cnf(cnf);
        std::vector<std::vector<bool>> models;
        while (solver.solve() == Solver::Result::Sat && models.size() < 50) {
            models.push_back(solver.model());
            Clause block;
            for (Var v = 0; v < cnf.var_count; ++v) block.push_back(mkLit(v, solver.model()[v]));
            solver.add_clause(std::move(block));
        }
        return models;
    };
    CHECK(enumerate(0) == enumerate(0));
    CHECK(enumerate(42) == enumerate(42));
}

TEST_CASE("blocking-clause enumeration finds every model exactly once") {
    std::mt19937_64 rng(33);
    for (int round = 0; round < 25; ++round) {
        Cnf cnf = random_cnf(rng, 8);
        Solver solver;
        solver.add_cnf(cnf);

        std::set<std::vector<bool>> models;
        while (solver.solve() == Solver::Result::Sat) {
            REQUIRE(Solver::verify_model(cnf, solver.model()));
            CHECK(models.insert(solver.model()).second); // no repeats
            Clause block;
            for (Var v = 0; v < cnf.var_count; ++v) block.push_back(mkLit(v, solver.model()[v]));
            solver.add_clause(std::move(block));
        }
        // exhaustive count agrees
        std::uint64_t expected = 0;
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << cnf.var_count); ++a) {
            std::vector<bool> model(cnf.var_count);
            for (int v = 0; v < cnf.var_count; ++v) model[v] = (a >> v) & 1;
            if (Solver::verify_model(cnf, model)) ++expected;
        }
        CHECK(models.size() == expected);
    }
}

TEST_CASE("relaxing an assumption stack only grows the model set") {
    // three free variables, no clauses: stacks of negative assumptions
    Solver solver;
    const Var a = solver.new_var();
    const Var b = solver.new_var();
    const Var c = solver.new_var();
    solver.add_clause({pos(a), pos(b), pos(c)});

    auto models_under = [&](std::vector<Lit> assumptions) {
        Solver fresh;
        fresh.ensure_vars(3);
        fresh.add_clause({pos(a), pos(b), pos(c)});
        std::set<std::vector<bool>> models;
        while (fresh.solve(assumptions) == Solver::Result::Sat) {
            models.insert(fresh.model());
            Clause block;
            for (Var v = 0; v < 3; ++v) block.push_back(mkLit(v, fresh.model()[v]));
            fresh.add_clause(std::move(block));
        }
        return models;
    };

    std::vector<Lit> stack{neg(a), neg(b)};
    auto before = models_under(stack);
    stack.pop_back();
    auto mid = models_under(stack);
    stack.pop_back();
    auto after = models_under(stack);
    CHECK(std::includes(mid.begin(), mid.end(), before.begin(), before.end()));
    CHECK(std::includes(after.begin(), after.end(), mid.begin(), mid.end()));
}
