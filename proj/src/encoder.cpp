#include "seqsat/encoder.hpp"

#include "seqsat/errors.hpp"

#include <algorithm>
#include <cassert>

namespace seqsat {

Cnf encode_base(const Dataset& dataset, int k_bound, const VarMap& vars, bool order_clauses) {
    const int K = k_bound;
    const int n = dataset.transaction_count();
    const int eps = vars.eps_sym();
    Cnf cnf;
    cnf.var_count = vars.total_vars();

    // at least one character (or epsilon) per pattern position
    for (int k = 1; k <= K; ++k) {
        Clause clause;
        clause.push_back(pos(vars.pattern_var(k, eps)));
        for (int v = 0; v < vars.vocab_size(); ++v) clause.push_back(pos(vars.pattern_var(k, v)));
        cnf.add_clause(std::move(clause));
    }
    // at most one
    for (int k = 1; k <= K; ++k)
        for (int a = 0; a <= eps; ++a)
            for (int b = a + 1; b <= eps; ++b)
                cnf.add_clause({neg(vars.pattern_var(k, a)), neg(vars.pattern_var(k, b))});
    // epsilon only at the tail
    for (int k = 1; k < K; ++k)
        cnf.add_clause({neg(vars.pattern_var(k, eps)), pos(vars.pattern_var(k + 1, eps))});

    // support compatibility: t(i,j,k) implies the pattern character matches
    for (int i = 1; i <= n; ++i) {
        const auto& transaction = dataset.transactions[i - 1];
        const int len = static_cast<int>(transaction.size());
        for (int j = 1; j <= len; ++j)
            for (int k = 1; k <= std::min(j, K); ++k)
                cnf.add_clause({neg(vars.support_var(i, j, k)),
                                pos(vars.pattern_var(k, transaction[j - 1]))});
    }

    // coverage: a covered transaction supports every non-epsilon position
    for (int i = 1; i <= n; ++i) {
        const int len = vars.transaction_length(i);
        for (int k = 1; k <= K; ++k) {
            Clause clause{neg(vars.cover_var(i)), pos(vars.pattern_var(k, eps))};
            for (int j = k; j <= len; ++j) clause.push_back(pos(vars.support_var(i, j, k)));
            cnf.add_clause(std::move(clause));
        }
    }

    // each pattern position matches at most once per transaction
    for (int i = 1; i <= n; ++i) {
        const int len = vars.transaction_length(i);
        for (int k = 1; k <= K; ++k)
            for (int j = k; j <= len; ++j)
                for (int j2 = j + 1; j2 <= len; ++j2)
                    cnf.add_clause({neg(vars.support_var(i, j, k)), neg(vars.support_var(i, j2, k))});
    }

    // order preservation: a support needs an earlier support of the previous position
    if (order_clauses) {
        for (int i = 1; i <= n; ++i) {
            const int len = vars.transaction_length(i);
            for (int j = 1; j <= len; ++j)
                for (int k = 2; k <= std::min(j, K); ++k) {
                    Clause clause{neg(vars.support_var(i, j, k))};
                    for (int j2 = k - 1; j2 <= j - 1; ++j2)
                        clause.push_back(pos(vars.support_var(i, j2, k - 1)));
                    cnf.add_clause(std::move(clause));
                }
        }
    }
    return cnf;
}

Cnf encode_cardinality(const std::vector<Lit>& cover_lits, int minsup, const VarMap& vars) {
    const int n = static_cast<int>(cover_lits.size());
    assert(n >= 1 && minsup >= 1 && minsup <= n);
    Cnf cnf;
    cnf.var_count = vars.total_vars();

    auto cell = [&](int i, int j) { return i == n ? vars.card_var(j) : vars.counter_var(i, j); };

    // cell(i,j) <-> at least j of the first i inputs are true; both directions
    // so the counter propagates as a function of the inputs
    cnf.add_clause({neg(cell(1, 1)), cover_lits[0]});
    cnf.add_clause({pos(cell(1, 1)), ~cover_lits[0]});
    for (int i = 2; i <= n; ++i) {
        for (int j = 1; j <= i; ++j) {
            if (j < i) {
                cnf.add_clause({neg(cell(i, j)), pos(cell(i - 1, j)), cover_lits[i - 1]});
                if (j >= 2)
                    cnf.add_clause({neg(cell(i, j)), pos(cell(i - 1, j)), pos(cell(i - 1, j - 1))});
                cnf.add_clause({pos(cell(i, j)), neg(cell(i - 1, j))});
            } else {
                cnf.add_clause({neg(cell(i, i)), cover_lits[i - 1]});
                if (j >= 2) cnf.add_clause({neg(cell(i, i)), pos(cell(i - 1, i - 1))});
            }
            if (j >= 2)
                cnf.add_clause({pos(cell(i, j)), ~cover_lits[i - 1], neg(cell(i - 1, j - 1))});
        }
        cnf.add_clause({pos(cell(i, 1)), ~cover_lits[i - 1]});
    }
    // staircase: card(tau+1) entails card(tau)
    for (int i = 1; i <= n; ++i)
        for (int j = 2; j <= i; ++j) cnf.add_clause({neg(cell(i, j)), pos(cell(i, j - 1))});

    cnf.add_clause({pos(vars.card_var(minsup))});
    return cnf;
}

Cnf encode_max_gap(const Dataset& dataset, int k_bound, int gamma, const VarMap& vars) {
    assert(gamma >= 1);
    const int K = k_bound;
    Cnf cnf;
    cnf.var_count = vars.total_vars();
    for (int i = 1; i <= dataset.transaction_count(); ++i) {
        const int len = vars.transaction_length(i);
        for (int j = 1; j <= len; ++j)
            for (int k = 2; k <= std::min(j, K); ++k) {
                Clause clause{neg(vars.support_var(i, j, k))};
                for (int j2 = std::max(k - 1, j - gamma); j2 <= j - 1; ++j2)
                    clause.push_back(pos(vars.support_var(i, j2, k - 1)));
                cnf.add_clause(std::move(clause));
            }
    }
    return cnf;
}

Cnf encode_dep_gap(const Dataset& dataset, int k_bound, const GapTable& table, const VarMap& vars) {
    if (table.k_max() < k_bound || table.vocab_size() != vars.vocab_size())
        raise(Errc::PartialGapTable, "gap table does not cover 1..K x V");
    const int K = k_bound;
    Cnf cnf;
    cnf.var_count = vars.total_vars();
    for (int i = 1; i <= dataset.transaction_count(); ++i) {
        const int len = vars.transaction_length(i);
        for (int j = 1; j <= len; ++j)
            for (int k = 2; k <= std::min(j, K); ++k)
                for (int v = 0; v < vars.vocab_size(); ++v) {
                    const int gap = table.at(k - 1, v);
                    Clause clause{neg(vars.support_var(i, j, k)), neg(vars.pattern_var(k - 1, v))};
                    for (int j2 = std::max(k - 1, j - gap); j2 <= j - 1; ++j2)
                        clause.push_back(pos(vars.support_var(i, j2, k - 1)));
                    cnf.add_clause(std::move(clause));
                }
    }
    return cnf;
}

Cnf encode_max_span(const Dataset& dataset, int k_bound, int gamma, const VarMap& vars) {
    assert(gamma >= 0);
    const int K = k_bound;
    Cnf cnf;
    cnf.var_count = vars.total_vars();
    for (int i = 1; i <= dataset.transaction_count(); ++i) {
        const int len = vars.transaction_length(i);
        // f(i,j) <-> t(i,j,1)
        for (int j = 1; j <= len; ++j) {
            cnf.add_clause({neg(vars.support_var(i, j, 1)), pos(vars.span_first_var(i, j))});
            cnf.add_clause({pos(vars.support_var(i, j, 1)), neg(vars.span_first_var(i, j))});
        }
        // every used support marks its window position
        for (int j = 1; j <= len; ++j)
            for (int k = 1; k <= std::min(j, K); ++k)
                cnf.add_clause({neg(vars.support_var(i, j, k)), pos(vars.span_used_var(i, j))});
        // used positions extend left down to the first support
        for (int j = 1; j <= len; ++j) {
            Clause clause{neg(vars.span_used_var(i, j)), pos(vars.span_first_var(i, j))};
            if (j >= 2) clause.push_back(pos(vars.span_used_var(i, j - 1)));
            cnf.add_clause(std::move(clause));
        }
        // windows wider than gamma+1 positions are forbidden for covered transactions
        for (int j = 1; j + gamma + 1 <= len; ++j)
            cnf.add_clause({neg(vars.cover_var(i)), neg(vars.span_used_var(i, j)),
                            neg(vars.span_used_var(i, j + gamma + 1))});
    }
    return cnf;
}

Cnf encode_regular(const Dfa& dfa, int k_bound, const VarMap& vars) {
    assert(dfa.states == vars.layout().automaton_states);
    const int K = k_bound;
    const int eps = vars.eps_sym();
    Cnf cnf;
    cnf.var_count = vars.total_vars();

    for (int k = 0; k <= K; ++k) {
        Clause at_least;
        for (int s = 0; s < dfa.states; ++s) at_least.push_back(pos(vars.state_var(k, s)));
        cnf.add_clause(std::move(at_least));
        for (int a = 0; a < dfa.states; ++a)
            for (int b = a + 1; b < dfa.states; ++b)
                cnf.add_clause({neg(vars.state_var(k, a)), neg(vars.state_var(k, b))});
    }
    cnf.add_clause({pos(vars.state_var(0, dfa.start))});

    for (int k = 1; k <= K; ++k)
        for (int s = 0; s < dfa.states; ++s) {
            for (int v = 0; v < vars.vocab_size(); ++v)
                cnf.add_clause({neg(vars.state_var(k - 1, s)), neg(vars.pattern_var(k, v)),
                                pos(vars.state_var(k, dfa.next(s, v)))});
            cnf.add_clause({neg(vars.state_var(k - 1, s)), neg(vars.pattern_var(k, eps)),
                            pos(vars.state_var(k, s))});
        }

    Clause accept;
    for (int s = 0; s < dfa.states; ++s)
        if (dfa.accepting[s]) accept.push_back(pos(vars.state_var(K, s)));
    if (accept.empty())
        cnf.add_clause({neg(vars.state_var(0, dfa.start))}); // rejects everything
    else
        cnf.add_clause(std::move(accept));
    return cnf;
}

Problem assemble(const Dataset& dataset, const MiningConfig& config) {
    config.validate(dataset);
    const int K = compute_k(dataset, config.minsup);

    std::optional<Dfa> dfa;
    if (config.regex) dfa = compile_regex(*config.regex, dataset.vocabulary);

    VarLayout layout;
    layout.counter = true;
    layout.span = config.max_span.has_value();
    layout.automaton_states = dfa ? dfa->states : 0;
    VarMap vars(dataset, K, layout);

    const bool gap_active = config.max_gap.has_value() || config.dep_gap.has_value();
    Cnf cnf = encode_base(dataset, K, vars, /*order_clauses=*/!gap_active);
    if (config.max_gap) cnf.append(encode_max_gap(dataset, K, *config.max_gap, vars));
    if (config.dep_gap) {
        const GapTable table = build_gap_table(*config.dep_gap, K, dataset.vocabulary);
        cnf.append(encode_dep_gap(dataset, K, table, vars));
    }
    if (config.max_span) cnf.append(encode_max_span(dataset, K, *config.max_span, vars));
    if (dfa) cnf.append(encode_regular(*dfa, K, vars));

    std::vector<Lit> cover_lits;
    cover_lits.reserve(dataset.transaction_count());
    for (int i = 1; i <= dataset.transaction_count(); ++i)
        cover_lits.push_back(pos(vars.cover_var(i)));
    cnf.append(encode_cardinality(cover_lits, config.minsup, vars));

    // the empty pattern is not a pattern
    cnf.add_clause({neg(vars.pattern_var(1, vars.eps_sym()))});

    return Problem{K, std::move(vars), std::move(cnf), std::move(dfa)};
}

} // namespace seqsat
