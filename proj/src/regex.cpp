#include "seqsat/encoder.hpp"
#include "seqsat/errors.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace seqsat {

bool Dfa::accepts(const std::vector<int>& word) const {
    int s = start;
    for (int v : word) s = next(s, v);
    return accepting[s];
}

namespace {

struct RegexToken {
    enum Kind { LParen, RParen, Alt, Dot, Star, Literal } kind;
    int symbol = -1; // vocabulary index for Literal
};

std::vector<RegexToken> lex_regex(const std::string& text, const std::vector<std::string>& vocab) {
    std::vector<RegexToken> tokens;
    std::size_t i = 0;
    const std::string star_utf8 = "\xe2\x8b\x86"; // "⋆"
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    auto is_punct = [](char c) { return c == '(' || c == ')' || c == '|' || c == '.' || c == '*'; };

    while (i < text.size()) {
        const char c = text[i];
        if (is_space(c)) {
            ++i;
        } else if (c == '(') {
            tokens.push_back({RegexToken::LParen});
            ++i;
        } else if (c == ')') {
            tokens.push_back({RegexToken::RParen});
            ++i;
        } else if (c == '|') {
            tokens.push_back({RegexToken::Alt});
            ++i;
        } else if (c == '.') {
            tokens.push_back({RegexToken::Dot});
            ++i;
        } else if (c == '*') {
            tokens.push_back({RegexToken::Star});
            ++i;
        } else if (text.compare(i, star_utf8.size(), star_utf8) == 0) {
            tokens.push_back({RegexToken::Star});
            i += star_utf8.size();
        } else {
            std::size_t j = i;
            while (j < text.size() && !is_space(text[j]) && !is_punct(text[j]) &&
                   text.compare(j, star_utf8.size(), star_utf8) != 0)
                ++j;
            const std::string word = text.substr(i, j - i);
            int symbol = -1;
            for (std::size_t v = 0; v < vocab.size(); ++v)
                if (vocab[v] == word) {
                    symbol = static_cast<int>(v);
                    break;
                }
            if (symbol < 0)
                raise(Errc::TokenNotInVocabulary, "regex token '" + word + "' not in the vocabulary");
            tokens.push_back({RegexToken::Literal, symbol});
            i = j;
        }
    }
    return tokens;
}

// Thompson construction. Edge labels: kEps for epsilon, kAny for ".", else a
// vocabulary index.
constexpr int kEps = -1;
constexpr int kAny = -2;

struct Nfa {
    struct Edge {
        int label;
        int to;
    };
    std::vector<std::vector<Edge>> states;

    int add_state() {
        states.emplace_back();
        return static_cast<int>(states.size()) - 1;
    }
    void add_edge(int from, int label, int to) { states[from].push_back({label, to}); }
};

struct Fragment {
    int start;
    int accept;
};

class RegexParser {
  public:
    RegexParser(const std::vector<RegexToken>& tokens, Nfa& nfa) : tokens_(tokens), nfa_(nfa) {}

    Fragment parse() {
        Fragment f = parse_alt();
        if (pos_ != tokens_.size()) raise(Errc::RegexSyntax, "unexpected ')' in regular expression");
        return f;
    }

  private:
    bool at_end() const { return pos_ >= tokens_.size(); }
    const RegexToken& peek() const { return tokens_[pos_]; }

    Fragment parse_alt() {
        Fragment f = parse_concat();
        while (!at_end() && peek().kind == RegexToken::Alt) {
            ++pos_;
            Fragment g = parse_concat();
            const int s = nfa_.add_state(), a = nfa_.add_state();
            nfa_.add_edge(s, kEps, f.start);
            nfa_.add_edge(s, kEps, g.start);
            nfa_.add_edge(f.accept, kEps, a);
            nfa_.add_edge(g.accept, kEps, a);
            f = {s, a};
        }
        return f;
    }

    Fragment parse_concat() {
        const int s = nfa_.add_state();
        Fragment f{s, s};
        while (!at_end() && peek().kind != RegexToken::Alt && peek().kind != RegexToken::RParen) {
            Fragment g = parse_atom();
            nfa_.add_edge(f.accept, kEps, g.start);
            f.accept = g.accept;
        }
        return f;
    }

    Fragment parse_atom() {
        const RegexToken token = peek();
        ++pos_;
        switch (token.kind) {
        case RegexToken::Literal: {
            const int s = nfa_.add_state(), a = nfa_.add_state();
            nfa_.add_edge(s, token.symbol, a);
            return {s, a};
        }
        case RegexToken::Dot: {
            const int s = nfa_.add_state(), a = nfa_.add_state();
            nfa_.add_edge(s, kAny, a);
            return {s, a};
        }
        case RegexToken::Star: { // any-sequence wildcard: (.)* as one state
            const int s = nfa_.add_state();
            nfa_.add_edge(s, kAny, s);
            return {s, s};
        }
        case RegexToken::LParen: {
            Fragment f = parse_alt();
            if (at_end() || peek().kind != RegexToken::RParen)
                raise(Errc::RegexSyntax, "missing ')' in regular expression");
            ++pos_;
            return f;
        }
        default:
            raise(Errc::RegexSyntax, "unexpected token in regular expression");
        }
    }

    const std::vector<RegexToken>& tokens_;
    Nfa& nfa_;
    std::size_t pos_ = 0;
};

std::vector<int> epsilon_closure(const Nfa& nfa, std::vector<int> set) {
    std::vector<bool> in(nfa.states.size(), false);
    for (int s : set) in[s] = true;
    std::vector<int> stack = set;
    while (!stack.empty()) {
        const int s = stack.back();
        stack.pop_back();
        for (const auto& edge : nfa.states[s])
            if (edge.label == kEps && !in[edge.to]) {
                in[edge.to] = true;
                set.push_back(edge.to);
                stack.push_back(edge.to);
            }
    }
    std::sort(set.begin(), set.end());
    return set;
}

} // namespace

Dfa compile_regex(const std::string& pattern, const std::vector<std::string>& vocabulary) {
    const auto tokens = lex_regex(pattern, vocabulary);
    Nfa nfa;
    RegexParser parser(tokens, nfa);
    const Fragment top = parser.parse();

    const int alphabet = static_cast<int>(vocabulary.size());
    Dfa dfa;
    dfa.alphabet = alphabet;

    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> subsets;
    auto intern = [&](std::vector<int> subset) {
        auto [it, inserted] = ids.try_emplace(std::move(subset), static_cast<int>(subsets.size()));
        if (inserted) {
            subsets.push_back(it->first);
            dfa.accepting.push_back(std::binary_search(it->first.begin(), it->first.end(), top.accept));
        }
        return it->second;
    };

    dfa.start = intern(epsilon_closure(nfa, {top.start}));
    for (std::size_t q = 0; q < subsets.size(); ++q) {
        for (int v = 0; v < alphabet; ++v) {
            std::vector<int> moved;
            for (int s : subsets[q])
                for (const auto& edge : nfa.states[s])
                    if (edge.label == v || edge.label == kAny) moved.push_back(edge.to);
            std::sort(moved.begin(), moved.end());
            moved.erase(std::unique(moved.begin(), moved.end()), moved.end());
            dfa.delta.push_back(intern(epsilon_closure(nfa, std::move(moved))));
        }
    }
    dfa.states = static_cast<int>(subsets.size());
    return dfa;
}

} // namespace seqsat
