#include "lscr/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include "lscr/errors.hpp"

namespace lscr {

bool VertexSetResult::contains(VertexId v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

// Splits into words plus the structural tokens "{", "}" and ".". A '.'
// counts as structural only when it stands alone or ends a word, so dotted
// vertex names survive everywhere except in final position of a term.
std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string word;
    auto flush = [&] {
        if (word.empty()) return;
        if (word.size() > 1 && word.back() == '.') {
            tokens.push_back(word.substr(0, word.size() - 1));
            tokens.push_back(".");
        } else {
            tokens.push_back(word);
        }
        word.clear();
    };
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == '{' || c == '}') {
            flush();
            tokens.push_back(std::string(1, c));
        } else {
            word += c;
        }
    }
    flush();
    return tokens;
}

PatternTerm parse_term(const std::string& token, const KnowledgeGraph& g) {
    if (token == "{" || token == "}" || token == "." || token == "?")
        throw SyntaxError("incomplete triple pattern near '" + token + "'");
    if (token.size() >= 2 && token[0] == '?') return PatternTerm::variable(token.substr(1));
    auto id = g.vertex_id(token);
    if (!id) throw UnknownVertexName("unknown vertex name: " + token);
    return PatternTerm::concrete(*id);
}

// Union-find over term nodes; used for the parse-time connectivity check.
struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

SubstructureConstraint parse_constraint(std::string_view text, const KnowledgeGraph& g) {
    std::vector<std::string> tokens = tokenize(text);
    std::size_t pos = 0;
    auto need = [&](const char* what) -> const std::string& {
        if (pos >= tokens.size()) throw SyntaxError(std::string("expected ") + what);
        return tokens[pos++];
    };

    if (!iequals(need("SELECT"), "SELECT")) throw SyntaxError("constraint must start with SELECT");
    const std::string& focus_tok = need("focus variable");
    if (focus_tok.size() < 2 || focus_tok[0] != '?')
        throw SyntaxError("SELECT needs a ?variable, got: " + focus_tok);
    if (!iequals(need("WHERE"), "WHERE")) throw SyntaxError("expected WHERE");
    if (need("{") != "{") throw SyntaxError("expected {");

    SubstructureConstraint s;
    s.focus = focus_tok.substr(1);

    while (true) {
        if (pos >= tokens.size()) throw SyntaxError("unterminated pattern block");
        if (tokens[pos] == "}") {
            ++pos;
            break;
        }
        PatternTerm subject = parse_term(need("subject term"), g);
        const std::string& pred_tok = need("predicate");
        if (pred_tok == "." || pred_tok == "}") throw SyntaxError("incomplete triple pattern");
        auto pred = g.label_id(pred_tok);
        if (!pred) throw UnknownLabelName("unknown label name: " + pred_tok);
        PatternTerm object = parse_term(need("object term"), g);
        if (pos < tokens.size() && tokens[pos] == ".") ++pos;
        s.patterns.push_back({std::move(subject), *pred, std::move(object)});
    }
    if (pos != tokens.size()) throw SyntaxError("trailing tokens after }");

    bool focus_used = false;
    for (const TriplePattern& p : s.patterns) {
        for (const PatternTerm* t : {&p.subject, &p.object}) {
            if (t->is_variable && t->var == s.focus) focus_used = true;
            if (!t->is_variable) s.concrete_vertices.push_back(t->vertex);
        }
    }
    if (!focus_used) throw FocusUnused("focus variable ?" + s.focus + " appears in no pattern");
    std::sort(s.concrete_vertices.begin(), s.concrete_vertices.end());
    s.concrete_vertices.erase(
        std::unique(s.concrete_vertices.begin(), s.concrete_vertices.end()),
        s.concrete_vertices.end());

    // Connectivity over terms: variables and distinct concrete vertices are
    // nodes, each pattern joins its endpoints.
    std::map<std::string, int> node_of;
    auto node_id = [&](const PatternTerm& t) {
        std::string key = t.is_variable ? "?" + t.var : "v" + std::to_string(t.vertex);
        auto [it, _] = node_of.emplace(key, static_cast<int>(node_of.size()));
        return it->second;
    };
    std::vector<std::pair<int, int>> joins;
    for (const TriplePattern& p : s.patterns)
        joins.emplace_back(node_id(p.subject), node_id(p.object));
    DisjointSet ds(node_of.size());
    for (auto [a, b] : joins) ds.unite(a, b);
    int root = ds.find(0);
    for (std::size_t i = 1; i < node_of.size(); ++i)
        if (ds.find(static_cast<int>(i)) != root)
            throw SyntaxError("pattern graph is disconnected");

    return s;
}

std::string constraint_to_text(const SubstructureConstraint& s, const KnowledgeGraph& g) {
    std::string out = "SELECT ?" + s.focus + " WHERE {";
    for (const TriplePattern& p : s.patterns) {
        auto term = [&](const PatternTerm& t) {
            return t.is_variable ? "?" + t.var : g.vertex_name(t.vertex);
        };
        out += " " + term(p.subject) + " " + g.label_name(p.predicate) + " " + term(p.object) + " .";
    }
    out += " }";
    return out;
}

namespace {

struct Binding {
    std::vector<std::pair<std::string, VertexId>> vars;

    std::optional<VertexId> get(const std::string& name) const {
        for (const auto& [n, v] : vars)
            if (n == name) return v;
        return std::nullopt;
    }
};

std::optional<VertexId> resolve(const PatternTerm& t, const Binding& b) {
    if (!t.is_variable) return t.vertex;
    return b.get(t.var);
}

// How many graph probes matching this pattern would take under the current
// binding; used to pick the most constrained pattern next.
std::size_t candidate_cost(const KnowledgeGraph& g, const TriplePattern& p, const Binding& b) {
    auto subj = resolve(p.subject, b);
    auto obj = resolve(p.object, b);
    if (subj && obj) return 1;
    if (subj) return g.out(*subj).size();
    if (obj) return g.in(*obj).size();
    return g.edge_count();
}

bool match_patterns(const KnowledgeGraph& g, const std::vector<TriplePattern>& patterns,
                    std::vector<bool>& done, Binding& binding, std::size_t remaining) {
    if (remaining == 0) return true;

    std::size_t best = patterns.size();
    std::size_t best_cost = 0;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        if (done[i]) continue;
        std::size_t cost = candidate_cost(g, patterns[i], binding);
        if (best == patterns.size() || cost < best_cost) {
            best = i;
            best_cost = cost;
        }
    }

    const TriplePattern& p = patterns[best];
    done[best] = true;
    auto subj = resolve(p.subject, binding);
    auto obj = resolve(p.object, binding);

    auto try_bind = [&](VertexId sv, VertexId ov) {
        std::size_t pushed = 0;
        if (!subj && p.subject.is_variable) {
            binding.vars.emplace_back(p.subject.var, sv);
            ++pushed;
        }
        // Re-resolve in case subject and object share the variable name.
        if (!resolve(p.object, binding) && p.object.is_variable) {
            binding.vars.emplace_back(p.object.var, ov);
            ++pushed;
        }
        bool ok = match_patterns(g, patterns, done, binding, remaining - 1);
        while (pushed--) binding.vars.pop_back();
        return ok;
    };

    bool found = false;
    if (subj && obj) {
        found = g.has_edge(*subj, p.predicate, *obj) && try_bind(*subj, *obj);
    } else if (subj) {
        for (const Arc& a : g.out(*subj)) {
            if (a.label != p.predicate) continue;
            if (p.object.is_variable) {
                auto cur = resolve(p.object, binding);
                if (cur && *cur != a.other) continue;
            }
            if (try_bind(*subj, a.other)) {
                found = true;
                break;
            }
        }
    } else if (obj) {
        for (const Arc& a : g.in(*obj)) {
            if (a.label != p.predicate) continue;
            if (p.subject.is_variable) {
                auto cur = resolve(p.subject, binding);
                if (cur && *cur != a.other) continue;
            }
            if (try_bind(a.other, *obj)) {
                found = true;
                break;
            }
        }
    } else {
        // Both endpoints unbound; connectivity makes this rare, full scan.
        for (const Edge& e : g.edges()) {
            if (e.label != p.predicate) continue;
            if (p.subject.var == p.object.var && e.source != e.target) continue;
            if (try_bind(e.source, e.target)) {
                found = true;
                break;
            }
        }
    }

    done[best] = false;
    return found;
}

} // namespace

bool satisfies(const KnowledgeGraph& g, VertexId v, const SubstructureConstraint& s) {
    Binding binding;
    binding.vars.emplace_back(s.focus, v);
    std::vector<bool> done(s.patterns.size(), false);
    return match_patterns(g, s.patterns, done, binding, s.patterns.size());
}

VertexSetResult match_all(const KnowledgeGraph& g, const SubstructureConstraint& s) {
    // Candidate seed: the focus-adjacent pattern producing the fewest
    // candidates.
    std::vector<VertexId> best_candidates;
    bool have = false;

    auto consider = [&](std::vector<VertexId> cand) {
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        if (!have || cand.size() < best_candidates.size()) {
            best_candidates = std::move(cand);
            have = true;
        }
    };

    for (const TriplePattern& p : s.patterns) {
        bool subj_focus = p.subject.is_variable && p.subject.var == s.focus;
        bool obj_focus = p.object.is_variable && p.object.var == s.focus;
        if (subj_focus) {
            std::vector<VertexId> cand;
            if (!p.object.is_variable) {
                for (const Arc& a : g.in(p.object.vertex))
                    if (a.label == p.predicate) cand.push_back(a.other);
            } else {
                for (const Edge& e : g.edges())
                    if (e.label == p.predicate) cand.push_back(e.source);
            }
            consider(std::move(cand));
        }
        if (obj_focus) {
            std::vector<VertexId> cand;
            if (!p.subject.is_variable) {
                for (const Arc& a : g.out(p.subject.vertex))
                    if (a.label == p.predicate) cand.push_back(a.other);
            } else {
                for (const Edge& e : g.edges())
                    if (e.label == p.predicate) cand.push_back(e.target);
            }
            consider(std::move(cand));
        }
    }

    VertexSetResult result;
    for (VertexId v : best_candidates)
        if (satisfies(g, v, s)) result.members.push_back(v);
    return result;
}

} // namespace lscr
