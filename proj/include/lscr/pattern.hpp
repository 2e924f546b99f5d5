#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lscr/graph.hpp"

namespace lscr {

// One endpoint of a triple pattern: a concrete vertex or a named variable.
struct PatternTerm {
    bool is_variable = false;
    VertexId vertex = kNoVertex;
    std::string var;

    static PatternTerm concrete(VertexId v) { return {false, v, {}}; }
    static PatternTerm variable(std::string name) { return {true, kNoVertex, std::move(name)}; }

    friend bool operator==(const PatternTerm&, const PatternTerm&) = default;
};

struct TriplePattern {
    PatternTerm subject;
    LabelId predicate;
    PatternTerm object;
};

// Basic graph pattern with a distinguished focus variable. A vertex v
// satisfies the constraint when binding focus := v extends to a homomorphism
// of the whole pattern into the graph (existential semantics: every pattern
// matches at least one edge, shared variables bind consistently).
struct SubstructureConstraint {
    std::string focus;
    std::vector<VertexId> concrete_vertices; // sorted, deduplicated
    std::vector<TriplePattern> patterns;
};

struct VertexSetResult {
    std::vector<VertexId> members; // sorted, duplicate-free

    bool contains(VertexId v) const;
    std::size_t size() const { return members.size(); }
};

// Grammar: SELECT ?x WHERE { term label term . term label term ... }
// where term is a vertex name or ?name; keywords case-insensitive; the
// per-triple trailing '.' is optional. Names resolve against the graph.
SubstructureConstraint parse_constraint(std::string_view text, const KnowledgeGraph& g);

std::string constraint_to_text(const SubstructureConstraint& s, const KnowledgeGraph& g);

bool satisfies(const KnowledgeGraph& g, VertexId v, const SubstructureConstraint& s);

// All vertices satisfying s, sorted. Seeds candidates from the most
// selective focus-adjacent pattern, then filters with satisfies.
VertexSetResult match_all(const KnowledgeGraph& g, const SubstructureConstraint& s);

} // namespace lscr
