#pragma once

#include <string>

#include "lscr/graph.hpp"
#include "lscr/pattern.hpp"
#include "lscr/rng.hpp"
#include "lscr/search_core.hpp"

namespace lscr::test {

// Five-vertex running-example graph used across the suites.
inline constexpr const char* kFixtureA =
    "v0\tfriendOf\tv1\n"
    "v1\tfriendOf\tv3\n"
    "v2\tfriendOf\tv3\n"
    "v0\tlikes\tv2\n"
    "v0\tadvisorOf\tv2\n"
    "v2\tfollows\tv4\n"
    "v3\tlikes\tv4\n"
    "v4\thates\tv1\n";

inline constexpr const char* kConstraintS0 = "SELECT ?x WHERE { ?x friendOf v3 . v3 likes ?y }";

inline KnowledgeGraph fixture_a() { return KnowledgeGraph::from_string(kFixtureA); }

inline VertexId vid(const KnowledgeGraph& g, std::string_view name) {
    return *g.vertex_id(name);
}

inline LabelSet labels_of(const KnowledgeGraph& g, std::initializer_list<const char*> names) {
    LabelSet out;
    for (const char* n : names) out.add(*g.label_id(n));
    return out;
}

inline SubstructureConstraint s0(const KnowledgeGraph& g) {
    return parse_constraint(kConstraintS0, g);
}

inline LscrQuery make_query(const KnowledgeGraph& g, std::string_view s, std::string_view t,
                            std::initializer_list<const char*> labels,
                            const SubstructureConstraint& c) {
    return LscrQuery{vid(g, s), vid(g, t), labels_of(g, labels), c};
}

// Random edge-labeled graph for property tests; schema-free unless
// with_schema is set (then one extra class vertex with rdf:type edges).
inline KnowledgeGraph random_graph(Rng& rng, std::size_t vertices, std::size_t labels,
                                   double density, bool with_schema = false) {
    KnowledgeGraph::Builder b;
    auto vname = [](std::size_t i) { return "v" + std::to_string(i); };
    std::size_t edges = static_cast<std::size_t>(density * static_cast<double>(vertices)) + 1;
    for (std::size_t e = 0; e < edges; ++e) {
        std::size_t s = rng.index(vertices), t = rng.index(vertices);
        b.add_triple(vname(s), "l" + std::to_string(rng.index(labels)), vname(t));
    }
    // Make sure every vertex exists even if it drew no random edge.
    for (std::size_t v = 0; v + 1 < vertices; ++v)
        b.add_triple(vname(v), "l0", vname(v + 1));
    if (with_schema)
        for (std::size_t v = 0; v < vertices; v += 3)
            b.add_triple(vname(v), "rdf:type", "Cls");
    return b.finish();
}

// Random constraint with 1-2 patterns anchored on the focus, built from
// edges actually present so match sets are usually nonempty.
inline SubstructureConstraint random_constraint(Rng& rng, const KnowledgeGraph& g) {
    auto random_edge = [&]() -> Edge {
        return g.edges()[rng.index(g.edge_count())];
    };
    SubstructureConstraint s;
    s.focus = "x";
    Edge e = random_edge();
    switch (rng.index(3)) {
        case 0:
            s.patterns.push_back({PatternTerm::variable("x"), e.label,
                                  PatternTerm::concrete(e.target)});
            break;
        case 1:
            s.patterns.push_back({PatternTerm::concrete(e.source), e.label,
                                  PatternTerm::variable("x")});
            break;
        default:
            s.patterns.push_back({PatternTerm::variable("x"), e.label,
                                  PatternTerm::variable("y")});
            break;
    }
    if (rng.coin()) {
        Edge e2 = random_edge();
        s.patterns.push_back({PatternTerm::variable("x"), e2.label,
                              PatternTerm::variable("z")});
    }
    for (const TriplePattern& p : s.patterns) {
        if (!p.subject.is_variable) s.concrete_vertices.push_back(p.subject.vertex);
        if (!p.object.is_variable) s.concrete_vertices.push_back(p.object.vertex);
    }
    return s;
}

inline LscrQuery random_query(Rng& rng, const KnowledgeGraph& g) {
    LscrQuery q;
    q.source = static_cast<VertexId>(rng.index(g.vertex_count()));
    q.target = static_cast<VertexId>(rng.index(g.vertex_count()));
    LabelSet l;
    for (std::size_t i = 0; i < g.label_count(); ++i)
        if (rng.coin()) l.add(static_cast<LabelId>(i));
    if (l.empty()) l.add(static_cast<LabelId>(rng.index(g.label_count())));
    q.labels = l;
    q.constraint = random_constraint(rng, g);
    return q;
}

} // namespace lscr::test
