#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lscr/search_core.hpp"

namespace lscr {

struct GraphGenSpec {
    std::size_t vertex_count = 0;
    double density = 0.0; // |E| / |V|
    std::size_t label_universe = 0;
    std::size_t class_count = 0;
    std::size_t instances_per_class = 0;
    std::uint64_t seed = 0;
};

// Scale-free-ish schema-bearing digraph: class vertices, rdf:type edges from
// instances, remaining edges by preferential attachment on targets with
// Zipf(s=1.1) labels. Deterministic under seed.
KnowledgeGraph gen_graph(const GraphGenSpec& spec);

struct QueryGenSpec {
    std::size_t count_true = 0;
    std::size_t count_false = 0;
    // Exactly one of constraint / magnitude: a fixed constraint shared by all
    // queries, or per-query random constraints matching ~magnitude vertices.
    std::optional<SubstructureConstraint> constraint;
    std::optional<std::size_t> magnitude;
    std::uint64_t seed = 0;
};

// Why a false query is false: the label constraint blocks it, the
// substructure constraint blocks it, or both do.
enum class FalseKind : std::uint8_t { LabelBlocked = 0, SubstructureBlocked = 1, BothBlocked = 2 };

struct GeneratedQuery {
    LscrQuery query;
    bool expected = false;
    std::uint64_t tree_size = 0;     // UIS pops when the query was classified
    std::uint64_t min_threshold = 0; // the discard threshold drawn for it
    int band = 0;                    // label-size band 0/1/2
    std::optional<FalseKind> false_kind;
};

struct GeneratedQuerySet {
    std::vector<GeneratedQuery> true_queries;
    std::vector<GeneratedQuery> false_queries;
};

GeneratedQuerySet gen_queries(const KnowledgeGraph& g, const QueryGenSpec& spec);

// Random constraint whose match count lands in [0.8m, 1.2m]. Seeds from a
// random instance vertex's incident edge patterns and adjusts until the
// magnitude fits; throws Unachievable when the retry budget runs out.
SubstructureConstraint gen_constraint_with_magnitude(const KnowledgeGraph& g, std::size_t m,
                                                     std::uint64_t seed);

// Plain label-constrained BFS, fresh visited set. Oracle building block,
// independent of the close/LCS machinery.
bool label_bfs_reachable(const KnowledgeGraph& g, VertexId from, VertexId to, LabelSet labels);

// Naive two-procedure decision: compute V(S,G) by per-vertex satisfies, then
// test s ->L v and v ->L t by independent BFS runs. The project's root
// correctness anchor.
bool oracle_lscr(const KnowledgeGraph& g, const LscrQuery& q);

// Query set file: one query per line,
//   s<TAB>t<TAB>label,label,...<TAB>constraint-file-ref<TAB>expected(T|F)
// Constraint files are written next to the query set; refs are relative.
void save_query_set(const GeneratedQuerySet& set, const KnowledgeGraph& g,
                    const std::filesystem::path& path);

struct LoadedQuery {
    LscrQuery query;
    bool expected = false;
};

std::vector<LoadedQuery> load_query_set(const std::filesystem::path& path,
                                        const KnowledgeGraph& g);

} // namespace lscr
