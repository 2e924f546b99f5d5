#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lscr/label_set.hpp"

namespace lscr {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = 0xFFFFFFFFu;

struct Edge {
    VertexId source;
    LabelId label;
    VertexId target;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Adjacency entry: (label, neighbor). For out-adjacency the neighbor is the
// edge target, for in-adjacency the source.
struct Arc {
    LabelId label;
    VertexId other;

    friend bool operator==(const Arc&, const Arc&) = default;
};

// Classes and instance/subclass relations recognized from schema triples.
struct SchemaInfo {
    std::vector<VertexId> classes; // sorted
    std::unordered_map<VertexId, std::vector<VertexId>> instance_of;  // instance -> classes
    std::unordered_map<VertexId, std::vector<VertexId>> subclass_of;  // class -> superclasses

    bool is_class(VertexId v) const;
};

struct IngestOptions {
    std::string type_predicate = "rdf:type";
    std::string subclass_predicate = "rdfs:subClassOf";
};

// Immutable edge-labeled graph with dense interned vertex/label ids, dual
// adjacency, and schema metadata. Safe for unlimited concurrent readers once
// built.
class KnowledgeGraph {
public:
    // Incremental construction used by the file loader and the synthetic
    // generator. Interns names densely in first-appearance order (subject
    // before object per triple) and silently drops exact duplicate triples.
    class Builder {
    public:
        explicit Builder(IngestOptions options = {}) : options_(std::move(options)) {}

        void add_triple(std::string_view subject, std::string_view predicate,
                        std::string_view object);
        KnowledgeGraph finish();

    private:
        friend class KnowledgeGraph;
        IngestOptions options_;
        std::vector<std::string> vertex_names_;
        std::vector<std::string> label_names_;
        std::unordered_map<std::string, VertexId> vertex_ids_;
        std::unordered_map<std::string, LabelId> label_ids_;
        std::vector<Edge> edges_;
        struct EdgeKeyHash {
            std::size_t operator()(const Edge& e) const;
        };
        std::unordered_map<Edge, bool, EdgeKeyHash> seen_;
        VertexId intern_vertex(std::string_view name);
        LabelId intern_label(std::string_view name);
    };

    static KnowledgeGraph load(const std::filesystem::path& path, IngestOptions options = {});
    static KnowledgeGraph from_stream(std::istream& in, IngestOptions options = {});
    static KnowledgeGraph from_string(std::string_view text, IngestOptions options = {});

    std::size_t vertex_count() const { return vertex_names_.size(); }
    std::size_t label_count() const { return label_names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    std::span<const Edge> edges() const { return edges_; }
    std::span<const Arc> out(VertexId v) const { return out_adjacency_[v]; }
    std::span<const Arc> in(VertexId v) const { return in_adjacency_[v]; }

    // Out-edges of v whose label is in mask, in stored (first-appearance)
    // order. The search loops iterate raw adjacency instead; this is the
    // inspection/query surface.
    std::vector<Arc> out_edges(VertexId v, LabelSet mask) const;

    bool has_edge(VertexId s, LabelId l, VertexId t) const;

    const std::string& vertex_name(VertexId v) const { return vertex_names_[v]; }
    const std::string& label_name(LabelId l) const { return label_names_[l]; }
    std::span<const std::string> label_names() const { return label_names_; }

    std::optional<VertexId> vertex_id(std::string_view name) const;
    std::optional<LabelId> label_id(std::string_view name) const;

    LabelSet full_label_mask() const { return LabelSet::full(label_count()); }

    const SchemaInfo& schema() const { return schema_; }

    // All instances of class c, sorted by VertexId. Throws UnknownClass when
    // c is not a recognized class vertex.
    std::vector<VertexId> instances_of_class(VertexId c) const;

    // Canonical triple serialization: edges in stored order, one TSV line
    // each. Reloading the result reproduces ids and edges exactly; the graph
    // fingerprint is a hash of this text.
    std::string serialize_triples() const;
    void save(const std::filesystem::path& path) const;

    std::uint64_t fingerprint() const { return fingerprint_; }

private:
    friend class Builder;
    KnowledgeGraph() = default;

    std::vector<std::string> vertex_names_;
    std::vector<std::string> label_names_;
    std::unordered_map<std::string, VertexId> vertex_ids_;
    std::unordered_map<std::string, LabelId> label_ids_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Arc>> out_adjacency_;
    std::vector<std::vector<Arc>> in_adjacency_;
    SchemaInfo schema_;
    std::uint64_t fingerprint_ = 0;
};

std::uint64_t fnv1a64(std::string_view data);

} // namespace lscr
