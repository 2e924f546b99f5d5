#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <unordered_map>
#include <vector>

#include "lscr/graph.hpp"
#include "lscr/label_set.hpp"

namespace lscr {

inline constexpr VertexId kNoOwner = kNoVertex;

// Landmark set plus the subgraph-ownership attribute produced by the
// rotating multi-source BFS. owner[u] == u for landmarks; vertices no
// landmark reaches stay unowned.
struct LandmarkAssignment {
    std::vector<VertexId> landmarks;      // selection order
    std::vector<VertexId> owner;          // per vertex, kNoOwner when unowned
    std::vector<std::int32_t> landmark_pos; // per vertex, -1 for non-landmarks

    bool is_landmark(VertexId v) const { return landmark_pos[v] >= 0; }
    VertexId owner_of(VertexId v) const { return owner[v]; }

    static LandmarkAssignment empty(std::size_t vertex_count);
};

// Per-landmark table of minimal path label sets towards each owned vertex,
// restricted to the landmark's own subgraph. The landmark itself carries the
// implicit entry {{}} (empty path) and never stores a key: lookups against
// the landmark answer through that implicit entry.
class InternalIndex {
public:
    InternalIndex() = default;
    explicit InternalIndex(VertexId landmark) : landmark_(landmark) {}

    // Insert-routine semantics: true means the pair is novel and the caller
    // keeps expanding from it.
    bool insert(VertexId v, LabelSet l) {
        if (v == landmark_) return l.empty(); // implicit {{}} dominates the rest
        return entries_[v].insert(l);
    }

    bool check(VertexId t, LabelSet l) const {
        if (t == landmark_) return true;
        auto it = entries_.find(t);
        return it != entries_.end() && it->second.admits(l);
    }

    const LabelSetFamily* find(VertexId v) const {
        auto it = entries_.find(v);
        return it == entries_.end() ? nullptr : &it->second;
    }

    VertexId landmark() const { return landmark_; }
    std::size_t size() const { return entries_.size(); }
    const std::unordered_map<VertexId, LabelSetFamily>& entries() const { return entries_; }
    std::unordered_map<VertexId, LabelSetFamily>& mutable_entries() { return entries_; }

private:
    VertexId landmark_ = kNoVertex;
    std::unordered_map<VertexId, LabelSetFamily> entries_;
};

// Transposed boundary table: label set -> exit vertices reachable under it.
// Ordered map so that iteration (and thus queue insertion order and the
// serialized bytes) is deterministic.
struct ExternalIndexT {
    std::map<LabelSet, std::vector<VertexId>> entries;
};

// Correlation counts towards other landmarks' subgraphs: number of boundary
// key vertices owned by each landmark.
struct CorrelationTable {
    std::unordered_map<VertexId, std::uint64_t> counts;

    std::uint64_t get(VertexId landmark) const {
        auto it = counts.find(landmark);
        return it == counts.end() ? 0 : it->second;
    }
};

struct PerLandmark {
    InternalIndex ii;
    ExternalIndexT eit;
    CorrelationTable d;
};

struct IndexBuildMeta {
    std::size_t k = 0;          // requested landmark count
    std::uint64_t seed = 0;
    double build_seconds = 0.0; // in-memory only; not serialized
    std::uint64_t graph_fingerprint = 0;
};

class LocalIndex {
public:
    LocalIndex(LandmarkAssignment assignment, std::vector<PerLandmark> per_landmark,
               IndexBuildMeta meta);

    const LandmarkAssignment& assignment() const { return assignment_; }
    const IndexBuildMeta& meta() const { return meta_; }

    bool is_landmark(VertexId v) const { return assignment_.is_landmark(v); }
    VertexId owner(VertexId v) const { return assignment_.owner[v]; }

    const PerLandmark& at(VertexId landmark) const {
        return per_landmark_[static_cast<std::size_t>(assignment_.landmark_pos[landmark])];
    }
    const std::vector<PerLandmark>& per_landmark() const { return per_landmark_; }

    // D value between two subgraphs by their landmarks.
    std::uint64_t correlation(VertexId landmark_a, VertexId landmark_b) const {
        return at(landmark_a).d.get(landmark_b);
    }

    void save(const std::filesystem::path& path) const;
    static LocalIndex load(const std::filesystem::path& path, const KnowledgeGraph& g);

    std::size_t serialized_bytes() const;

private:
    LandmarkAssignment assignment_;
    std::vector<PerLandmark> per_landmark_;
    IndexBuildMeta meta_;
};

// Default landmark count: ceil(log2 |V| * sqrt(|V|)).
std::size_t default_landmark_count(std::size_t vertex_count);

// Randomly selects ~sqrt(#classes) schema classes and round-robins over
// their instance lists until k landmarks are marked; falls back to seeded
// random vertices when the schema runs dry. Throws KTooLarge when k > |V|.
std::vector<VertexId> select_landmarks(const KnowledgeGraph& g, std::size_t k, std::uint64_t seed);

// Simultaneous BFS with one frontier queue per landmark, rotated fairly:
// each turn pops one vertex of one frontier and claims its unexplored
// out-neighbors. Edge labels are ignored.
LandmarkAssignment bfs_partition(const KnowledgeGraph& g, const std::vector<VertexId>& landmarks);

// The per-landmark indexing sweep: (vertex, label-set) queue seeded with
// (u, {}), Insert-gated expansion, boundary edges collected into EI and then
// transposed into EI^T with correlation counts.
PerLandmark local_full_index(const KnowledgeGraph& g, VertexId u,
                             const LandmarkAssignment& assignment);

// select + partition + per-landmark sweeps (parallel across landmarks when
// workers != 1; results merged in landmark order, so output is deterministic).
LocalIndex build_index(const KnowledgeGraph& g, std::size_t k, std::uint64_t seed,
                       unsigned workers = 0);

// Same with a forced landmark list (tests, reproductions).
LocalIndex build_index_with_landmarks(const KnowledgeGraph& g, std::vector<VertexId> landmarks,
                                      std::size_t k, std::uint64_t seed, unsigned workers = 0);

inline bool index_check(const InternalIndex& ii, VertexId t, LabelSet l) {
    return ii.check(t, l);
}

} // namespace lscr
