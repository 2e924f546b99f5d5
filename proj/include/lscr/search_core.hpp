#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lscr/graph.hpp"
#include "lscr/pattern.hpp"

namespace lscr {

// Per-query exploration state of a vertex: unexplored / reached with the
// substructure constraint satisfied somewhere on the way / reached without.
enum class CloseState : std::uint8_t { N = 0, F = 1, T = 2 };

inline char close_char(CloseState s) { return s == CloseState::N ? 'N' : (s == CloseState::F ? 'F' : 'T'); }

// close map with enforced monotonicity: N->F, N->T, F->T only. T is never
// demoted and F never resets. Tracks the passed-vertex count (states != N)
// and the number of transitions out of N, which instruments the
// "no F-phase after a failed F-phase discovers anything" property.
class CloseMap {
public:
    explicit CloseMap(std::size_t vertex_count) : state_(vertex_count, CloseState::N) {}

    CloseState get(VertexId v) const { return state_[v]; }

    void set(VertexId v, CloseState s) {
        CloseState old = state_[v];
        if (old == s) return;
        bool legal = (old == CloseState::N) || (old == CloseState::F && s == CloseState::T);
        if (!legal) throw std::logic_error("illegal close transition");
        if (old == CloseState::N) {
            ++passed_;
            ++from_n_;
        }
        state_[v] = s;
    }

    std::uint64_t passed() const { return passed_; }
    std::uint64_t from_n_transitions() const { return from_n_; }
    std::size_t size() const { return state_.size(); }

private:
    std::vector<CloseState> state_;
    std::uint64_t passed_ = 0;
    std::uint64_t from_n_ = 0;
};

struct LscrQuery {
    VertexId source;
    VertexId target;
    LabelSet labels;
    SubstructureConstraint constraint;
};

struct SearchStats {
    std::uint64_t passed_vertices = 0;
    std::uint64_t scck_calls = 0;
    std::uint64_t edges_scanned = 0;
    std::uint64_t lcs_invocations = 0;
    // Expanding pops (search-tree nodes); stale-entry discards not counted.
    std::uint64_t pops = 0;
    std::uint32_t max_pops_per_vertex = 0;
    std::uint64_t theorem3_violations = 0;
    double wall_time_us = 0.0;
};

struct QueryAnswer {
    bool value = false;
    SearchStats stats;
    // When present: a concrete path source -> target whose labels are within
    // the query labels and with some vertex satisfying the constraint.
    std::optional<std::vector<Edge>> witness;
};

} // namespace lscr
