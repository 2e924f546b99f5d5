#pragma once

#include "lscr/search_core.hpp"

namespace lscr {

// Shared mutable state of one UIS* run: the close surjection, the global
// stack, counters, and (optionally) parent pointers for witness
// reconstruction, one slot per (vertex, close-state).
class SearchState {
public:
    SearchState(const KnowledgeGraph& g, const LscrQuery& q, bool want_witness = false);

    // Main-function initialization: close[s] <- F, stack <- {s}.
    void seed_source();

    const KnowledgeGraph& graph;
    LscrQuery query;
    CloseMap close;
    std::vector<VertexId> stack;
    SearchStats stats;
    std::vector<std::uint8_t> pop_count;

    bool scck(VertexId v);

    bool want_witness;
    struct Parent {
        VertexId src = kNoVertex;
        LabelId label = 0;
        CloseState src_state = CloseState::N;
        bool chain_switch = false; // T-seed marker: continue along the F chain
    };
    std::vector<Parent> parent_f, parent_t;
    void record_parent(VertexId v, CloseState v_state, VertexId src, LabelId label,
                       CloseState src_state);
    std::vector<Edge> reconstruct(VertexId t, CloseState t_state) const;

    // Theorem-3 instrumentation.
    bool f_phase_failed = false;
    void note_lcs_result(CloseState b, bool result, std::uint64_t from_n_before);
};

// Algorithm: stack seeded with the query source; close[s] set from SCck;
// case 1 propagates T along label-admitted edges, case 2 explores fresh
// vertices and evaluates SCck once each. s = t answers SCck(s) directly.
QueryAnswer uis_query(const KnowledgeGraph& g, const LscrQuery& q, bool want_witness = false);

// LCS on the shared stack. B=T pushes s_star as a proven-T seed; B=F drains
// the stack exploring only unexplored vertices. Stale T entries are skipped
// during F phases, and the top T block is swept when a T phase exhausts.
bool lcs_stack(SearchState& st, VertexId s_star, VertexId t_star, LabelSet labels, CloseState b);

// Main loop over V(S,G) in the given (sorted) order, dispatching the three
// close-state branches onto lcs_stack. vsg must equal match_all(g, q.constraint).
QueryAnswer uis_star_query(const KnowledgeGraph& g, const LscrQuery& q, const VertexSetResult& vsg,
                           bool want_witness = false);

} // namespace lscr
