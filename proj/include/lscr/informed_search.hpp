#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <tuple>

#include "lscr/local_index.hpp"
#include "lscr/search_core.hpp"

namespace lscr {

// Correlation-table estimate between two vertices' subgraphs. WORST when
// either vertex is unowned.
struct RhoEstimate {
    std::uint64_t value = kWorst;
    static constexpr std::uint64_t kWorst = ~std::uint64_t{0};

    bool is_worst() const { return value == kWorst; }
};

RhoEstimate rho(const LocalIndex& ix, VertexId a, VertexId b);

// Priority fields of a queued vertex, compared lexicographically:
//   (close!=T, not-in-target-subgraph, not-landmark, rho-to-target,
//    owner-explored, insertion-seq)
// This is the rule chain "first applicable rule wins": each rule occupies
// one field, and a later field is only reached when every earlier one ties.
using FrontierKey =
    std::tuple<std::uint8_t, std::uint8_t, std::uint8_t, std::uint64_t, std::uint8_t,
               std::uint64_t>;

struct FrontierContext {
    const LocalIndex* ix;
    const CloseMap* close;
    VertexId t_star = kNoVertex;
    bool rho_invert = false;
};

FrontierKey frontier_key(VertexId u, std::uint64_t seq, const FrontierContext& ctx);

// u before v under the queue rules; negative/zero/positive like strcmp.
int frontier_compare(VertexId u, VertexId v, std::uint64_t seq_u, std::uint64_t seq_v,
                     const FrontierContext& ctx);

// Deduplicated priority queue over vertices. A lazy binary heap with two
// repairs keeps the stored keys current where it matters:
//   - close upgrades are re-keyed eagerly (note_close_change), so the
//     "close=T entries sit in front" invariant is strict at every pop;
//   - the owner-explored field only ever degrades (close leaves N once),
//     and stale-optimistic entries are fixed when they surface at the top.
class FrontierQueue {
public:
    FrontierQueue(std::size_t vertex_count, const LocalIndex* ix, const CloseMap* close,
                  bool rho_invert);

    // Re-keys every live entry against a new LCS target.
    void retarget(VertexId t_star);

    // Re-insertion of a queued vertex discards the earlier entry and takes a
    // fresh insertion sequence number.
    void insert(VertexId v);

    bool contains(VertexId v) const { return live_[v] != 0; }
    bool empty() const { return live_count_ == 0; }
    std::size_t size() const { return live_count_; }

    std::optional<VertexId> front();
    VertexId pop();

    // Call after close[v] changed while v may be queued.
    void note_close_change(VertexId v);

private:
    struct Entry {
        FrontierKey key;
        VertexId v;
        std::uint64_t gen;
    };
    friend bool operator<(const Entry&, const Entry&);

    void normalize();
    void push_entry(VertexId v);
    FrontierKey key_of(VertexId v) const;

    std::vector<Entry> heap_;
    std::vector<std::uint8_t> live_;
    std::vector<std::uint64_t> gen_;
    std::vector<std::uint64_t> seq_;
    std::uint64_t next_seq_ = 0;
    std::size_t live_count_ = 0;
    FrontierContext ctx_;
    VertexId t_owner_ = kNoOwner;
    // rho values per owning landmark are constant between retargets.
    mutable std::vector<std::uint64_t> rho_memo_;
    mutable std::vector<std::uint32_t> rho_epoch_;
    std::uint32_t epoch_ = 0;
};

struct InsOptions {
    bool rho_invert = false;
};

// Shared state of one INS run.
class InsSearch {
public:
    InsSearch(const KnowledgeGraph& g, const LocalIndex& ix, const LscrQuery& q,
              InsOptions options);

    const KnowledgeGraph& graph;
    const LocalIndex& index;
    LscrQuery query;
    InsOptions options;
    CloseMap close;
    FrontierQueue queue;
    SearchStats stats;
    std::vector<std::uint8_t> pop_count;

    bool scck(VertexId v);

    // close update that keeps a queued entry's priority current.
    void set_close(VertexId v, CloseState s);
};

// For each stored entry (x, family) admitted under the labels and not yet T,
// set close[x] <- B. Never enqueues: the internal frontier is covered by the
// landmark's own tables. Returns the number of states changed.
std::size_t cut_internal(const InternalIndex& ii, LabelSet labels, CloseState b, InsSearch& st);

// For each boundary entry (L_x, V) with L_x within the labels, mark and
// enqueue the still-improvable exit vertices. Returns the number enqueued.
std::size_t push_external(const ExternalIndexT& eit, LabelSet labels, CloseState b,
                          InsSearch& st);

// Queue-driven LCS with the landmark short-circuit (Check), Cut/Push pruning
// on landmark encounters, and no end-of-phase sweep.
bool lcs_informed(InsSearch& st, VertexId s_star, VertexId t_star, CloseState b);

// Main loop over V(S,G) consumed in heap-priority order, with the same
// three close-state branches as the uninformed variant.
QueryAnswer ins_query(const KnowledgeGraph& g, const LocalIndex& ix, const LscrQuery& q,
                      const VertexSetResult& vsg, InsOptions options = {});

} // namespace lscr
