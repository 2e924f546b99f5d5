#include "lscr/cms_oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>

#include "lscr/errors.hpp"

namespace lscr {

namespace {

struct StateGraph {
    // state id = vertex * 2^labels + bits
    std::vector<std::uint8_t> seen;
    std::vector<std::uint32_t> parent_state;
    std::vector<Edge> parent_edge;
};

constexpr std::uint32_t kNoState = 0xFFFFFFFFu;

} // namespace

static std::vector<CmsWitness> run_oracle(const KnowledgeGraph& g, VertexId s, VertexId t,
                                          std::span<const VertexId> scope, bool want_paths) {
    if (g.label_count() > 24)
        throw BudgetExceeded("label universe too large for exhaustive state search");
    const std::uint64_t width = std::uint64_t{1} << g.label_count();
    const std::uint64_t states = width * g.vertex_count();
    if (states > (std::uint64_t{1} << 24))
        throw BudgetExceeded("state space " + std::to_string(states) + " exceeds 2^24");

    std::vector<std::uint8_t> in_scope;
    if (!scope.empty()) {
        in_scope.assign(g.vertex_count(), 0);
        for (VertexId v : scope) in_scope[v] = 1;
    }
    auto scoped = [&](VertexId v) { return in_scope.empty() || in_scope[v]; };

    StateGraph sg;
    sg.seen.assign(states, 0);
    if (want_paths) {
        sg.parent_state.assign(states, kNoState);
        sg.parent_edge.assign(states, Edge{kNoVertex, 0, kNoVertex});
    }

    auto state_id = [&](VertexId v, LabelSet l) {
        return std::uint64_t{v} * width + l.bits();
    };

    std::deque<std::pair<VertexId, LabelSet>> queue;
    queue.emplace_back(s, LabelSet{});
    sg.seen[state_id(s, LabelSet{})] = 1;

    std::vector<LabelSet> reached_t;
    if (s == t) reached_t.push_back(LabelSet{}); // empty path

    while (!queue.empty()) {
        auto [v, l] = queue.front();
        queue.pop_front();
        if (!scoped(v)) continue;
        for (const Arc& a : g.out(v)) {
            if (!scoped(a.other)) continue;
            LabelSet nl = l.with(a.label);
            std::uint64_t id = state_id(a.other, nl);
            if (sg.seen[id]) continue;
            sg.seen[id] = 1;
            if (want_paths) {
                sg.parent_state[id] = static_cast<std::uint32_t>(state_id(v, l));
                sg.parent_edge[id] = Edge{v, a.label, a.other};
            }
            if (a.other == t) reached_t.push_back(nl);
            queue.emplace_back(a.other, nl);
        }
    }

    // Antichain reduction by pairwise subset scan.
    std::vector<LabelSet> minimal;
    for (LabelSet cand : reached_t) {
        bool dominated = false;
        for (LabelSet other : reached_t) {
            if (other != cand && other.subset_of(cand)) {
                dominated = true;
                break;
            }
        }
        if (!dominated && std::find(minimal.begin(), minimal.end(), cand) == minimal.end())
            minimal.push_back(cand);
    }

    std::vector<CmsWitness> out;
    for (LabelSet m : minimal) {
        CmsWitness w;
        w.labels = m;
        if (want_paths && !(s == t && m.empty())) {
            std::uint64_t id = state_id(t, m);
            while (sg.parent_state[id] != kNoState) {
                w.path.push_back(sg.parent_edge[id]);
                id = sg.parent_state[id];
            }
            std::reverse(w.path.begin(), w.path.end());
        }
        out.push_back(std::move(w));
    }
    return out;
}

LabelSetFamily cms_oracle(const KnowledgeGraph& g, VertexId s, VertexId t,
                          std::span<const VertexId> scope) {
    LabelSetFamily fam;
    for (const CmsWitness& w : run_oracle(g, s, t, scope, false)) fam.insert(w.labels);
    return fam;
}

std::vector<CmsWitness> cms_oracle_witnessed(const KnowledgeGraph& g, VertexId s, VertexId t,
                                             std::span<const VertexId> scope) {
    return run_oracle(g, s, t, scope, true);
}

} // namespace lscr
