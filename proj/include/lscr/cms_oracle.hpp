#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lscr/graph.hpp"
#include "lscr/label_set.hpp"

namespace lscr {

// One minimal sufficient path label set together with a concrete path
// realizing it exactly (same label set, no extras).
struct CmsWitness {
    LabelSet labels;
    std::vector<Edge> path;
};

// Exhaustive BFS over (vertex, label-set) states followed by a hand-rolled
// antichain reduction. Deliberately independent of LabelSetFamily::insert —
// this is the ground truth the index machinery is tested against.
//
// When scope is given, only edges with both endpoints inside scope are
// traversed. Throws BudgetExceeded when |V| * 2^labels exceeds 2^24.
LabelSetFamily cms_oracle(const KnowledgeGraph& g, VertexId s, VertexId t,
                          std::span<const VertexId> scope = {});

// Same computation, keeping one witness path per minimal member.
std::vector<CmsWitness> cms_oracle_witnessed(const KnowledgeGraph& g, VertexId s, VertexId t,
                                             std::span<const VertexId> scope = {});

} // namespace lscr
