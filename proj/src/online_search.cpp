#include "lscr/online_search.hpp"

#include <algorithm>
#include <chrono>

#include "lscr/errors.hpp"

namespace lscr {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point start) {
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

} // namespace

SearchState::SearchState(const KnowledgeGraph& g, const LscrQuery& q, bool witness)
    : graph(g),
      query(q),
      close(g.vertex_count()),
      pop_count(g.vertex_count(), 0),
      want_witness(witness) {
    if (want_witness) {
        parent_f.assign(g.vertex_count(), {});
        parent_t.assign(g.vertex_count(), {});
    }
}

void SearchState::seed_source() {
    close.set(query.source, CloseState::F);
    stack.push_back(query.source);
}

bool SearchState::scck(VertexId v) {
    ++stats.scck_calls;
    return satisfies(graph, v, query.constraint);
}

void SearchState::record_parent(VertexId v, CloseState v_state, VertexId src, LabelId label,
                                CloseState src_state) {
    if (!want_witness) return;
    Parent p{src, label, src_state, false};
    if (v_state == CloseState::T)
        parent_t[v] = p;
    else
        parent_f[v] = p;
}

std::vector<Edge> SearchState::reconstruct(VertexId t, CloseState t_state) const {
    std::vector<Edge> path;
    VertexId cur = t;
    CloseState cur_state = t_state;
    while (true) {
        const Parent& p = cur_state == CloseState::T ? parent_t[cur] : parent_f[cur];
        if (p.chain_switch) {
            cur_state = CloseState::F;
            continue;
        }
        if (p.src == kNoVertex) break;
        path.push_back({p.src, p.label, cur});
        cur = p.src;
        cur_state = p.src_state;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

void SearchState::note_lcs_result(CloseState b, bool result, std::uint64_t from_n_before) {
    if (b == CloseState::F) {
        if (f_phase_failed && close.from_n_transitions() > from_n_before)
            ++stats.theorem3_violations;
        if (!result) f_phase_failed = true;
    }
}

QueryAnswer uis_query(const KnowledgeGraph& g, const LscrQuery& q, bool want_witness) {
    auto start = Clock::now();
    QueryAnswer answer;
    SearchState st(g, q, want_witness);

    if (q.source == q.target) {
        answer.value = st.scck(q.source);
        answer.stats = st.stats;
        answer.stats.wall_time_us = elapsed_us(start);
        if (answer.value && want_witness) answer.witness = std::vector<Edge>{};
        return answer;
    }

    st.stack.push_back(q.source);
    st.close.set(q.source, st.scck(q.source) ? CloseState::T : CloseState::F);

    bool found = false;
    while (!st.stack.empty() && !found) {
        VertexId u = st.stack.back();
        st.stack.pop_back();
        ++st.stats.pops;
        st.stats.max_pops_per_vertex = std::max(st.stats.max_pops_per_vertex,
                                                static_cast<std::uint32_t>(++st.pop_count[u]));
        for (const Arc& a : g.out(u)) {
            if (!q.labels.contains(a.label)) continue;
            ++st.stats.edges_scanned;
            VertexId v = a.other;
            if (st.close.get(u) == CloseState::T && st.close.get(v) != CloseState::T) {
                st.close.set(v, CloseState::T);
                st.record_parent(v, CloseState::T, u, a.label, CloseState::T);
                st.stack.push_back(v);
            } else if (st.close.get(v) == CloseState::N) {
                CloseState cs = st.scck(v) ? CloseState::T : CloseState::F;
                st.close.set(v, cs);
                st.record_parent(v, cs, u, a.label, st.close.get(u));
                st.stack.push_back(v);
            }
            if (v == q.target && st.close.get(v) == CloseState::T) {
                found = true;
                break;
            }
        }
    }

    answer.value = found;
    if (found && want_witness) answer.witness = st.reconstruct(q.target, CloseState::T);
    answer.stats = st.stats;
    answer.stats.passed_vertices = st.close.passed();
    answer.stats.wall_time_us = elapsed_us(start);
    return answer;
}

bool lcs_stack(SearchState& st, VertexId s_star, VertexId t_star, LabelSet labels, CloseState b) {
    ++st.stats.lcs_invocations;
    const KnowledgeGraph& g = st.graph;

    if (b == CloseState::T) {
        bool was_f = st.close.get(s_star) == CloseState::F;
        st.close.set(s_star, CloseState::T);
        if (st.want_witness && was_f) st.parent_t[s_star] = {kNoVertex, 0, CloseState::N, true};
        st.stack.push_back(s_star);
    }

    while (true) {
        if (st.stack.empty()) break;
        if (b == CloseState::T && st.close.get(st.stack.back()) != CloseState::T) break;
        VertexId u = st.stack.back();
        st.stack.pop_back();
        // Stale entry from an earlier T phase; skip without expanding.
        if (b == CloseState::F && st.close.get(u) == CloseState::T) continue;
        ++st.stats.pops;
        st.stats.max_pops_per_vertex = std::max(st.stats.max_pops_per_vertex,
                                                static_cast<std::uint32_t>(++st.pop_count[u]));
        for (const Arc& a : g.out(u)) {
            if (!labels.contains(a.label)) continue;
            ++st.stats.edges_scanned;
            VertexId w = a.other;
            CloseState cw = st.close.get(w);
            if ((b == CloseState::T && cw != CloseState::T) ||
                (b == CloseState::F && cw == CloseState::N)) {
                st.close.set(w, b);
                st.record_parent(w, b, u, a.label, b);
                st.stack.push_back(w);
            }
            if (w == t_star) return true;
        }
    }

    // Sweep the top T block left by this (or an earlier) T phase.
    while (!st.stack.empty() && st.close.get(st.stack.back()) == CloseState::T)
        st.stack.pop_back();
    return false;
}

QueryAnswer uis_star_query(const KnowledgeGraph& g, const LscrQuery& q, const VertexSetResult& vsg,
                           bool want_witness) {
    auto start = Clock::now();
    QueryAnswer answer;
    SearchState st(g, q, want_witness);

#ifndef NDEBUG
    // vsg is required to equal match_all(g, q.constraint); sample-check a few
    // members in debug builds.
    for (std::size_t i = 0; i < vsg.members.size(); i += std::max<std::size_t>(1, vsg.members.size() / 4))
        if (!satisfies(g, vsg.members[i], q.constraint))
            throw InconsistentVsg("vsg member fails the constraint");
#endif

    auto finish = [&](bool value, std::optional<std::vector<Edge>> witness) {
        answer.value = value;
        answer.witness = std::move(witness);
        answer.stats = st.stats;
        answer.stats.passed_vertices = st.close.passed();
        answer.stats.wall_time_us = elapsed_us(start);
        return answer;
    };

    if (q.source == q.target) {
        bool ok = st.scck(q.source);
        return finish(ok, ok && want_witness ? std::make_optional(std::vector<Edge>{}) : std::nullopt);
    }

    st.seed_source();

    auto lcs = [&](VertexId s_star, VertexId t_star, CloseState b) {
        std::uint64_t before = st.close.from_n_transitions();
        bool r = lcs_stack(st, s_star, t_star, q.labels, b);
        st.note_lcs_result(b, r, before);
        return r;
    };

    for (VertexId v : vsg.members) {
        CloseState cv = st.close.get(v);
        if (cv == CloseState::N) {
            if (v == q.source || v == q.target) {
                bool r = lcs(q.source, q.target, CloseState::F);
                std::optional<std::vector<Edge>> w;
                if (r && want_witness) w = st.reconstruct(q.target, st.close.get(q.target));
                return finish(r, std::move(w));
            }
            if (lcs(q.source, v, CloseState::F)) {
                if (lcs(v, q.target, CloseState::T))
                    return finish(true, want_witness
                                            ? std::make_optional(st.reconstruct(q.target, CloseState::T))
                                            : std::nullopt);
            }
        } else if (cv == CloseState::F) {
            if (lcs(v, q.target, CloseState::T))
                return finish(true, want_witness
                                        ? std::make_optional(st.reconstruct(q.target, CloseState::T))
                                        : std::nullopt);
        }
        // close[v] == T: already expanded inside a T phase; skip.
    }
    return finish(false, std::nullopt);
}

} // namespace lscr
