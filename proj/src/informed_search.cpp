#include "lscr/informed_search.hpp"

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

RhoEstimate rho(const LocalIndex& ix, VertexId a, VertexId b) {
    VertexId oa = ix.owner(a), ob = ix.owner(b);
    if (oa == kNoOwner || ob == kNoOwner) return {};
    return {ix.correlation(oa, ob)};
}

FrontierKey frontier_key(VertexId u, std::uint64_t seq, const FrontierContext& ctx) {
    const LocalIndex& ix = *ctx.ix;
    const CloseMap& close = *ctx.close;

    std::uint8_t not_t = close.get(u) == CloseState::T ? 0 : 1;

    VertexId t_owner = ctx.t_star == kNoVertex ? kNoOwner : ix.owner(ctx.t_star);
    std::uint8_t not_target_subgraph =
        (t_owner != kNoOwner && ix.owner(u) == t_owner) ? 0 : 1;

    std::uint8_t not_landmark = ix.is_landmark(u) ? 0 : 1;

    RhoEstimate r = ctx.t_star == kNoVertex ? RhoEstimate{} : rho(ix, u, ctx.t_star);
    std::uint64_t rho_field;
    if (r.is_worst())
        rho_field = RhoEstimate::kWorst;
    else
        rho_field = ctx.rho_invert ? RhoEstimate::kWorst - 1 - r.value : r.value;

    VertexId owner_u = ix.owner(u);
    std::uint8_t owner_explored =
        (!ix.is_landmark(u) && owner_u != kNoOwner && close.get(owner_u) == CloseState::N) ? 0
                                                                                           : 1;

    return {not_t, not_target_subgraph, not_landmark, rho_field, owner_explored, seq};
}

int frontier_compare(VertexId u, VertexId v, std::uint64_t seq_u, std::uint64_t seq_v,
                     const FrontierContext& ctx) {
    FrontierKey ku = frontier_key(u, seq_u, ctx);
    FrontierKey kv = frontier_key(v, seq_v, ctx);
    if (ku < kv) return -1;
    if (kv < ku) return 1;
    return 0;
}

bool operator<(const FrontierQueue::Entry& a, const FrontierQueue::Entry& b) {
    // std::push_heap builds a max-heap; invert for min-key-first.
    return b.key < a.key;
}

FrontierQueue::FrontierQueue(std::size_t vertex_count, const LocalIndex* ix,
                             const CloseMap* close, bool rho_invert)
    : live_(vertex_count, 0),
      gen_(vertex_count, 0),
      seq_(vertex_count, 0),
      rho_memo_(ix->assignment().landmarks.size(), 0),
      rho_epoch_(ix->assignment().landmarks.size(), 0) {
    ctx_.ix = ix;
    ctx_.close = close;
    ctx_.rho_invert = rho_invert;
}

FrontierKey FrontierQueue::key_of(VertexId u) const {
    const LocalIndex& ix = *ctx_.ix;
    const CloseMap& close = *ctx_.close;

    std::uint8_t not_t = close.get(u) == CloseState::T ? 0 : 1;
    VertexId owner_u = ix.owner(u);
    std::uint8_t not_target_subgraph = (t_owner_ != kNoOwner && owner_u == t_owner_) ? 0 : 1;
    bool landmark = ix.is_landmark(u);

    std::uint64_t rho_field = RhoEstimate::kWorst;
    if (owner_u != kNoOwner && t_owner_ != kNoOwner) {
        std::size_t pos = static_cast<std::size_t>(ix.assignment().landmark_pos[owner_u]);
        if (rho_epoch_[pos] != epoch_) {
            rho_epoch_[pos] = epoch_;
            std::uint64_t d = ix.correlation(owner_u, t_owner_);
            rho_memo_[pos] = ctx_.rho_invert ? RhoEstimate::kWorst - 1 - d : d;
        }
        rho_field = rho_memo_[pos];
    }

    std::uint8_t owner_explored =
        (!landmark && owner_u != kNoOwner && close.get(owner_u) == CloseState::N) ? 0 : 1;

    return {not_t, not_target_subgraph, landmark ? std::uint8_t{0} : std::uint8_t{1}, rho_field,
            owner_explored, seq_[u]};
}

void FrontierQueue::push_entry(VertexId v) {
    heap_.push_back({key_of(v), v, gen_[v]});
    std::push_heap(heap_.begin(), heap_.end());
}

void FrontierQueue::retarget(VertexId t_star) {
    if (ctx_.t_star == t_star) return; // keys stay valid
    ctx_.t_star = t_star;
    t_owner_ = t_star == kNoVertex ? kNoOwner : ctx_.ix->owner(t_star);
    ++epoch_;
    std::vector<VertexId> alive;
    alive.reserve(live_count_);
    for (const Entry& e : heap_)
        if (live_[e.v] && e.gen == gen_[e.v]) alive.push_back(e.v);
    heap_.clear();
    for (VertexId v : alive) heap_.push_back({key_of(v), v, gen_[v]});
    std::make_heap(heap_.begin(), heap_.end());
}

void FrontierQueue::insert(VertexId v) {
    if (!live_[v]) {
        live_[v] = 1;
        ++live_count_;
    }
    ++gen_[v];
    seq_[v] = next_seq_++;
    push_entry(v);
}

void FrontierQueue::note_close_change(VertexId v) {
    if (!live_[v]) return;
    ++gen_[v];
    push_entry(v);
}

void FrontierQueue::normalize() {
    while (!heap_.empty()) {
        const Entry& top = heap_.front();
        if (!live_[top.v] || top.gen != gen_[top.v]) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.pop_back();
            continue;
        }
        FrontierKey current = key_of(top.v);
        if (current != top.key) {
            VertexId v = top.v;
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.pop_back();
            ++gen_[v];
            push_entry(v);
            continue;
        }
        break;
    }
}

std::optional<VertexId> FrontierQueue::front() {
    normalize();
    if (heap_.empty()) return std::nullopt;
    return heap_.front().v;
}

VertexId FrontierQueue::pop() {
    normalize();
    VertexId v = heap_.front().v;
    std::pop_heap(heap_.begin(), heap_.end());
    heap_.pop_back();
    live_[v] = 0;
    --live_count_;
    return v;
}

InsSearch::InsSearch(const KnowledgeGraph& g, const LocalIndex& ix, const LscrQuery& q,
                     InsOptions opts)
    : graph(g),
      index(ix),
      query(q),
      options(opts),
      close(g.vertex_count()),
      queue(g.vertex_count(), &ix, &close, opts.rho_invert),
      pop_count(g.vertex_count(), 0) {}

bool InsSearch::scck(VertexId v) {
    ++stats.scck_calls;
    return satisfies(graph, v, query.constraint);
}

void InsSearch::set_close(VertexId v, CloseState s) {
    if (close.get(v) == s) return;
    close.set(v, s);
    queue.note_close_change(v);
}

std::size_t cut_internal(const InternalIndex& ii, LabelSet labels, CloseState b, InsSearch& st) {
    std::size_t changed = 0;
    for (const auto& [x, fam] : ii.entries()) {
        if (st.close.get(x) == CloseState::T || st.close.get(x) == b) continue;
        if (!fam.admits(labels)) continue;
        st.set_close(x, b);
        ++changed;
    }
    return changed;
}

std::size_t push_external(const ExternalIndexT& eit, LabelSet labels, CloseState b,
                          InsSearch& st) {
    std::size_t enqueued = 0;
    for (const auto& [lx, verts] : eit.entries) {
        if (!lx.subset_of(labels)) continue;
        for (VertexId v : verts) {
            CloseState cv = st.close.get(v);
            bool eligible = (b == CloseState::T && cv != CloseState::T) ||
                            (b == CloseState::F && cv == CloseState::N);
            if (!eligible) continue;
            st.set_close(v, b);
            st.queue.insert(v);
            ++enqueued;
        }
    }
    return enqueued;
}

bool lcs_informed(InsSearch& st, VertexId s_star, VertexId t_star, CloseState b) {
    ++st.stats.lcs_invocations;
    const KnowledgeGraph& g = st.graph;
    const LocalIndex& ix = st.index;
    const LabelSet labels = st.query.labels;

    st.queue.retarget(t_star);
    if (b == CloseState::T) {
        st.set_close(s_star, CloseState::T);
        st.queue.insert(s_star);
    }

    while (true) {
        if (st.queue.empty()) break;
        if (b == CloseState::T && st.close.get(*st.queue.front()) != CloseState::T) break;
        VertexId u = st.queue.pop();
        ++st.stats.pops;
        st.stats.max_pops_per_vertex = std::max(st.stats.max_pops_per_vertex,
                                                static_cast<std::uint32_t>(++st.pop_count[u]));
        for (const Arc& a : g.out(u)) {
            if (!labels.contains(a.label)) continue;
            ++st.stats.edges_scanned;
            VertexId w = a.other;
            if (ix.is_landmark(w)) {
                if (ix.owner(t_star) == w && ix.at(w).ii.check(t_star, labels)) return true;
                // The landmark is reached, so it gets its close mark like any
                // other vertex (without being enqueued: its frontier is
                // covered by its tables). Skipping when the mark is already
                // at this level makes repeated scans no-ops.
                CloseState cw = st.close.get(w);
                bool fresh = (b == CloseState::F && cw == CloseState::N) ||
                             (b == CloseState::T && cw != CloseState::T);
                if (fresh) {
                    st.set_close(w, b);
                    cut_internal(ix.at(w).ii, labels, b, st);
                    push_external(ix.at(w).eit, labels, b, st);
                    // The tables may have marked t* itself; that mark carries
                    // exactly the reachability this phase verifies.
                    CloseState ct = st.close.get(t_star);
                    if (b == CloseState::F ? ct != CloseState::N : ct == CloseState::T)
                        return true;
                }
            } else {
                CloseState cw = st.close.get(w);
                if (cw == CloseState::N || (cw == CloseState::F && b == CloseState::T)) {
                    st.set_close(w, b);
                    st.queue.insert(w);
                }
            }
            if (w == t_star) return true;
        }
    }
    return false;
}

namespace {

// Candidate-heap selection: linear scan of the unconsumed members under the
// heap rules (F before N, then rho towards the relevant endpoint, landmarks
// breaking ties, then VertexId).
struct CandidatePool {
    std::vector<VertexId> members;
    std::vector<std::uint8_t> consumed;
    std::size_t remaining = 0;

    explicit CandidatePool(const VertexSetResult& vsg)
        : members(vsg.members), consumed(vsg.members.size(), 0), remaining(vsg.members.size()) {}

    VertexId pop_best(const InsSearch& st) {
        auto rank = [&](VertexId v) {
            CloseState c = st.close.get(v);
            return c == CloseState::F ? 0 : (c == CloseState::N ? 1 : 2);
        };
        auto rho_key = [&](VertexId v, int r) {
            RhoEstimate e = r == 0 ? rho(st.index, v, st.query.target)
                                   : rho(st.index, st.query.source, v);
            if (e.is_worst()) return RhoEstimate::kWorst;
            return st.options.rho_invert ? RhoEstimate::kWorst - 1 - e.value : e.value;
        };
        std::size_t best = members.size();
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (consumed[i]) continue;
            if (best == members.size()) {
                best = i;
                continue;
            }
            VertexId u = members[i], bv = members[best];
            int ru = rank(u), rb = rank(bv);
            bool better = false;
            if (ru != rb) {
                better = ru < rb;
            } else if (ru <= 1) {
                auto ku = std::make_tuple(rho_key(u, ru),
                                          st.index.is_landmark(u) ? 0 : 1, u);
                auto kb = std::make_tuple(rho_key(bv, rb),
                                          st.index.is_landmark(bv) ? 0 : 1, bv);
                better = ku < kb;
            } else {
                better = u < bv;
            }
            if (better) best = i;
        }
        consumed[best] = 1;
        --remaining;
        return members[best];
    }
};

} // namespace

QueryAnswer ins_query(const KnowledgeGraph& g, const LocalIndex& ix, const LscrQuery& q,
                      const VertexSetResult& vsg, InsOptions options) {
    if (ix.meta().graph_fingerprint != g.fingerprint())
        throw IndexGraphMismatch("index fingerprint does not match the graph");

    auto start = Clock::now();
    InsSearch st(g, ix, q, options);

#ifndef NDEBUG
    for (std::size_t i = 0; i < vsg.members.size();
         i += std::max<std::size_t>(1, vsg.members.size() / 4))
        if (!satisfies(g, vsg.members[i], q.constraint))
            throw InconsistentVsg("vsg member fails the constraint");
#endif

    QueryAnswer answer;
    auto finish = [&](bool value) {
        answer.value = value;
        answer.stats = st.stats;
        answer.stats.passed_vertices = st.close.passed();
        answer.stats.wall_time_us = elapsed_us(start);
        return answer;
    };

    if (q.source == q.target) return finish(st.scck(q.source));

    st.close.set(q.source, CloseState::F);
    st.queue.insert(q.source);

    CandidatePool pool(vsg);
    while (pool.remaining > 0) {
        VertexId v = pool.pop_best(st);
        CloseState cv = st.close.get(v);
        if (cv == CloseState::N) {
            if (v == q.source || v == q.target)
                return finish(lcs_informed(st, q.source, q.target, CloseState::F));
            if (lcs_informed(st, q.source, v, CloseState::F))
                if (lcs_informed(st, v, q.target, CloseState::T)) return finish(true);
        } else if (cv == CloseState::F) {
            if (lcs_informed(st, v, q.target, CloseState::T)) return finish(true);
        }
    }
    return finish(false);
}

} // namespace lscr
