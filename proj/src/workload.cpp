#include "lscr/workload.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include "lscr/errors.hpp"
#include "lscr/online_search.hpp"
#include "lscr/rng.hpp"

namespace lscr {

// ---------------------------------------------------------------- oracles

bool label_bfs_reachable(const KnowledgeGraph& g, VertexId from, VertexId to, LabelSet labels) {
    if (from == to) return true;
    std::vector<std::uint8_t> visited(g.vertex_count(), 0);
    std::deque<VertexId> queue{from};
    visited[from] = 1;
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        for (const Arc& a : g.out(u)) {
            if (!labels.contains(a.label) || visited[a.other]) continue;
            if (a.other == to) return true;
            visited[a.other] = 1;
            queue.push_back(a.other);
        }
    }
    return false;
}

bool oracle_lscr(const KnowledgeGraph& g, const LscrQuery& q) {
    if (q.source == q.target) return satisfies(g, q.source, q.constraint);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (!satisfies(g, v, q.constraint)) continue;
        if (label_bfs_reachable(g, q.source, v, q.labels) &&
            label_bfs_reachable(g, v, q.target, q.labels))
            return true;
    }
    return false;
}

// ---------------------------------------------------------------- gen_graph

namespace {

std::string class_name(std::size_t i) { return "C" + std::to_string(i); }
std::string node_name(std::size_t i) { return "n" + std::to_string(i); }

// Cumulative Zipf(s) weights over ranks 1..n.
std::vector<double> zipf_cdf(std::size_t n, double s) {
    std::vector<double> cdf(n);
    double acc = 0;
    for (std::size_t r = 1; r <= n; ++r) {
        acc += 1.0 / std::pow(static_cast<double>(r), s);
        cdf[r - 1] = acc;
    }
    for (double& x : cdf) x /= acc;
    return cdf;
}

std::size_t draw_cdf(const std::vector<double>& cdf, double u) {
    return static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

} // namespace

KnowledgeGraph gen_graph(const GraphGenSpec& spec) {
    if (spec.vertex_count == 0) throw SpecInvalid("vertex_count must be positive");
    if (!(spec.density > 0)) throw SpecInvalid("density must be positive");
    if (spec.label_universe == 0 || spec.label_universe > 64)
        throw SpecInvalid("label_universe must be in [1, 64]");
    bool with_schema = spec.class_count > 0 && spec.instances_per_class > 0;
    std::size_t plain_labels = spec.label_universe - (with_schema ? 1 : 0);
    if (plain_labels == 0) throw SpecInvalid("label universe leaves no non-schema labels");
    if (with_schema && spec.class_count >= spec.vertex_count)
        throw SpecInvalid("class_count must be below vertex_count");

    Rng rng(spec.seed);
    const std::size_t n = spec.vertex_count;
    const std::size_t classes = with_schema ? spec.class_count : 0;
    const std::size_t instances = n - classes;
    // Community structure with a heavy tail, like schema-organized KGs: a
    // couple of giant deep "corridor" communities hold a sizable share of
    // the instances, the rest fall into small local blocks. Giant blocks are
    // contiguous id ranges whose internal edges descend through a bounded
    // window, so they are deep and narrow; small blocks are interleaved id
    // classes with mostly-downward internal edges, so they are shallow
    // islands. Reachability is therefore localized with a few long-range
    // corridors.
    const std::size_t small_size = std::clamp<std::size_t>(instances / 12, 24, 600);
    const std::size_t giant_count = instances >= 20000 ? 2 : (instances >= 2000 ? 1 : 0);
    const std::size_t giant_size = giant_count ? instances / 20 : 0;
    const std::size_t giant_span = giant_count * giant_size;
    const std::size_t small_count =
        std::max<std::size_t>(1, (instances - giant_span) / small_size);
    const std::size_t blocks = giant_count + small_count;
    const std::size_t giant_window = std::max<std::size_t>(8, giant_size / 64);

    auto name_of = [&](std::size_t v) {
        return v < classes ? class_name(v) : node_name(v - classes);
    };
    auto plain_label_name = [&](std::size_t l) { return "L" + std::to_string(l); };
    // Instance layout: the first giant_span instance indexes form the giant
    // blocks as contiguous ranges; the remainder interleave into the small
    // blocks.
    auto block_of = [&](std::size_t v) {
        std::size_t i = v - classes;
        if (i < giant_span) return i / giant_size;
        return giant_count + (i - giant_span) % small_count;
    };
    auto block_peer = [&](std::size_t v) {
        std::size_t i = v - classes;
        if (i < giant_span) {
            // Giant block: a nearby lower id within the block (deep descent).
            std::size_t base = (i / giant_size) * giant_size;
            std::size_t off = i - base;
            if (off == 0) return classes + base + 1 + rng.below(giant_window);
            std::size_t delta = 1 + rng.below(std::min(giant_window, off));
            return classes + base + off - delta;
        }
        std::size_t b = (i - giant_span) % small_count;
        std::size_t members =
            (instances - giant_span) / small_count + (b < (instances - giant_span) % small_count ? 1 : 0);
        if (members <= 1) return v;
        return classes + giant_span + b + small_count * rng.below(members);
    };
    auto in_giant = [&](std::size_t v) { return v >= classes && v - classes < giant_span; };

    std::size_t target_edges =
        static_cast<std::size_t>(std::llround(spec.density * static_cast<double>(n)));

    struct Triple {
        std::size_t s, t;
        std::string p;
    };
    std::vector<Triple> triples;
    std::map<std::tuple<std::size_t, std::string, std::size_t>, bool> seen;
    auto add = [&](std::size_t s, const std::string& p, std::size_t t) {
        if (!seen.emplace(std::make_tuple(s, p, t), true).second) return false;
        triples.push_back({s, t, p});
        return true;
    };

    std::vector<std::uint8_t> covered(n, 0);
    std::vector<std::size_t> target_pool;

    // Schema triples first: instance -> class.
    if (with_schema) {
        std::size_t typed = std::min(n - classes, classes * spec.instances_per_class);
        for (std::size_t i = 0; i < typed; ++i) {
            std::size_t inst = classes + i;
            std::size_t cls = i % classes;
            if (add(inst, "rdf:type", cls)) {
                covered[inst] = covered[cls] = 1;
                target_pool.push_back(cls);
            }
        }
    }

    const std::vector<double> cdf = zipf_cdf(plain_labels, 1.1);
    auto random_label = [&] { return plain_label_name(draw_cdf(cdf, rng.unit())); };

    // One edge per plain label so the loaded universe matches the spec.
    for (std::size_t l = 0; l < plain_labels; ++l) {
        for (int tries = 0; tries < 64; ++tries) {
            std::size_t s = instances ? classes + rng.below(instances) : rng.index(n);
            std::size_t t = instances ? block_peer(s) : rng.index(n);
            if (s == t) continue;
            if (add(s, plain_label_name(l), t)) {
                covered[s] = covered[t] = 1;
                target_pool.push_back(t);
                break;
            }
        }
    }

    // Every vertex must appear in some triple or it would vanish from the
    // serialized graph.
    for (std::size_t v = 0; v < n; ++v) {
        if (covered[v]) continue;
        for (int tries = 0; tries < 64; ++tries) {
            std::size_t t = v >= classes ? block_peer(v) : rng.index(n);
            if (t == v) continue;
            if (add(v, random_label(), t)) {
                covered[v] = covered[t] = 1;
                target_pool.push_back(t);
                break;
            }
        }
    }

    // Remaining budget: sources are instances, targets almost always block
    // peers. The cross-block share is budgeted at about half an exit per
    // block so the islands stay islands instead of cascading into one giant
    // reachable component; cross targets use preferential attachment.
    // Edges lean from late ids towards early ids, so reachability is
    // shallow (early vertices and the class hubs act as sinks) and a
    // minority of forward edges keeps some cycles around.
    const double cross_prob =
        target_edges ? 2.5 * static_cast<double>(blocks) / static_cast<double>(target_edges)
                     : 0.0;
    std::size_t guard = 0;
    while (triples.size() < target_edges && guard < target_edges * 64 + 1024) {
        ++guard;
        std::size_t s = instances ? classes + rng.below(instances) : rng.index(n);
        std::size_t t;
        if (instances == 0 || rng.unit() < cross_prob) {
            t = (!target_pool.empty() && rng.coin())
                    ? target_pool[rng.index(target_pool.size())]
                    : rng.index(n);
            // Giant corridors take no cross-block edges: their reachability
            // stays internal instead of bleeding into (or out of) islands.
            if (in_giant(s) || in_giant(t)) continue;
        } else {
            t = block_peer(s);
        }
        if (s == t) continue;
        // Giant-block internal edges already descend by construction; small
        // blocks and cross edges lean downward with a minority kept as-is.
        if (!(in_giant(s) && in_giant(t) && block_of(s) == block_of(t)) && t > s &&
            rng.below(100) < 85)
            std::swap(s, t);
        if (add(s, random_label(), t)) target_pool.push_back(t);
    }

    KnowledgeGraph::Builder b;
    for (const Triple& tr : triples) b.add_triple(name_of(tr.s), tr.p, name_of(tr.t));
    return b.finish();
}

// ---------------------------------------------------------------- constraints

namespace {

std::vector<VertexId> sorted_instance_vertices(const KnowledgeGraph& g) {
    std::vector<VertexId> out;
    for (const auto& [v, cs] : g.schema().instance_of) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

SubstructureConstraint gen_constraint_with_magnitude(const KnowledgeGraph& g, std::size_t m,
                                                     std::uint64_t seed) {
    if (m == 0 || m >= g.vertex_count()) throw Unachievable(m);
    const std::size_t lo = static_cast<std::size_t>(std::ceil(0.8 * static_cast<double>(m)));
    const std::size_t hi = static_cast<std::size_t>(std::floor(1.2 * static_cast<double>(m)));

    Rng rng(seed);
    std::vector<VertexId> seeds = sorted_instance_vertices(g);
    if (seeds.empty()) {
        seeds.resize(g.vertex_count());
        for (VertexId v = 0; v < g.vertex_count(); ++v) seeds[v] = v;
    }

    constexpr int kAttempts = 60;
    constexpr int kSteps = 50;
    int fresh_var = 0;

    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        VertexId v = seeds[rng.index(seeds.size())];
        if (g.out(v).empty() && g.in(v).empty()) continue;

        SubstructureConstraint s;
        s.focus = "x";
        auto seed_pattern = [&]() -> TriplePattern {
            bool use_out = !g.out(v).empty() && (g.in(v).empty() || rng.coin());
            if (use_out) {
                const Arc& a = g.out(v)[rng.index(g.out(v).size())];
                return {PatternTerm::variable("x"), a.label, PatternTerm::concrete(a.other)};
            }
            const Arc& a = g.in(v)[rng.index(g.in(v).size())];
            return {PatternTerm::concrete(a.other), a.label, PatternTerm::variable("x")};
        };
        s.patterns.push_back(seed_pattern());

        for (int step = 0; step < kSteps; ++step) {
            VertexSetResult matches = match_all(g, s);
            std::size_t count = matches.size();
            if (count >= lo && count <= hi) {
                s.concrete_vertices.clear();
                for (const TriplePattern& p : s.patterns) {
                    if (!p.subject.is_variable) s.concrete_vertices.push_back(p.subject.vertex);
                    if (!p.object.is_variable) s.concrete_vertices.push_back(p.object.vertex);
                }
                std::sort(s.concrete_vertices.begin(), s.concrete_vertices.end());
                s.concrete_vertices.erase(
                    std::unique(s.concrete_vertices.begin(), s.concrete_vertices.end()),
                    s.concrete_vertices.end());
                return s;
            }
            if (count > hi) {
                // Too many matches: require one more edge around the focus.
                VertexId anchor = matches.members[rng.index(matches.members.size())];
                bool use_out = !g.out(anchor).empty() && (g.in(anchor).empty() || rng.coin());
                if (!use_out && g.in(anchor).empty()) break;
                TriplePattern p;
                if (use_out) {
                    const Arc& a = g.out(anchor)[rng.index(g.out(anchor).size())];
                    PatternTerm obj = rng.coin()
                                          ? PatternTerm::concrete(a.other)
                                          : PatternTerm::variable("y" + std::to_string(fresh_var++));
                    p = {PatternTerm::variable("x"), a.label, std::move(obj)};
                } else {
                    const Arc& a = g.in(anchor)[rng.index(g.in(anchor).size())];
                    PatternTerm sub = rng.coin()
                                          ? PatternTerm::concrete(a.other)
                                          : PatternTerm::variable("y" + std::to_string(fresh_var++));
                    p = {std::move(sub), a.label, PatternTerm::variable("x")};
                }
                s.patterns.push_back(std::move(p));
            } else {
                // Too few: drop a pattern or loosen a concrete endpoint.
                if (s.patterns.size() > 1) {
                    s.patterns.erase(s.patterns.begin() +
                                     static_cast<long>(1 + rng.index(s.patterns.size() - 1)));
                } else {
                    TriplePattern& p = s.patterns.front();
                    PatternTerm& non_focus =
                        (p.subject.is_variable && p.subject.var == "x") ? p.object : p.subject;
                    if (!non_focus.is_variable)
                        non_focus = PatternTerm::variable("y" + std::to_string(fresh_var++));
                    else
                        break; // nothing left to loosen; reseed
                }
            }
        }
    }
    throw Unachievable(m);
}

// ---------------------------------------------------------------- gen_queries

namespace {

// Integer label-constraint sizes of each band, exact rational bounds:
// band 0: 0.2t <= s < 0.4t, band 1: 0.4t <= s < 0.6t, band 2: 0.6t <= s <= 0.8t.
std::array<std::vector<int>, 3> band_sizes(std::size_t t) {
    std::array<std::vector<int>, 3> bands;
    for (int s = 1; s <= static_cast<int>(t); ++s) {
        std::int64_t s5 = std::int64_t{5} * s;
        std::int64_t tt = static_cast<std::int64_t>(t);
        if (s5 >= tt && s5 < 2 * tt) bands[0].push_back(s);
        if (s5 >= 2 * tt && s5 < 3 * tt) bands[1].push_back(s);
        if (s5 >= 3 * tt && s5 <= 4 * tt) bands[2].push_back(s);
    }
    return bands;
}

// Vertices reached by a label-free BFS cut off after `iterations` loop
// turns (one vertex expansion each). Cutting by whole levels instead
// saturates the reachable set on desk-scale graphs and leaves no reachable
// target unexplored, so no true query could ever be drawn.
std::vector<std::uint8_t> bfs_prefix(const KnowledgeGraph& g, VertexId s,
                                     std::size_t iterations) {
    std::vector<std::uint8_t> visited(g.vertex_count(), 0);
    std::deque<VertexId> queue{s};
    visited[s] = 1;
    for (std::size_t it = 0; it < iterations && !queue.empty(); ++it) {
        VertexId u = queue.front();
        queue.pop_front();
        for (const Arc& a : g.out(u))
            if (!visited[a.other]) {
                visited[a.other] = 1;
                queue.push_back(a.other);
            }
    }
    return visited;
}

std::vector<std::uint8_t> reach_forward(const KnowledgeGraph& g, VertexId s, LabelSet labels) {
    std::vector<std::uint8_t> visited(g.vertex_count(), 0);
    std::deque<VertexId> queue{s};
    visited[s] = 1;
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        for (const Arc& a : g.out(u))
            if (labels.contains(a.label) && !visited[a.other]) {
                visited[a.other] = 1;
                queue.push_back(a.other);
            }
    }
    return visited;
}

std::vector<std::uint8_t> reach_backward(const KnowledgeGraph& g, VertexId t, LabelSet labels) {
    std::vector<std::uint8_t> visited(g.vertex_count(), 0);
    std::deque<VertexId> queue{t};
    visited[t] = 1;
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        for (const Arc& a : g.in(u))
            if (labels.contains(a.label) && !visited[a.other]) {
                visited[a.other] = 1;
                queue.push_back(a.other);
            }
    }
    return visited;
}

} // namespace

GeneratedQuerySet gen_queries(const KnowledgeGraph& g, const QueryGenSpec& spec) {
    if (spec.constraint.has_value() == spec.magnitude.has_value())
        throw SpecInvalid("provide exactly one of constraint / magnitude");

    GeneratedQuerySet out;
    if (spec.count_true == 0 && spec.count_false == 0) return out;

    const std::size_t t_labels = g.label_count();
    auto bands = band_sizes(t_labels);
    for (const auto& b : bands)
        if (b.empty())
            throw Timeout("label universe too small to fill every label-size band");

    Rng rng(spec.seed);
    const double log_v = std::log2(static_cast<double>(g.vertex_count()));
    const std::size_t bfs_depth = static_cast<std::size_t>(std::max(1.0, std::floor(log_v)));
    std::uint64_t min_lo = static_cast<std::uint64_t>(10.0 * log_v);
    std::uint64_t min_hi =
        static_cast<std::uint64_t>(static_cast<double>(g.vertex_count()) / (10.0 * log_v));
    if (min_lo > min_hi) std::swap(min_lo, min_hi);

    std::array<std::size_t, 3> band_count{0, 0, 0};
    std::array<std::size_t, 3> false_quota{};
    for (std::size_t k = 0; k < 3; ++k)
        false_quota[k] = spec.count_false / 3 + (k < spec.count_false % 3 ? 1 : 0);
    std::array<std::size_t, 3> false_count{0, 0, 0};

    std::vector<LabelId> all_labels(t_labels);
    for (std::size_t l = 0; l < t_labels; ++l) all_labels[l] = static_cast<LabelId>(l);

    // Fixed-constraint mode shares one match set across every candidate.
    std::optional<VertexSetResult> fixed_vsg;
    if (spec.constraint) fixed_vsg = match_all(g, *spec.constraint);

    const std::size_t budget = 1000 * (spec.count_true + spec.count_false);
    std::size_t spent = 0;

    while (out.true_queries.size() < spec.count_true ||
           out.false_queries.size() < spec.count_false) {
        if (++spent > budget)
            throw Timeout("candidate budget exhausted before filling query buckets");

        VertexId s = static_cast<VertexId>(rng.index(g.vertex_count()));

        int band = 0;
        for (int b = 1; b < 3; ++b)
            if (band_count[b] < band_count[band]) band = b;
        const auto& sizes = bands[static_cast<std::size_t>(band)];
        int size = sizes[rng.index(sizes.size())];
        std::vector<LabelId> pool = all_labels;
        rng.shuffle(pool);
        LabelSet labels;
        for (int i = 0; i < size; ++i) labels.add(pool[static_cast<std::size_t>(i)]);

        SubstructureConstraint constraint;
        if (spec.constraint) {
            constraint = *spec.constraint;
        } else {
            try {
                constraint = gen_constraint_with_magnitude(g, *spec.magnitude, rng.next());
            } catch (const Unachievable&) {
                continue;
            }
        }

        auto near = bfs_prefix(g, s, bfs_depth);
        // Rejection-sample an unexplored target; the prefix covers only a
        // sliver of the graph so a handful of tries suffices.
        VertexId t = kNoVertex;
        for (int tries = 0; tries < 64; ++tries) {
            VertexId cand = static_cast<VertexId>(rng.index(g.vertex_count()));
            if (!near[cand]) {
                t = cand;
                break;
            }
        }
        if (t == kNoVertex) continue;

        LscrQuery q{s, t, labels, constraint};
        QueryAnswer ans = uis_query(g, q);
        std::uint64_t tree = ans.stats.pops;
        std::uint64_t min_threshold = min_lo + rng.below(min_hi - min_lo + 1);
        if (tree < min_threshold) continue;

        GeneratedQuery gq{q, ans.value, tree, min_threshold, band, std::nullopt};
        if (ans.value) {
            if (out.true_queries.size() >= spec.count_true) continue;
            out.true_queries.push_back(std::move(gq));
        } else {
            if (out.false_queries.size() >= spec.count_false) continue;
            auto fwd = reach_forward(g, s, labels);
            bool l_reach = fwd[t];
            auto full_fwd = reach_forward(g, s, g.full_label_mask());
            auto full_bwd = reach_backward(g, t, g.full_label_mask());
            std::vector<VertexId> sat_local;
            if (!fixed_vsg) sat_local = match_all(g, constraint).members;
            const std::vector<VertexId>& sat = fixed_vsg ? fixed_vsg->members : sat_local;
            bool s_reach = false;
            for (VertexId v : sat)
                if (full_fwd[v] && full_bwd[v]) {
                    s_reach = true;
                    break;
                }
            std::optional<FalseKind> kind;
            if (!l_reach && s_reach)
                kind = FalseKind::LabelBlocked;
            else if (l_reach && !s_reach)
                kind = FalseKind::SubstructureBlocked;
            else if (!l_reach && !s_reach)
                kind = FalseKind::BothBlocked;
            // Both constraints individually satisfiable yet jointly false:
            // outside the three tracked falsity types, discard.
            if (!kind) continue;
            std::size_t ki = static_cast<std::size_t>(*kind);
            if (false_count[ki] >= false_quota[ki]) continue;
            gq.false_kind = kind;
            ++false_count[ki];
            out.false_queries.push_back(std::move(gq));
        }
        ++band_count[static_cast<std::size_t>(band)];
    }
    return out;
}

// ---------------------------------------------------------------- query set io

void save_query_set(const GeneratedQuerySet& set, const KnowledgeGraph& g,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write query set: " + path.string());

    std::map<std::string, std::string> ref_of; // constraint text -> file name
    auto constraint_ref = [&](const SubstructureConstraint& s) -> std::string {
        std::string text = constraint_to_text(s, g);
        auto it = ref_of.find(text);
        if (it != ref_of.end()) return it->second;
        std::string name = path.stem().string() + ".c" + std::to_string(ref_of.size()) + ".q";
        std::ofstream cf(path.parent_path() / name, std::ios::binary);
        if (!cf) throw Error("cannot write constraint file: " + name);
        cf << text << "\n";
        ref_of.emplace(std::move(text), name);
        return name;
    };

    auto emit = [&](const GeneratedQuery& q) {
        std::string labels;
        for (LabelId l : q.query.labels.labels()) {
            if (!labels.empty()) labels += ',';
            labels += g.label_name(l);
        }
        out << g.vertex_name(q.query.source) << '\t' << g.vertex_name(q.query.target) << '\t'
            << labels << '\t' << constraint_ref(q.query.constraint) << '\t'
            << (q.expected ? 'T' : 'F') << '\n';
    };
    for (const GeneratedQuery& q : set.true_queries) emit(q);
    for (const GeneratedQuery& q : set.false_queries) emit(q);
}

std::vector<LoadedQuery> load_query_set(const std::filesystem::path& path,
                                        const KnowledgeGraph& g) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open query set: " + path.string());
    std::vector<LoadedQuery> out;
    std::map<std::string, SubstructureConstraint> constraint_cache;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::istringstream ls(line);
        std::string s_name, t_name, labels_csv, ref, expect;
        if (!std::getline(ls, s_name, '\t') || !std::getline(ls, t_name, '\t') ||
            !std::getline(ls, labels_csv, '\t') || !std::getline(ls, ref, '\t') ||
            !std::getline(ls, expect, '\t'))
            throw FormatError("bad query set line " + std::to_string(line_number));

        LoadedQuery q;
        auto s = g.vertex_id(s_name);
        auto t = g.vertex_id(t_name);
        if (!s || !t) throw UnknownVertexName("query set line " + std::to_string(line_number));
        q.query.source = *s;
        q.query.target = *t;

        std::istringstream lc(labels_csv);
        std::string label;
        while (std::getline(lc, label, ',')) {
            auto id = g.label_id(label);
            if (!id) throw UnknownLabelName("query set line " + std::to_string(line_number));
            q.query.labels.add(*id);
        }

        auto it = constraint_cache.find(ref);
        if (it == constraint_cache.end()) {
            std::ifstream cf(path.parent_path() / ref);
            if (!cf) throw FormatError("missing constraint file: " + ref);
            std::stringstream buf;
            buf << cf.rdbuf();
            it = constraint_cache.emplace(ref, parse_constraint(buf.str(), g)).first;
        }
        q.query.constraint = it->second;

        if (expect != "T" && expect != "F")
            throw FormatError("bad expected flag on line " + std::to_string(line_number));
        q.expected = expect == "T";
        out.push_back(std::move(q));
    }
    return out;
}

} // namespace lscr
