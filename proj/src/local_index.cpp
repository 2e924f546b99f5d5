#include "lscr/local_index.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <thread>

#include "lscr/errors.hpp"
#include "lscr/rng.hpp"

namespace lscr {

LandmarkAssignment LandmarkAssignment::empty(std::size_t vertex_count) {
    LandmarkAssignment a;
    a.owner.assign(vertex_count, kNoOwner);
    a.landmark_pos.assign(vertex_count, -1);
    return a;
}

std::size_t default_landmark_count(std::size_t vertex_count) {
    if (vertex_count <= 1) return vertex_count;
    double v = static_cast<double>(vertex_count);
    return static_cast<std::size_t>(std::ceil(std::log2(v) * std::sqrt(v)));
}

std::vector<VertexId> select_landmarks(const KnowledgeGraph& g, std::size_t k,
                                       std::uint64_t seed) {
    if (k > g.vertex_count()) throw KTooLarge(k, g.vertex_count());

    Rng rng(seed);
    std::vector<VertexId> landmarks;
    std::vector<std::uint8_t> marked(g.vertex_count(), 0);
    auto mark = [&](VertexId v) {
        if (marked[v]) return false;
        marked[v] = 1;
        landmarks.push_back(v);
        return true;
    };

    const auto& classes = g.schema().classes;
    if (!classes.empty()) {
        std::vector<VertexId> pool = classes;
        rng.shuffle(pool);
        std::size_t pick = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(classes.size()))));
        pool.resize(std::min(pick, pool.size()));

        // Even marking: each class contributes instances spread at a uniform
        // stride across its (id-sorted) instance list, visited round-robin.
        std::vector<std::vector<VertexId>> instance_lists;
        for (VertexId c : pool) {
            std::vector<VertexId> all = g.instances_of_class(c);
            std::size_t want = k / pool.size() + (k % pool.size() ? 1 : 0);
            std::vector<VertexId> spread;
            if (want == 0 || all.empty()) {
                spread = std::move(all);
            } else if (all.size() <= want) {
                spread = std::move(all);
            } else {
                double stride = static_cast<double>(all.size()) / static_cast<double>(want);
                for (std::size_t j = 0; j < want; ++j)
                    spread.push_back(all[static_cast<std::size_t>(stride * (0.5 + static_cast<double>(j)))]);
            }
            instance_lists.push_back(std::move(spread));
        }

        std::vector<std::size_t> cursor(instance_lists.size(), 0);
        bool progressed = true;
        while (landmarks.size() < k && progressed) {
            progressed = false;
            for (std::size_t i = 0; i < instance_lists.size() && landmarks.size() < k; ++i) {
                auto& cur = cursor[i];
                const auto& list = instance_lists[i];
                while (cur < list.size()) {
                    VertexId v = list[cur++];
                    if (mark(v)) {
                        progressed = true;
                        break;
                    }
                }
            }
        }
    }

    if (landmarks.size() < k) {
        std::vector<VertexId> pool(g.vertex_count());
        for (VertexId v = 0; v < g.vertex_count(); ++v) pool[v] = v;
        rng.shuffle(pool);
        for (VertexId v : pool) {
            if (landmarks.size() >= k) break;
            mark(v);
        }
    }
    return landmarks;
}

LandmarkAssignment bfs_partition(const KnowledgeGraph& g,
                                 const std::vector<VertexId>& landmarks) {
    LandmarkAssignment a = LandmarkAssignment::empty(g.vertex_count());
    a.landmarks = landmarks;
    for (std::size_t i = 0; i < landmarks.size(); ++i)
        a.landmark_pos[landmarks[i]] = static_cast<std::int32_t>(i);

    std::vector<std::uint8_t> explored(g.vertex_count(), 0);
    std::vector<std::deque<VertexId>> frontier(landmarks.size());
    std::deque<std::size_t> rotation;
    for (std::size_t i = 0; i < landmarks.size(); ++i) {
        VertexId u = landmarks[i];
        a.owner[u] = u;
        explored[u] = 1;
        frontier[i].push_back(u);
        rotation.push_back(i);
    }

    while (!rotation.empty()) {
        std::size_t i = rotation.front();
        rotation.pop_front();
        auto& q = frontier[i];
        VertexId v = q.front();
        q.pop_front();
        for (const Arc& arc : g.out(v)) {
            if (explored[arc.other]) continue;
            explored[arc.other] = 1;
            a.owner[arc.other] = landmarks[i];
            q.push_back(arc.other);
        }
        if (!q.empty()) rotation.push_back(i);
    }
    return a;
}

PerLandmark local_full_index(const KnowledgeGraph& g, VertexId u,
                             const LandmarkAssignment& assignment) {
    PerLandmark out;
    out.ii = InternalIndex(u);

    // Boundary pairs collected as vertex -> family before transposition.
    std::unordered_map<VertexId, LabelSetFamily> ei;

    std::deque<std::pair<VertexId, LabelSet>> queue;
    queue.emplace_back(u, LabelSet{});
    while (!queue.empty()) {
        auto [v, l] = queue.front();
        queue.pop_front();
        if (!out.ii.insert(v, l)) continue;
        for (const Arc& a : g.out(v)) {
            LabelSet nl = l.with(a.label);
            if (assignment.owner[a.other] == u)
                queue.emplace_back(a.other, nl);
            else
                ei[a.other].insert(nl);
        }
    }

    for (const auto& [w, fam] : ei) {
        for (LabelSet l : fam) out.eit.entries[l].push_back(w);
        VertexId o = assignment.owner[w];
        if (o != kNoOwner) ++out.d.counts[o];
    }
    for (auto& [l, verts] : out.eit.entries) std::sort(verts.begin(), verts.end());
    return out;
}

LocalIndex::LocalIndex(LandmarkAssignment assignment, std::vector<PerLandmark> per_landmark,
                       IndexBuildMeta meta)
    : assignment_(std::move(assignment)),
      per_landmark_(std::move(per_landmark)),
      meta_(meta) {}

LocalIndex build_index_with_landmarks(const KnowledgeGraph& g, std::vector<VertexId> landmarks,
                                      std::size_t k, std::uint64_t seed, unsigned workers) {
    auto start = std::chrono::steady_clock::now();
    LandmarkAssignment assignment = landmarks.empty()
                                        ? LandmarkAssignment::empty(g.vertex_count())
                                        : bfs_partition(g, landmarks);
    if (landmarks.empty()) assignment.landmarks.clear();

    std::vector<PerLandmark> per(assignment.landmarks.size());
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, std::max<std::size_t>(1, per.size()));

    if (workers <= 1 || per.size() <= 1) {
        for (std::size_t i = 0; i < per.size(); ++i)
            per[i] = local_full_index(g, assignment.landmarks[i], assignment);
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= per.size()) break;
                per[i] = local_full_index(g, assignment.landmarks[i], assignment);
            }
        };
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }

    IndexBuildMeta meta;
    meta.k = k;
    meta.seed = seed;
    meta.graph_fingerprint = g.fingerprint();
    meta.build_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return LocalIndex(std::move(assignment), std::move(per), meta);
}

LocalIndex build_index(const KnowledgeGraph& g, std::size_t k, std::uint64_t seed,
                       unsigned workers) {
    return build_index_with_landmarks(g, select_landmarks(g, k, seed), k, seed, workers);
}

// ---------------------------------------------------------------- file format
//
// All integers little-endian fixed width. Layout:
//   magic "LSCRIDX1", u64 fingerprint, u64 k, u64 seed,
//   u64 vertex_count, u64 landmark_count,
//   landmark ids (u32 each), owner array (u32 each),
//   per landmark: u32 id,
//     u64 ii entries: u32 vertex, u32 set count, u64 bits each (sorted),
//     u64 eit entries: u64 bits, u64 vertex count, u32 vertices,
//     u64 d entries: u32 landmark, u64 count (sorted),
//   trailing magic "LSCREND1".

namespace {

constexpr char kMagic[8] = {'L', 'S', 'C', 'R', 'I', 'D', 'X', '1'};
constexpr char kEndMagic[8] = {'L', 'S', 'C', 'R', 'E', 'N', 'D', '1'};

struct Writer {
    std::string buf;
    void raw(const void* p, std::size_t n) { buf.append(static_cast<const char*>(p), n); }
    void u32(std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        raw(b, 4);
    }
    void u64(std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        raw(b, 8);
    }
};

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;
    void raw(void* p, std::size_t n) {
        if (pos + n > buf.size()) throw FormatError("truncated index file");
        std::memcpy(p, buf.data() + pos, n);
        pos += n;
    }
    std::uint32_t u32() {
        std::uint8_t b[4];
        raw(b, 4);
        return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
               std::uint32_t(b[3]) << 24;
    }
    std::uint64_t u64() {
        std::uint8_t b[8];
        raw(b, 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
        return v;
    }
};

std::string serialize_index(const LocalIndex& ix) {
    Writer w;
    w.raw(kMagic, 8);
    w.u64(ix.meta().graph_fingerprint);
    w.u64(ix.meta().k);
    w.u64(ix.meta().seed);
    const auto& a = ix.assignment();
    w.u64(a.owner.size());
    w.u64(a.landmarks.size());
    for (VertexId l : a.landmarks) w.u32(l);
    for (VertexId o : a.owner) w.u32(o);

    for (std::size_t i = 0; i < a.landmarks.size(); ++i) {
        const PerLandmark& pl = ix.per_landmark()[i];
        w.u32(a.landmarks[i]);

        std::vector<VertexId> keys;
        keys.reserve(pl.ii.entries().size());
        for (const auto& [v, fam] : pl.ii.entries()) keys.push_back(v);
        std::sort(keys.begin(), keys.end());
        w.u64(keys.size());
        for (VertexId v : keys) {
            const LabelSetFamily& fam = *pl.ii.find(v);
            w.u32(v);
            auto sets = fam.sorted_sets();
            w.u32(static_cast<std::uint32_t>(sets.size()));
            for (LabelSet s : sets) w.u64(s.bits());
        }

        w.u64(pl.eit.entries.size());
        for (const auto& [l, verts] : pl.eit.entries) {
            w.u64(l.bits());
            w.u64(verts.size());
            for (VertexId v : verts) w.u32(v);
        }

        std::vector<std::pair<VertexId, std::uint64_t>> d(pl.d.counts.begin(),
                                                          pl.d.counts.end());
        std::sort(d.begin(), d.end());
        w.u64(d.size());
        for (auto [lm, count] : d) {
            w.u32(lm);
            w.u64(count);
        }
    }
    w.raw(kEndMagic, 8);
    return std::move(w.buf);
}

} // namespace

std::size_t LocalIndex::serialized_bytes() const { return serialize_index(*this).size(); }

void LocalIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write index file: " + path.string());
    std::string bytes = serialize_index(*this);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

LocalIndex LocalIndex::load(const std::filesystem::path& path, const KnowledgeGraph& g) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index file: " + path.string());
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    Reader r{buf};
    char magic[8];
    r.raw(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) throw FormatError("bad index magic");

    IndexBuildMeta meta;
    meta.graph_fingerprint = r.u64();
    meta.k = r.u64();
    meta.seed = r.u64();
    if (meta.graph_fingerprint != g.fingerprint())
        throw FingerprintMismatch("index was built over a different graph");

    std::uint64_t vertex_count = r.u64();
    if (vertex_count != g.vertex_count()) throw FingerprintMismatch("vertex count differs");
    std::uint64_t landmark_count = r.u64();
    if (landmark_count > vertex_count) throw FormatError("implausible landmark count");

    LandmarkAssignment a = LandmarkAssignment::empty(vertex_count);
    a.landmarks.resize(landmark_count);
    for (auto& l : a.landmarks) l = r.u32();
    for (std::size_t i = 0; i < landmark_count; ++i) {
        if (a.landmarks[i] >= vertex_count) throw FormatError("landmark id out of range");
        a.landmark_pos[a.landmarks[i]] = static_cast<std::int32_t>(i);
    }
    for (auto& o : a.owner) {
        o = r.u32();
        if (o != kNoOwner && o >= vertex_count) throw FormatError("owner out of range");
    }

    std::vector<PerLandmark> per(landmark_count);
    for (std::size_t i = 0; i < landmark_count; ++i) {
        std::uint32_t id = r.u32();
        if (id != a.landmarks[i]) throw FormatError("landmark record out of order");
        PerLandmark& pl = per[i];
        pl.ii = InternalIndex(id);

        std::uint64_t ii_count = r.u64();
        for (std::uint64_t e = 0; e < ii_count; ++e) {
            VertexId v = r.u32();
            std::uint32_t nsets = r.u32();
            LabelSetFamily fam;
            for (std::uint32_t si = 0; si < nsets; ++si)
                fam.insert(LabelSet::from_bits(r.u64()));
            pl.ii.mutable_entries().emplace(v, std::move(fam));
        }

        std::uint64_t eit_count = r.u64();
        for (std::uint64_t e = 0; e < eit_count; ++e) {
            LabelSet l = LabelSet::from_bits(r.u64());
            std::uint64_t nv = r.u64();
            std::vector<VertexId> verts(nv);
            for (auto& v : verts) v = r.u32();
            pl.eit.entries.emplace(l, std::move(verts));
        }

        std::uint64_t d_count = r.u64();
        for (std::uint64_t e = 0; e < d_count; ++e) {
            VertexId lm = r.u32();
            pl.d.counts[lm] = r.u64();
        }
    }

    char end[8];
    r.raw(end, 8);
    if (std::memcmp(end, kEndMagic, 8) != 0 || r.pos != buf.size())
        throw FormatError("bad index trailer");
    return LocalIndex(std::move(a), std::move(per), meta);
}

} // namespace lscr
