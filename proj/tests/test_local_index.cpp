#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "lscr/cms_oracle.hpp"
#include "lscr/errors.hpp"
#include "lscr/local_index.hpp"
#include "lscr/workload.hpp"

using namespace lscr;
using namespace lscr::test;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

std::vector<VertexId> owned_by(const LandmarkAssignment& a, VertexId u) {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < a.owner.size(); ++v)
        if (a.owner[v] == u) out.push_back(v);
    return out;
}

std::string file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("default landmark count formula") {
    CHECK(default_landmark_count(10000) == 1329);
    CHECK(default_landmark_count(1) == 1);
}

TEST_CASE("select_landmarks bounds and determinism") {
    KnowledgeGraph g = fixture_a();
    CHECK_THROWS_AS(select_landmarks(g, 6, 1), KTooLarge);

    auto all = select_landmarks(g, 5, 3);
    CHECK(all.size() == 5);

    auto a = select_landmarks(g, 2, 7);
    auto b = select_landmarks(g, 2, 7);
    CHECK(a == b);
    CHECK(a.size() == 2);
    CHECK(a[0] != a[1]);
}

TEST_CASE("select_landmarks draws from schema classes first") {
    KnowledgeGraph g = KnowledgeGraph::from_string(
        "i0\trdf:type\tC\n"
        "i1\trdf:type\tC\n"
        "i2\trdf:type\tC\n"
        "x\tp\ty\n");
    auto lm = select_landmarks(g, 2, 11);
    REQUIRE(lm.size() == 2);
    for (VertexId v : lm) {
        bool is_instance = g.schema().instance_of.count(v) > 0;
        CHECK(is_instance);
    }
}

TEST_CASE("bfs_partition single landmark owns everything reachable") {
    KnowledgeGraph g = fixture_a();
    auto a = bfs_partition(g, {vid(g, "v0")});
    for (VertexId v = 0; v < g.vertex_count(); ++v) CHECK(a.owner[v] == vid(g, "v0"));
}

TEST_CASE("bfs_partition with all vertices as landmarks") {
    KnowledgeGraph g = fixture_a();
    std::vector<VertexId> all;
    for (VertexId v = 0; v < g.vertex_count(); ++v) all.push_back(v);
    auto a = bfs_partition(g, all);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        CHECK(a.owner[v] == v);
        CHECK(a.is_landmark(v));
    }
}

TEST_CASE("bfs_partition ownership implies label-free reachability") {
    Rng rng(13);
    for (int round = 0; round < 30; ++round) {
        KnowledgeGraph g = random_graph(rng, 30 + rng.index(40), 4, 2.0);
        std::vector<VertexId> lms = select_landmarks(g, 1 + rng.index(5), rng.next());
        auto a = bfs_partition(g, lms);
        for (VertexId u : lms) CHECK(a.owner[u] == u);
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (a.owner[v] == kNoOwner) continue;
            CHECK(label_bfs_reachable(g, a.owner[v], v, g.full_label_mask()));
        }
    }
}

TEST_CASE("local_full_index on the whole fixture matches the worked CMS values") {
    KnowledgeGraph g = fixture_a();
    auto a = bfs_partition(g, {vid(g, "v0")});
    PerLandmark pl = local_full_index(g, vid(g, "v0"), a);

    const LabelSetFamily* m3 = pl.ii.find(vid(g, "v3"));
    REQUIRE(m3 != nullptr);
    CHECK(m3->same_sets(LabelSetFamily{labels_of(g, {"friendOf"})}));

    const LabelSetFamily* m4 = pl.ii.find(vid(g, "v4"));
    REQUIRE(m4 != nullptr);
    CHECK(m4->same_sets(LabelSetFamily{labels_of(g, {"friendOf", "likes"}),
                                       labels_of(g, {"advisorOf", "follows"}),
                                       labels_of(g, {"likes", "follows"})}));

    // Whole graph owned: no boundary.
    CHECK(pl.eit.entries.empty());
    CHECK(pl.d.counts.empty());
    // The landmark itself holds the implicit empty-set entry, not a stored one.
    CHECK(pl.ii.find(vid(g, "v0")) == nullptr);
    CHECK(pl.ii.check(vid(g, "v0"), LabelSet{}));
}

TEST_CASE("landmark with no out-edges yields empty tables") {
    KnowledgeGraph g = KnowledgeGraph::from_string("a\tp\tb\n");
    auto a = bfs_partition(g, {vid(g, "b")});
    PerLandmark pl = local_full_index(g, vid(g, "b"), a);
    CHECK(pl.ii.size() == 0);
    CHECK(pl.eit.entries.empty());
    CHECK(pl.d.counts.empty());
}

TEST_CASE("internal index matches the scope-restricted oracle") {
    Rng rng(17);
    for (int round = 0; round < 40; ++round) {
        KnowledgeGraph g = random_graph(rng, 20 + rng.index(40), 4, 2.0);
        std::vector<VertexId> lms = select_landmarks(g, 1 + rng.index(4), rng.next());
        LocalIndex ix = build_index_with_landmarks(g, lms, lms.size(), 0);
        for (std::size_t i = 0; i < lms.size(); ++i) {
            VertexId u = lms[i];
            std::vector<VertexId> scope = owned_by(ix.assignment(), u);
            for (VertexId v : scope) {
                LabelSetFamily expect = cms_oracle(g, u, v, scope);
                if (v == u) {
                    CHECK(expect.contains(LabelSet{}));
                    CHECK(ix.at(u).ii.find(v) == nullptr);
                    CHECK(ix.at(u).ii.check(v, LabelSet{}));
                    continue;
                }
                const LabelSetFamily* got = ix.at(u).ii.find(v);
                REQUIRE_MESSAGE(got != nullptr, "missing entry for owned vertex");
                CHECK(got->same_sets(expect));
            }
        }
    }
}

TEST_CASE("external index transposition and correlation counts") {
    // Two landmarks a and x; a's subgraph exits into x's.
    KnowledgeGraph g = KnowledgeGraph::from_string(
        "a\tp\tb\n"
        "b\tq\tx\n"
        "b\tp\tx\n"
        "x\tr\ty\n"
        "a\tq\tz\n");
    VertexId a = vid(g, "a"), x = vid(g, "x");
    LocalIndex ix = build_index_with_landmarks(g, {a, x}, 2, 0);

    REQUIRE(ix.owner(vid(g, "b")) == a);
    REQUIRE(ix.owner(vid(g, "y")) == x);
    // z is reached by a's frontier too.
    REQUIRE(ix.owner(vid(g, "z")) == a);

    const PerLandmark& pa = ix.at(a);
    // Boundary pairs: x via {p,q} and via {p,p}={p}; minimal family {{p}}.
    auto itp = pa.eit.entries.find(labels_of(g, {"p"}));
    REQUIRE(itp != pa.eit.entries.end());
    CHECK(itp->second == std::vector<VertexId>{x});
    CHECK(pa.eit.entries.count(labels_of(g, {"p", "q"})) == 0);
    // One boundary key vertex owned by landmark x.
    CHECK(pa.d.get(x) == 1);
    CHECK(pa.d.get(a) == 0);
}

TEST_CASE("index check on the fixture") {
    KnowledgeGraph g = fixture_a();
    LocalIndex ix = build_index_with_landmarks(g, {vid(g, "v0")}, 1, 0);
    const InternalIndex& ii = ix.at(vid(g, "v0")).ii;
    CHECK(index_check(ii, vid(g, "v4"), labels_of(g, {"likes", "follows"})));
    CHECK_FALSE(index_check(ii, vid(g, "v4"), labels_of(g, {"friendOf"})));
}

TEST_CASE("index check misses vertices outside the table") {
    KnowledgeGraph g = KnowledgeGraph::from_string("a\tp\tb\nc\tp\td\n");
    LocalIndex ix = build_index_with_landmarks(g, {vid(g, "a")}, 1, 0);
    const InternalIndex& ii = ix.at(vid(g, "a")).ii;
    CHECK(index_check(ii, vid(g, "b"), labels_of(g, {"p"})));
    CHECK_FALSE(index_check(ii, vid(g, "d"), labels_of(g, {"p"})));
}

TEST_CASE("build_index composes and stays deterministic") {
    KnowledgeGraph g = fixture_a();
    LocalIndex a = build_index(g, 2, 7);
    CHECK(a.assignment().landmarks.size() == 2);

    auto pa = temp_file("lscr_ix_a.bin");
    auto pb = temp_file("lscr_ix_b.bin");
    a.save(pa);
    LocalIndex b = build_index(g, 2, 7, 2);
    b.save(pb);
    CHECK(file_bytes(pa) == file_bytes(pb));
    std::filesystem::remove(pa);
    std::filesystem::remove(pb);
}

TEST_CASE("k=0 builds an empty index") {
    KnowledgeGraph g = fixture_a();
    LocalIndex ix = build_index(g, 0, 1);
    CHECK(ix.assignment().landmarks.empty());
    for (VertexId v = 0; v < g.vertex_count(); ++v) CHECK(ix.owner(v) == kNoOwner);
}

TEST_CASE("index save/load round-trip") {
    Rng rng(23);
    KnowledgeGraph g = random_graph(rng, 40, 5, 2.5, true);
    LocalIndex ix = build_index(g, 5, 9);
    auto path = temp_file("lscr_ix_rt.bin");
    ix.save(path);

    LocalIndex back = LocalIndex::load(path, g);
    CHECK(back.assignment().landmarks == ix.assignment().landmarks);
    CHECK(back.assignment().owner == ix.assignment().owner);
    REQUIRE(back.per_landmark().size() == ix.per_landmark().size());
    for (std::size_t i = 0; i < ix.per_landmark().size(); ++i) {
        const PerLandmark& x = ix.per_landmark()[i];
        const PerLandmark& y = back.per_landmark()[i];
        CHECK(x.ii.size() == y.ii.size());
        for (const auto& [v, fam] : x.ii.entries()) {
            const LabelSetFamily* got = y.ii.find(v);
            REQUIRE(got != nullptr);
            CHECK(got->same_sets(fam));
        }
        CHECK(x.eit.entries == y.eit.entries);
        CHECK(x.d.counts == y.d.counts);
    }

    // Saving the loaded index reproduces the bytes.
    auto path2 = temp_file("lscr_ix_rt2.bin");
    back.save(path2);
    CHECK(file_bytes(path) == file_bytes(path2));
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("index load rejects wrong graphs and truncated files") {
    KnowledgeGraph g = fixture_a();
    LocalIndex ix = build_index(g, 1, 1);
    auto path = temp_file("lscr_ix_bad.bin");
    ix.save(path);

    KnowledgeGraph other = KnowledgeGraph::from_string("a\tp\tb\n");
    CHECK_THROWS_AS(LocalIndex::load(path, other), FingerprintMismatch);

    std::string bytes = file_bytes(path);
    {
        std::ofstream out(path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    CHECK_THROWS_AS(LocalIndex::load(path, g), FormatError);

    {
        std::ofstream out(path, std::ios::binary);
        out << "garbage garbage garbage";
    }
    CHECK_THROWS_AS(LocalIndex::load(path, g), FormatError);
    std::filesystem::remove(path);
}

TEST_CASE("external index entries are sound under supersets") {
    Rng rng(29);
    int checked = 0;
    for (int round = 0; round < 25 && checked < 300; ++round) {
        KnowledgeGraph g = random_graph(rng, 25 + rng.index(30), 4, 2.5);
        std::vector<VertexId> lms = select_landmarks(g, 2 + rng.index(3), rng.next());
        LocalIndex ix = build_index_with_landmarks(g, lms, lms.size(), 0);
        for (std::size_t i = 0; i < lms.size(); ++i) {
            for (const auto& [lu, verts] : ix.per_landmark()[i].eit.entries) {
                LabelSet l = lu;
                // A random superset within the universe.
                for (std::size_t b = 0; b < g.label_count(); ++b)
                    if (rng.coin()) l.add(static_cast<LabelId>(b));
                for (VertexId v : verts) {
                    CHECK(label_bfs_reachable(g, lms[i], v, l));
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("entry count bounds per landmark") {
    Rng rng(37);
    KnowledgeGraph g = random_graph(rng, 60, 4, 2.5);
    std::vector<VertexId> lms = select_landmarks(g, 4, 1);
    LocalIndex ix = build_index_with_landmarks(g, lms, 4, 1);
    for (std::size_t i = 0; i < lms.size(); ++i) {
        std::size_t owned = owned_by(ix.assignment(), lms[i]).size();
        const PerLandmark& pl = ix.per_landmark()[i];
        CHECK(pl.ii.size() <= owned);
        std::size_t sets = 0;
        for (const auto& [v, fam] : pl.ii.entries()) sets += fam.size();
        CHECK(sets <= owned * (std::size_t{1} << g.label_count()));
    }
}
