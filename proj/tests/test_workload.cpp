#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "fixtures.hpp"
#include "lscr/errors.hpp"
#include "lscr/online_search.hpp"
#include "lscr/workload.hpp"

using namespace lscr;
using namespace lscr::test;

TEST_CASE("oracle answers the worked example queries") {
    KnowledgeGraph g = fixture_a();
    SubstructureConstraint s = s0(g);
    CHECK(oracle_lscr(g, make_query(g, "v0", "v4", {"likes", "follows"}, s)));
    CHECK_FALSE(oracle_lscr(g, make_query(g, "v0", "v3", {"likes", "follows"}, s)));
    CHECK(oracle_lscr(g, make_query(g, "v3", "v4", {"likes", "hates", "friendOf"}, s)));
}

TEST_CASE("label bfs basics") {
    KnowledgeGraph g = fixture_a();
    CHECK(label_bfs_reachable(g, vid(g, "v0"), vid(g, "v4"), labels_of(g, {"likes", "follows"})));
    CHECK_FALSE(label_bfs_reachable(g, vid(g, "v0"), vid(g, "v3"), labels_of(g, {"likes", "follows"})));
    CHECK(label_bfs_reachable(g, vid(g, "v2"), vid(g, "v2"), LabelSet{}));
}

TEST_CASE("gen_graph hits the edge budget and stays deterministic") {
    GraphGenSpec spec{1000, 3.6, 16, 8, 40, 1};
    KnowledgeGraph g = gen_graph(spec);
    CHECK(g.vertex_count() == 1000);
    CHECK(g.label_count() == 16);
    double target = 3600.0;
    CHECK(std::abs(static_cast<double>(g.edge_count()) - target) <= target * 0.01);

    KnowledgeGraph h = gen_graph(spec);
    CHECK(h.serialize_triples() == g.serialize_triples());
    CHECK(h.fingerprint() == g.fingerprint());

    // Schema present.
    CHECK(g.schema().classes.size() == 8);
}

TEST_CASE("gen_graph validates its spec") {
    CHECK_THROWS_AS(gen_graph(GraphGenSpec{1000, 0.0, 16, 8, 40, 1}), SpecInvalid);
    CHECK_THROWS_AS(gen_graph(GraphGenSpec{0, 2.0, 16, 8, 40, 1}), SpecInvalid);
    CHECK_THROWS_AS(gen_graph(GraphGenSpec{100, 2.0, 65, 8, 40, 1}), SpecInvalid);
    CHECK_THROWS_AS(gen_graph(GraphGenSpec{100, 2.0, 1, 8, 40, 1}), SpecInvalid);
}

TEST_CASE("gen_constraint_with_magnitude lands in the window") {
    KnowledgeGraph g = gen_graph(GraphGenSpec{5000, 3.0, 12, 6, 50, 3});
    for (std::size_t m : {std::size_t{10}, std::size_t{100}}) {
        SubstructureConstraint s = gen_constraint_with_magnitude(g, m, 17);
        std::size_t n = match_all(g, s).size();
        CHECK(n >= static_cast<std::size_t>(std::ceil(0.8 * static_cast<double>(m))));
        CHECK(n <= static_cast<std::size_t>(std::floor(1.2 * static_cast<double>(m))));
    }
    CHECK_THROWS_AS(gen_constraint_with_magnitude(g, 5000, 1), Unachievable);

    SubstructureConstraint a = gen_constraint_with_magnitude(g, 10, 99);
    SubstructureConstraint b = gen_constraint_with_magnitude(g, 10, 99);
    CHECK(constraint_to_text(a, g) == constraint_to_text(b, g));
}

TEST_CASE("gen_queries fills buckets with the distribution invariants") {
    KnowledgeGraph g = gen_graph(GraphGenSpec{1000, 3.6, 16, 8, 40, 1});
    SubstructureConstraint s = gen_constraint_with_magnitude(g, 10, 5);

    QueryGenSpec spec;
    spec.count_true = 12;
    spec.count_false = 12;
    spec.constraint = s;
    spec.seed = 2;
    GeneratedQuerySet set = gen_queries(g, spec);
    REQUIRE(set.true_queries.size() == 12);
    REQUIRE(set.false_queries.size() == 12);

    // Band uniformity within +-1 across the whole set.
    std::array<int, 3> bands{0, 0, 0};
    auto tally = [&](const GeneratedQuery& q) {
        REQUIRE(q.band >= 0);
        REQUIRE(q.band < 3);
        ++bands[static_cast<std::size_t>(q.band)];
        std::size_t size = static_cast<std::size_t>(q.query.labels.count());
        CHECK(5 * size >= g.label_count());
        CHECK(5 * size <= 4 * g.label_count());
    };
    for (const auto& q : set.true_queries) tally(q);
    for (const auto& q : set.false_queries) tally(q);
    CHECK(std::abs(bands[0] - bands[1]) <= 1);
    CHECK(std::abs(bands[1] - bands[2]) <= 1);
    CHECK(std::abs(bands[0] - bands[2]) <= 1);

    // False-kind balance within +-1.
    std::array<int, 3> kinds{0, 0, 0};
    for (const auto& q : set.false_queries) {
        REQUIRE(q.false_kind.has_value());
        ++kinds[static_cast<std::size_t>(*q.false_kind)];
    }
    CHECK(std::abs(kinds[0] - kinds[1]) <= 1);
    CHECK(std::abs(kinds[1] - kinds[2]) <= 1);

    // Tree-size filter was applied.
    for (const auto& q : set.true_queries) CHECK(q.tree_size >= q.min_threshold);

    // Generator classification agrees with the independent oracle.
    for (const auto& q : set.true_queries) CHECK(oracle_lscr(g, q.query));
    for (const auto& q : set.false_queries) CHECK_FALSE(oracle_lscr(g, q.query));
}

TEST_CASE("gen_queries trivial and failing cases") {
    KnowledgeGraph g = gen_graph(GraphGenSpec{300, 3.0, 10, 4, 20, 4});

    QueryGenSpec empty;
    empty.count_true = 0;
    empty.count_false = 0;
    empty.constraint = gen_constraint_with_magnitude(g, 10, 1);
    CHECK(gen_queries(g, empty).true_queries.empty());

    // A constraint nothing satisfies: true bucket cannot fill.
    KnowledgeGraph tiny = KnowledgeGraph::from_string(
        "a\tp\tb\n"
        "b\tp\tc\n"
        "x\tq\ty\n");
    QueryGenSpec impossible;
    impossible.count_true = 1;
    impossible.count_false = 0;
    impossible.constraint = parse_constraint("SELECT ?x WHERE { ?x q y . ?x p ?z }", tiny);
    impossible.seed = 1;
    CHECK(match_all(tiny, *impossible.constraint).members.empty());
    CHECK_THROWS_AS(gen_queries(tiny, impossible), Timeout);
}

TEST_CASE("oracle agrees with uis across random instances") {
    Rng rng(211);
    for (int round = 0; round < 150; ++round) {
        KnowledgeGraph g = random_graph(rng, 15 + rng.index(50), 4, 2.0);
        LscrQuery q = random_query(rng, g);
        CHECK(oracle_lscr(g, q) == uis_query(g, q).value);
    }
}

TEST_CASE("query set files round-trip") {
    KnowledgeGraph g = gen_graph(GraphGenSpec{1000, 3.6, 16, 8, 40, 9});
    QueryGenSpec spec;
    spec.count_true = 4;
    spec.count_false = 3;
    spec.constraint = gen_constraint_with_magnitude(g, 10, 2);
    spec.seed = 8;
    GeneratedQuerySet set = gen_queries(g, spec);

    auto dir = std::filesystem::temp_directory_path();
    auto path = dir / "lscr_queries.tsv";
    save_query_set(set, g, path);
    std::vector<LoadedQuery> loaded = load_query_set(path, g);
    REQUIRE(loaded.size() == 7);

    std::size_t i = 0;
    auto check_one = [&](const GeneratedQuery& q) {
        CHECK(loaded[i].query.source == q.query.source);
        CHECK(loaded[i].query.target == q.query.target);
        CHECK(loaded[i].query.labels == q.query.labels);
        CHECK(loaded[i].expected == q.expected);
        CHECK(match_all(g, loaded[i].query.constraint).members ==
              match_all(g, q.query.constraint).members);
        ++i;
    };
    for (const auto& q : set.true_queries) check_one(q);
    for (const auto& q : set.false_queries) check_one(q);

    std::filesystem::remove(path);
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().filename().string().rfind("lscr_queries.c", 0) == 0)
            std::filesystem::remove(e.path());
}
