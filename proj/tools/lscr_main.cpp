// lscr: LSCR query engine CLI.
//
// Subcommands: ingest, index (with nested `index stats`), query, bench, gen.
// `query` encodes the answer in its exit code: 0 true, 1 false, >=2 error.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lscr/bench.hpp"
#include "lscr/errors.hpp"
#include "lscr/informed_search.hpp"
#include "lscr/local_index.hpp"
#include "lscr/online_search.hpp"
#include "lscr/workload.hpp"

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;

lscr::LabelSet parse_labels(const std::string& csv, const lscr::KnowledgeGraph& g) {
    lscr::LabelSet out;
    std::istringstream in(csv);
    std::string name;
    while (std::getline(in, name, ',')) {
        if (name.empty()) continue;
        auto id = g.label_id(name);
        if (!id) throw lscr::UnknownLabelName("unknown label: " + name);
        out.add(*id);
    }
    return out;
}

lscr::SubstructureConstraint read_constraint(const std::string& path,
                                             const lscr::KnowledgeGraph& g) {
    std::ifstream in(path);
    if (!in) throw lscr::Error("cannot open constraint file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return lscr::parse_constraint(buf.str(), g);
}

lscr::VertexId resolve_vertex(const std::string& name, const lscr::KnowledgeGraph& g) {
    auto id = g.vertex_id(name);
    if (!id) throw lscr::UnknownVertexName("unknown vertex: " + name);
    return *id;
}

void print_stats(const lscr::SearchStats& st) {
    std::printf("passed=%" PRIu64 "\n", st.passed_vertices);
    std::printf("scck_calls=%" PRIu64 "\n", st.scck_calls);
    std::printf("edges_scanned=%" PRIu64 "\n", st.edges_scanned);
    std::printf("lcs_invocations=%" PRIu64 "\n", st.lcs_invocations);
    std::printf("pops=%" PRIu64 "\n", st.pops);
    std::printf("time_us=%.3f\n", st.wall_time_us);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LSCR query engine: reachability with label and substructure constraints"};
    app.require_subcommand(1);

    std::string graph_path, index_path, out_path, from_name, to_name, labels_csv,
        constraint_path, algo_name, algos_csv = "uis,uis-star,ins", queries_path;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    bool rho_invert = false;
    unsigned workers = 0;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "load a triple file and print a summary");
    ingest->add_option("--graph", graph_path, "triple file")->required();

    // index (build) + index stats
    auto* index = app.add_subcommand("index", "build a local landmark index");
    index->add_option("--graph", graph_path, "triple file");
    auto* index_k_opt = index->add_option("--k", k, "landmark count (default log2|V|*sqrt|V|)");
    index->add_option("--seed", seed, "selection seed");
    index->add_option("--out", out_path, "output index file");
    index->add_option("--workers", workers, "parallel build workers (default: hardware)");
    auto* index_stats = index->add_subcommand("stats", "print per-landmark entry counts");
    index_stats->add_option("--graph", graph_path, "triple file")->required();
    index_stats->add_option("--index", index_path, "index file")->required();

    // query
    auto* query = app.add_subcommand("query", "answer one LSCR query");
    query->add_option("--graph", graph_path)->required();
    query->add_option("--index", index_path, "index file (required for ins)");
    query->add_option("--from", from_name)->required();
    query->add_option("--to", to_name)->required();
    query->add_option("--labels", labels_csv, "comma-separated label names")->required();
    query->add_option("--constraint", constraint_path, "constraint file")->required();
    query->add_option("--algo", algo_name)->required()->check(CLI::IsMember({"uis", "uis-star", "ins"}));
    query->add_flag("--rho-invert", rho_invert, "flip the rho priority comparison");
    bool witness = false;
    query->add_flag("--witness", witness, "print a witness path when the answer is true");

    // bench
    auto* bench = app.add_subcommand("bench", "run a query set against the algorithms");
    bench->add_option("--graph", graph_path)->required();
    bench->add_option("--index", index_path);
    bench->add_option("--queries", queries_path, "query set file")->required();
    bench->add_option("--algos", algos_csv, "comma list among uis,uis-star,ins");
    bench->add_option("--out", out_path, "write machine-readable lines here too");
    bench->add_flag("--rho-invert", rho_invert);
    bench->add_option("--workers", workers, "parallel query workers");

    // gen graph / gen queries
    auto* gen = app.add_subcommand("gen", "generate synthetic graphs and query sets");
    gen->require_subcommand(1);
    auto* gen_graph_cmd = gen->add_subcommand("graph", "generate a synthetic graph");
    std::size_t gv = 10000, glabels = 16, gclasses = 8, ginst = 64;
    double gdensity = 3.6;
    gen_graph_cmd->add_option("--vertices", gv);
    gen_graph_cmd->add_option("--density", gdensity);
    gen_graph_cmd->add_option("--labels", glabels);
    gen_graph_cmd->add_option("--classes", gclasses);
    gen_graph_cmd->add_option("--instances-per-class", ginst);
    gen_graph_cmd->add_option("--seed", seed);
    gen_graph_cmd->add_option("--out", out_path)->required();

    auto* gen_queries_cmd = gen->add_subcommand("queries", "generate an evaluation query set");
    std::size_t q_true = 20, q_false = 20, magnitude = 0;
    gen_queries_cmd->add_option("--graph", graph_path)->required();
    gen_queries_cmd->add_option("--count-true", q_true);
    gen_queries_cmd->add_option("--count-false", q_false);
    gen_queries_cmd->add_option("--constraint", constraint_path, "fixed constraint file");
    gen_queries_cmd->add_option("--magnitude", magnitude, "random constraints near this |V(S,G)|");
    gen_queries_cmd->add_option("--seed", seed);
    gen_queries_cmd->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (ingest->parsed()) {
            lscr::KnowledgeGraph g = lscr::KnowledgeGraph::load(graph_path);
            std::printf("vertices=%zu\n", g.vertex_count());
            std::printf("edges=%zu\n", g.edge_count());
            std::printf("labels=%zu\n", g.label_count());
            std::printf("classes=%zu\n", g.schema().classes.size());
            std::printf("fingerprint=%016" PRIx64 "\n", g.fingerprint());
            return 0;
        }

        if (index->parsed()) {
            if (index_stats->parsed()) {
                lscr::KnowledgeGraph g = lscr::KnowledgeGraph::load(graph_path);
                lscr::LocalIndex ix = lscr::LocalIndex::load(index_path, g);
                std::printf("landmarks=%zu\n", ix.assignment().landmarks.size());
                std::size_t owned = 0;
                for (lscr::VertexId v = 0; v < g.vertex_count(); ++v)
                    if (ix.owner(v) != lscr::kNoOwner) ++owned;
                std::printf("owned_vertices=%zu\n", owned);
                for (std::size_t i = 0; i < ix.assignment().landmarks.size(); ++i) {
                    lscr::VertexId u = ix.assignment().landmarks[i];
                    const lscr::PerLandmark& pl = ix.per_landmark()[i];
                    std::size_t eit_pairs = 0;
                    for (const auto& [l, verts] : pl.eit.entries) eit_pairs += verts.size();
                    std::printf("landmark %s ii_entries=%zu eit_entries=%zu d_entries=%zu\n",
                                g.vertex_name(u).c_str(), pl.ii.size(), eit_pairs,
                                pl.d.counts.size());
                }
                std::printf("total_bytes=%zu\n", ix.serialized_bytes());
                return 0;
            }
            if (graph_path.empty() || out_path.empty())
                throw lscr::Error("index requires --graph and --out");
            lscr::KnowledgeGraph g = lscr::KnowledgeGraph::load(graph_path);
            std::size_t use_k = index_k_opt->count() ? k : lscr::default_landmark_count(g.vertex_count());
            lscr::LocalIndex ix = lscr::build_index(g, use_k, seed, workers);
            ix.save(out_path);
            std::printf("landmarks=%zu\n", ix.assignment().landmarks.size());
            std::printf("build_seconds=%.3f\n", ix.meta().build_seconds);
            std::printf("bytes=%zu\n", ix.serialized_bytes());
            return 0;
        }

        if (query->parsed()) {
            lscr::KnowledgeGraph g = lscr::KnowledgeGraph::load(graph_path);
            lscr::LscrQuery q;
            q.source = resolve_vertex(from_name, g);
            q.target = resolve_vertex(to_name, g);
            q.labels = parse_labels(labels_csv, g);
            q.constraint = read_constraint(constraint_path, g);

            lscr::QueryAnswer ans;
            if (algo_name == "uis") {
                ans = lscr::uis_query(g, q, witness);
            } else if (algo_name == "uis-star") {
                lscr::VertexSetResult vsg = lscr::match_all(g, q.constraint);
                ans = lscr::uis_star_query(g, q, vsg, witness);
            } else {
                if (index_path.empty())
                    throw lscr::Error("--algo ins requires --index");
                lscr::LocalIndex ix = lscr::LocalIndex::load(index_path, g);
                lscr::VertexSetResult vsg = lscr::match_all(g, q.constraint);
                ans = lscr::ins_query(g, ix, q, vsg, {rho_invert});
            }

            std::printf("%s\n", ans.value ? "true" : "false");
            print_stats(ans.stats);
            if (ans.witness) {
                std::string path;
                for (const lscr::Edge& e : *ans.witness) {
                    if (path.empty()) path += g.vertex_name(e.source);
                    path += " -" + g.label_name(e.label) + "-> " + g.vertex_name(e.target);
                }
                if (path.empty()) path = g.vertex_name(q.source);
                std::printf("witness=%s\n", path.c_str());
            }
            return ans.value ? kExitTrue : kExitFalse;
        }

        if (bench->parsed()) {
            lscr::KnowledgeGraph g = lscr::KnowledgeGraph::load(graph_path);
            std::vector<lscr::Algo> algos;
            std::istringstream in(algos_csv);
            std::string name;
            while (std::getline(in, name, ',')) {
                auto a = lscr::algo_from_name(name);
                if (!a) throw lscr::Error("unknown algorithm: " + name);
                algos.push_back(*a);
            }
            std::optional<lscr::LocalIndex> ix;
            if (!index_path.empty()) ix = lscr::LocalIndex::load(index_path, g);
            for (lscr::Algo a : algos)
                if (a == lscr::Algo::Ins && !ix) throw lscr::Error("ins requires --index");
            std::vector<lscr::LoadedQuery> queries = lscr::load_query_set(queries_path, g);

            lscr::BenchOptions opts;
            opts.rho_invert = rho_invert;
            opts.workers = workers ? workers : 1;
            lscr::BenchReport report =
                lscr::run_bench(g, ix ? &*ix : nullptr, queries, algos, opts);

            std::string machine = lscr::machine_lines(report);
            std::fputs(lscr::human_table(report).c_str(), stdout);
            std::fputs(machine.c_str(), stdout);
            if (!out_path.empty()) {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) throw lscr::Error("cannot write " + out_path);
                out << machine;
            }
            return 0;
        }

        if (gen_graph_cmd->parsed()) {
            lscr::GraphGenSpec spec{gv, gdensity, glabels, gclasses, ginst, seed};
            lscr::KnowledgeGraph g = lscr::gen_graph(spec);
            g.save(out_path);
            std::printf("vertices=%zu edges=%zu labels=%zu fingerprint=%016" PRIx64 "\n",
                        g.vertex_count(), g.edge_count(), g.label_count(), g.fingerprint());
            return 0;
        }

        if (gen_queries_cmd->parsed()) {
            lscr::KnowledgeGraph g = lscr::KnowledgeGraph::load(graph_path);
            lscr::QueryGenSpec spec;
            spec.count_true = q_true;
            spec.count_false = q_false;
            spec.seed = seed;
            if (!constraint_path.empty())
                spec.constraint = read_constraint(constraint_path, g);
            else if (magnitude > 0)
                spec.magnitude = magnitude;
            else
                throw lscr::Error("gen queries needs --constraint or --magnitude");
            lscr::GeneratedQuerySet set = lscr::gen_queries(g, spec);
            lscr::save_query_set(set, g, out_path);
            std::printf("true_queries=%zu false_queries=%zu\n", set.true_queries.size(),
                        set.false_queries.size());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }

    return kExitError;
}
