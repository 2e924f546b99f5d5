#include "lscr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include "lscr/errors.hpp"
#include "lscr/online_search.hpp"

namespace lscr {

std::string algo_name(Algo a) {
    switch (a) {
        case Algo::Uis: return "uis";
        case Algo::UisStar: return "uis-star";
        case Algo::Ins: return "ins";
    }
    return "?";
}

std::optional<Algo> algo_from_name(std::string_view name) {
    if (name == "uis") return Algo::Uis;
    if (name == "uis-star") return Algo::UisStar;
    if (name == "ins") return Algo::Ins;
    return std::nullopt;
}

namespace {

double median(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    std::size_t mid = xs.size() / 2;
    return xs.size() % 2 ? xs[mid] : (xs[mid - 1] + xs[mid]) / 2.0;
}

} // namespace

BenchReport run_bench(const KnowledgeGraph& g, const LocalIndex* ix,
                      const std::vector<LoadedQuery>& queries, const std::vector<Algo>& algos,
                      BenchOptions options) {
    for (Algo a : algos)
        if (a == Algo::Ins && !ix) throw Error("ins benchmarking requires an index");

    // Warm-up pass: touch the adjacency once so first-query timings are not
    // dominated by cold caches.
    std::uint64_t sink = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (const Arc& a : g.out(v)) sink += a.other;
        for (const Arc& a : g.in(v)) sink += a.other;
    }
    (void)sink;

    BenchReport report;
    report.graph_fingerprint = g.fingerprint();
    if (ix) {
        report.index_k = ix->meta().k;
        report.index_seed = ix->meta().seed;
    }

    struct Cell {
        bool answer = false;
        double time_us = 0.0;
        std::uint64_t passed = 0;
    };

    for (Algo algo : algos) {
        std::vector<Cell> cells(queries.size());
        auto run_one = [&](std::size_t i) {
            const LscrQuery& q = queries[i].query;
            QueryAnswer ans;
            switch (algo) {
                case Algo::Uis: ans = uis_query(g, q); break;
                case Algo::UisStar: {
                    VertexSetResult vsg = match_all(g, q.constraint);
                    ans = uis_star_query(g, q, vsg);
                    break;
                }
                case Algo::Ins: {
                    VertexSetResult vsg = match_all(g, q.constraint);
                    ans = ins_query(g, *ix, q, vsg, {options.rho_invert});
                    break;
                }
            }
            cells[i] = {ans.value, ans.stats.wall_time_us, ans.stats.passed_vertices};
        };

        unsigned workers = std::max(1u, options.workers);
        if (workers == 1 || queries.size() <= 1) {
            for (std::size_t i = 0; i < queries.size(); ++i) run_one(i);
        } else {
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= queries.size()) break;
                    run_one(i);
                }
            };
            std::vector<std::thread> threads;
            for (unsigned w = 0; w < std::min<std::size_t>(workers, queries.size()); ++w)
                threads.emplace_back(worker);
            for (auto& t : threads) t.join();
        }

        std::vector<double> times;
        double passed_sum = 0.0;
        for (std::size_t i = 0; i < queries.size(); ++i) {
            report.rows.push_back(
                {algo_name(algo), i, cells[i].answer, cells[i].time_us, cells[i].passed});
            times.push_back(cells[i].time_us);
            passed_sum += static_cast<double>(cells[i].passed);
        }
        AlgoSummary s;
        s.algo = algo_name(algo);
        s.mean_us = times.empty() ? 0.0
                                  : std::accumulate(times.begin(), times.end(), 0.0) /
                                        static_cast<double>(times.size());
        s.median_us = median(times);
        s.mean_passed = queries.empty() ? 0.0 : passed_sum / static_cast<double>(queries.size());
        report.summaries.push_back(std::move(s));
    }
    return report;
}

std::string machine_lines(const BenchReport& report) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "ENV fingerprint=%016" PRIx64 " k=%zu seed=%" PRIu64 "\n",
                  report.graph_fingerprint, report.index_k, report.index_seed);
    out << buf;
    for (const BenchRow& r : report.rows) {
        std::snprintf(buf, sizeof buf, "RESULT algo=%s q=%zu answer=%c time_us=%.3f passed=%" PRIu64 "\n",
                      r.algo.c_str(), r.query, r.answer ? 'T' : 'F', r.time_us, r.passed);
        out << buf;
    }
    for (const AlgoSummary& s : report.summaries) {
        std::snprintf(buf, sizeof buf,
                      "SUMMARY algo=%s mean_us=%.3f median_us=%.3f mean_passed=%.3f\n",
                      s.algo.c_str(), s.mean_us, s.median_us, s.mean_passed);
        out << buf;
    }
    return out.str();
}

std::vector<BenchRow> parse_machine_lines(const std::string& text) {
    std::vector<BenchRow> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("RESULT ", 0) != 0) continue;
        BenchRow r;
        char algo[64];
        char answer = '?';
        if (std::sscanf(line.c_str(), "RESULT algo=%63s q=%zu answer=%c time_us=%lf passed=%" SCNu64,
                        algo, &r.query, &answer, &r.time_us, &r.passed) != 5)
            throw FormatError("unparsable RESULT line: " + line);
        r.algo = algo;
        r.answer = answer == 'T';
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string human_table(const BenchReport& report) {
    std::ostringstream out;
    char buf[160];
    out << "algo      queries  mean_us      median_us    mean_passed\n";
    std::size_t per_algo = report.summaries.empty()
                               ? 0
                               : report.rows.size() / report.summaries.size();
    for (const AlgoSummary& s : report.summaries) {
        std::snprintf(buf, sizeof buf, "%-9s %-8zu %-12.1f %-12.1f %-12.1f\n", s.algo.c_str(),
                      per_algo, s.mean_us, s.median_us, s.mean_passed);
        out << buf;
    }
    return out.str();
}

} // namespace lscr
