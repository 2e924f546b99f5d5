#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lscr/informed_search.hpp"
#include "lscr/workload.hpp"

namespace lscr {

enum class Algo { Uis, UisStar, Ins };

std::string algo_name(Algo a);
std::optional<Algo> algo_from_name(std::string_view name);

struct BenchRow {
    std::string algo;
    std::size_t query = 0;
    bool answer = false;
    double time_us = 0.0;
    std::uint64_t passed = 0;

    friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct AlgoSummary {
    std::string algo;
    double mean_us = 0.0;
    double median_us = 0.0;
    double mean_passed = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<AlgoSummary> summaries;
    std::uint64_t graph_fingerprint = 0;
    std::size_t index_k = 0;
    std::uint64_t index_seed = 0;
};

struct BenchOptions {
    bool rho_invert = false;
    unsigned workers = 1; // per-query parallel workers; timings stay per-query
};

// Runs every query once per algorithm after one warm-up pass over the graph.
// The index may be null when "ins" is not among the algorithms.
BenchReport run_bench(const KnowledgeGraph& g, const LocalIndex* ix,
                      const std::vector<LoadedQuery>& queries, const std::vector<Algo>& algos,
                      BenchOptions options = {});

// One "RESULT algo=<a> q=<i> answer=<T|F> time_us=<n> passed=<n>" line per
// row, preceded by an ENV line.
std::string machine_lines(const BenchReport& report);

// Parses RESULT lines back; lossless against machine_lines output.
std::vector<BenchRow> parse_machine_lines(const std::string& text);

std::string human_table(const BenchReport& report);

} // namespace lscr
