#ifndef HIERFDR_BENCH_HPP
#define HIERFDR_BENCH_HPP

#include <functional>
#include <vector>

#include "hierfdr/hier.hpp"
#include "hierfdr/io.hpp"
#include "hierfdr/metrics.hpp"
#include "hierfdr/simgen.hpp"

namespace hfdr {

struct BenchRequest {
    ScenarioSpec scenario;
    std::vector<StrategySpec> strategies;
    unsigned n_threads = 1;
    /// Called after each noise level finishes (progress reporting).
    std::function<void(double sigma)> on_sigma_done;
};

/// Aggregated metrics for one (noise level, strategy) cell.
struct BenchCell {
    double sigma = 0.0;
    std::size_t strategy_index = 0;
    ReplicateAggregate agg;
};

/// Runs every replicate of every noise level through every strategy and
/// aggregates the metrics. Replicates run in parallel; each writes its own
/// result slot, so the output is independent of scheduling.
std::vector<BenchCell> run_bench(const BenchRequest& req);

/// Flattens bench cells into CSV rows, one per metric.
std::vector<io::BenchRow> bench_rows(const BenchRequest& req,
                                     const std::vector<BenchCell>& cells);

struct LdBenchRequest {
    LdScenarioSpec scenario;
    std::vector<StrategySpec> strategies;
    /// Truth matching for the scan-based metrics; positions and genotype
    /// correlations come from the generated data.
    ProximityRule rule;
    unsigned n_threads = 1;
    std::function<void(double sigma)> on_sigma_done;
};

/// LD-regime bench: per replicate, generate genotypes/phenotypes, scan them
/// into a censored p-value matrix, run the strategies and evaluate against
/// the effect-placement truth under the proximity rule.
std::vector<BenchCell> run_bench_ld(const LdBenchRequest& req);

std::vector<io::BenchRow> bench_rows(const LdBenchRequest& req,
                                     const std::vector<BenchCell>& cells);

} // namespace hfdr

#endif
