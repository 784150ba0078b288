#include "hierfdr/bench.hpp"

#include "hierfdr/parallel.hpp"
#include "hierfdr/scan.hpp"

namespace hfdr {

std::vector<BenchCell> run_bench(const BenchRequest& req) {
    req.scenario.validate();
    if (req.strategies.empty()) throw ValidationError("bench needs at least one strategy");
    for (const auto& s : req.strategies) s.validate();

    const std::size_t n_strategies = req.strategies.size();
    const std::size_t n_reps = req.scenario.replicates;
    std::vector<BenchCell> cells;
    cells.reserve(req.scenario.noise_grid.size() * n_strategies);

    for (double sigma : req.scenario.noise_grid) {
        std::vector<std::vector<MetricsReport>> reports(
            n_strategies, std::vector<MetricsReport>(n_reps));
        parallel_for(n_reps, effective_threads(req.n_threads), [&](std::size_t r) {
            const auto [matrix, truth] = gen_independent(req.scenario, sigma, r);
            for (std::size_t s = 0; s < n_strategies; ++s) {
                reports[s][r] = evaluate(run_strategy(matrix, req.strategies[s]), truth);
            }
        });
        for (std::size_t s = 0; s < n_strategies; ++s) {
            cells.push_back({sigma, s, aggregate(reports[s])});
        }
        if (req.on_sigma_done) req.on_sigma_done(sigma);
    }
    return cells;
}

namespace {

std::vector<io::BenchRow> rows_from_cells(const std::vector<StrategySpec>& strategies,
                                          const std::vector<BenchCell>& cells) {
    std::vector<io::BenchRow> rows;
    rows.reserve(cells.size() * kMetricNames.size());
    for (const auto& c : cells) {
        for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
            io::BenchRow row;
            row.sigma = c.sigma;
            row.strategy = to_string(strategies[c.strategy_index].strategy);
            row.metric = kMetricNames[m];
            row.mean = c.agg.mean[m];
            row.se = c.agg.se[m];
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace

std::vector<io::BenchRow> bench_rows(const BenchRequest& req,
                                     const std::vector<BenchCell>& cells) {
    return rows_from_cells(req.strategies, cells);
}

std::vector<io::BenchRow> bench_rows(const LdBenchRequest& req,
                                     const std::vector<BenchCell>& cells) {
    return rows_from_cells(req.strategies, cells);
}

std::vector<BenchCell> run_bench_ld(const LdBenchRequest& req) {
    req.scenario.validate();
    if (req.strategies.empty()) throw ValidationError("bench needs at least one strategy");
    for (const auto& s : req.strategies) s.validate();
    req.rule.validate();

    const std::size_t n_strategies = req.strategies.size();
    const std::size_t n_reps = req.scenario.replicates;
    std::vector<BenchCell> cells;
    cells.reserve(req.scenario.noise_grid.size() * n_strategies);

    for (double sigma : req.scenario.noise_grid) {
        std::vector<std::vector<MetricsReport>> reports(
            n_strategies, std::vector<MetricsReport>(n_reps));
        parallel_for(n_reps, effective_threads(req.n_threads), [&](std::size_t r) {
            const LdReplicate rep = gen_ld_replicate(req.scenario, sigma, r);
            ScanConfig config;
            config.save_threshold = req.scenario.save_threshold;
            const PValueMatrix matrix = scan_assoc(rep.genotypes, rep.phenotypes, config);
            TruthMask truth = rep.effects.to_truth();
            truth.set_positions(rep.genotypes.positions);
            truth.set_genotype_corr(genotype_corr_fn(rep.genotypes));
            for (std::size_t s = 0; s < n_strategies; ++s) {
                reports[s][r] =
                    evaluate(run_strategy(matrix, req.strategies[s]), truth, req.rule);
            }
        });
        for (std::size_t s = 0; s < n_strategies; ++s) {
            cells.push_back({sigma, s, aggregate(reports[s])});
        }
        if (req.on_sigma_done) req.on_sigma_done(sigma);
    }
    return cells;
}

} // namespace hfdr
