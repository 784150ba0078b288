#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hierfdr/bench.hpp"
#include "hierfdr/hier.hpp"
#include "hierfdr/io.hpp"
#include "hierfdr/metrics.hpp"
#include "hierfdr/scan.hpp"
#include "hierfdr/simgen.hpp"

namespace {

using namespace hfdr;

Combiner combiner_from_flag(const std::string& name) {
    if (name == "simes") return Combiner::simes;
    if (name == "fisher") return Combiner::fisher;
    if (name == "bonf") return Combiner::bonferroni_min;
    throw ValidationError("unknown combiner '" + name + "'");
}

TestProcedure stage2_from_flag(const std::string& name) {
    if (name == "bh") return TestProcedure::bh;
    if (name == "bonf") return TestProcedure::bonferroni;
    throw ValidationError("unknown stage-2 procedure '" + name + "'");
}

struct StrategyFlags {
    std::vector<std::string> strategies;
    double q1 = 0.05;
    double q2 = 0.05;
    std::string combiner = "simes";
    std::string stage2 = "bh";
};

void add_strategy_flags(CLI::App* cmd, StrategyFlags& f, bool repeatable) {
    auto* opt = cmd->add_option("--strategy", f.strategies,
                                "pooled_bh | pooled_bonferroni | per_family_bh | hier_bh | "
                                "hier_bonferroni");
    if (repeatable) {
        opt->required();
    } else {
        opt->expected(0, 1);
    }
    cmd->add_option("--q1", f.q1, "Stage-1 level (flat strategies run at this level)");
    cmd->add_option("--q2", f.q2, "Stage-2 (within-family) level");
    cmd->add_option("--combiner", f.combiner, "Stage-0 combiner")
        ->check(CLI::IsMember({"simes", "fisher", "bonf"}));
    cmd->add_option("--stage2", f.stage2, "Stage-2 procedure")
        ->check(CLI::IsMember({"bh", "bonf"}));
}

StrategySpec make_spec(const std::string& name, const StrategyFlags& f) {
    StrategySpec spec;
    spec.strategy = strategy_from_string(name);
    spec.q1 = f.q1;
    spec.q2 = f.q2;
    spec.combiner = combiner_from_flag(f.combiner);
    spec.stage2 = stage2_from_flag(f.stage2);
    spec.validate();
    return spec;
}

std::vector<StrategySpec> make_specs(const StrategyFlags& f) {
    std::vector<StrategySpec> specs;
    for (const auto& name : f.strategies) specs.push_back(make_spec(name, f));
    return specs;
}

std::string sigma_tag(double sigma) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", sigma);
    return buf;
}

void run_simulate(const std::string& scenario_path, const std::string& out_dir,
                  std::uint64_t seed_override, bool seed_given) {
    io::ScenarioFile file = io::read_scenario_file(scenario_path);
    if (seed_given) {
        file.independent.base_seed = seed_override;
        file.ld.base_seed = seed_override;
    }
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    if (!file.is_ld) {
        const ScenarioSpec& spec = file.independent;
        for (double sigma : spec.noise_grid) {
            for (std::size_t r = 0; r < spec.replicates; ++r) {
                const auto [matrix, truth] = gen_independent(spec, sigma, r);
                const std::string tag = "_s" + sigma_tag(sigma) + "_r" + std::to_string(r);
                io::write_pvalue_tsv((dir / ("pvalues" + tag + ".tsv")).string(), matrix);
                io::write_truth_tsv((dir / ("truth" + tag + ".tsv")).string(), truth);
            }
        }
        std::cout << "wrote " << spec.noise_grid.size() * spec.replicates
                  << " replicate pairs to " << out_dir << "\n";
        return;
    }

    const LdScenarioSpec& spec = file.ld;
    std::vector<std::string> vids, tids;
    for (std::size_t v = 0; v < spec.M; ++v) vids.push_back("v" + std::to_string(v));
    for (std::size_t t = 0; t < spec.P; ++t) tids.push_back("t" + std::to_string(t));
    for (double sigma : spec.noise_grid) {
        for (std::size_t r = 0; r < spec.replicates; ++r) {
            const LdReplicate rep = gen_ld_replicate(spec, sigma, r);
            const std::string tag = "_s" + sigma_tag(sigma) + "_r" + std::to_string(r);
            io::write_matrix_tsv((dir / ("genotypes" + tag + ".tsv")).string(),
                                 rep.genotypes.data, vids);
            io::write_matrix_tsv((dir / ("phenotypes" + tag + ".tsv")).string(),
                                 rep.phenotypes, tids);
            io::write_truth_tsv((dir / ("truth" + tag + ".tsv")).string(),
                                rep.effects.to_truth());
        }
    }
    std::cout << "wrote " << spec.noise_grid.size() * spec.replicates
              << " replicate matrix sets to " << out_dir << "\n";
}

struct BenchFlags {
    std::string scenario_path;
    std::string out_path;
    StrategyFlags strategy;
    unsigned threads = 0;
    std::size_t replicates_override = 0;
    std::vector<double> grid_override;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    std::int64_t proximity_window = 1000000;
    double proximity_corr = 0.2;
    bool no_proximity = false;
    bool proximity_flag_given = false;
};

void run_bench_cmd(const BenchFlags& f) {
    io::ScenarioFile file = io::read_scenario_file(f.scenario_path);
    const auto specs = make_specs(f.strategy);

    auto progress = [](double sigma) {
        std::cerr << "sigma " << sigma << " done\n";
    };

    std::vector<BenchCell> cells;
    std::vector<io::BenchRow> rows;
    if (!file.is_ld) {
        if (f.proximity_flag_given || f.no_proximity) {
            throw ValidationError("proximity flags apply to LD-design scenarios only");
        }
        BenchRequest req;
        req.scenario = file.independent;
        if (f.replicates_override) req.scenario.replicates = f.replicates_override;
        if (!f.grid_override.empty()) req.scenario.noise_grid = f.grid_override;
        if (f.seed_given) req.scenario.base_seed = f.seed_override;
        req.strategies = specs;
        req.n_threads = f.threads;
        req.on_sigma_done = progress;
        cells = run_bench(req);
        rows = bench_rows(req, cells);
    } else {
        LdBenchRequest req;
        req.scenario = file.ld;
        if (f.replicates_override) req.scenario.replicates = f.replicates_override;
        if (!f.grid_override.empty()) req.scenario.noise_grid = f.grid_override;
        if (f.seed_given) req.scenario.base_seed = f.seed_override;
        req.strategies = specs;
        req.rule.enabled = !f.no_proximity;
        req.rule.window = f.proximity_window;
        req.rule.min_abs_corr = f.proximity_corr;
        req.n_threads = f.threads;
        req.on_sigma_done = progress;
        cells = run_bench_ld(req);
        rows = bench_rows(req, cells);
    }
    io::write_bench_csv(f.out_path, rows);
    std::cout << "wrote " << rows.size() << " rows to " << f.out_path << "\n";
}

void run_test_cmd(const std::string& in_path, const std::string& out_path,
                  const StrategyFlags& flags) {
    const io::PValueTable table = io::read_pvalue_tsv(in_path);
    const std::string name = flags.strategies.empty() ? "hier_bh" : flags.strategies.front();
    const StrategySpec spec = make_spec(name, flags);
    const DecisionSet decisions = run_strategy(table.matrix, spec);

    // Ids for indices beyond those appearing in a censored file.
    std::vector<std::string> vids = table.variant_ids;
    std::vector<std::string> tids = table.phenotype_ids;
    for (std::size_t v = vids.size(); v < decisions.n_variants; ++v) {
        vids.push_back("v" + std::to_string(v));
    }
    for (std::size_t t = tids.size(); t < decisions.n_phenotypes; ++t) {
        tids.push_back("t" + std::to_string(t));
    }
    io::write_decisions_tsv(out_path, decisions, &vids, &tids);
    std::cout << "selected " << decisions.selected_families.size() << " families, "
              << decisions.rejected.size() << " discoveries (stage-2 level "
              << decisions.stage2_level << ")\n";
}

void run_scan_cmd(const std::string& geno_path, const std::string& pheno_path,
                  const std::string& cov_path, const std::string& out_path,
                  double save_threshold, unsigned threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const io::NamedMatrix geno = io::read_matrix_tsv(geno_path);
    const io::NamedMatrix pheno = io::read_matrix_tsv(pheno_path);

    GenotypeMatrix genotypes;
    genotypes.data = geno.data;

    ScanConfig config;
    config.save_threshold = save_threshold;
    config.n_threads = threads;
    if (!cov_path.empty()) config.covariates = io::read_matrix_tsv(cov_path).data;

    ScanDiagnostics diag;
    const PValueMatrix matrix = scan_assoc(genotypes, pheno.data, config, &diag);
    io::write_pvalue_tsv(out_path, matrix, &geno.column_ids, &pheno.column_ids);

    for (VariantIndex v : diag.zero_variance_variants) {
        std::cerr << "warning: zero-variance variant " << geno.column_ids[v]
                  << " (p recorded as 1)\n";
    }
    for (PhenotypeIndex t : diag.zero_variance_phenotypes) {
        std::cerr << "warning: zero-variance phenotype " << pheno.column_ids[t]
                  << " (p recorded as 1)\n";
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    std::cout << "scanned " << diag.n_tests << " pairs, stored " << diag.n_stored
              << " p-values (threshold " << save_threshold << ") in " << elapsed << " ms\n";
}

void run_report_cmd(const std::string& in_path) {
    const auto rows = io::read_bench_csv(in_path);
    if (rows.empty()) {
        std::cout << "no rows\n";
        return;
    }
    std::vector<std::string> metrics, strategies;
    std::vector<double> sigmas;
    for (const auto& r : rows) {
        if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) {
            metrics.push_back(r.metric);
        }
        if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end()) {
            strategies.push_back(r.strategy);
        }
        if (std::find(sigmas.begin(), sigmas.end(), r.sigma) == sigmas.end()) {
            sigmas.push_back(r.sigma);
        }
    }
    std::map<std::string, std::map<std::string, std::map<double, std::pair<double, double>>>>
        by_metric;
    for (const auto& r : rows) by_metric[r.metric][r.strategy][r.sigma] = {r.mean, r.se};

    char buf[64];
    for (const auto& metric : metrics) {
        std::cout << metric << "\n";
        std::printf("  %-8s", "sigma");
        for (const auto& s : strategies) std::printf(" %-22s", s.c_str());
        std::printf("\n");
        for (double sigma : sigmas) {
            std::snprintf(buf, sizeof(buf), "%g", sigma);
            std::printf("  %-8s", buf);
            for (const auto& s : strategies) {
                const auto& cell = by_metric[metric][s];
                auto it = cell.find(sigma);
                if (it == cell.end()) {
                    std::printf(" %-22s", "-");
                } else {
                    std::snprintf(buf, sizeof(buf), "%.4f (%.4f)", it->second.first,
                                  it->second.second);
                    std::printf(" %-22s", buf);
                }
            }
            std::printf("\n");
        }
        std::cout << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical error control for variant-phenotype association screens"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, in_path;
    std::string geno_path, pheno_path, cov_path;
    double save_threshold = 5e-4;
    unsigned threads = 0;
    BenchFlags bench_flags;
    StrategyFlags test_flags;

    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "Write per-replicate simulated data");
    simulate->add_option("--scenario", scenario_path, "Scenario key-value file")
        ->required()
        ->check(CLI::ExistingFile);
    simulate->add_option("--out", out_path, "Output directory")->required();
    auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "Override the scenario seed");

    auto* bench = app.add_subcommand("bench", "Run strategies over a scenario, write CSV");
    bench->add_option("--scenario", bench_flags.scenario_path, "Scenario key-value file")
        ->required()
        ->check(CLI::ExistingFile);
    bench->add_option("--out", bench_flags.out_path, "Output CSV path")->required();
    add_strategy_flags(bench, bench_flags.strategy, true);
    bench->add_option("--threads", bench_flags.threads, "Worker threads (0 = all cores)");
    bench->add_option("--replicates", bench_flags.replicates_override,
                      "Override the scenario replicate count");
    bench->add_option("--grid", bench_flags.grid_override, "Override the noise grid")
        ->delimiter(',');
    auto* bench_seed_opt =
        bench->add_option("--seed", bench_flags.seed_override, "Override the scenario seed");
    auto* pw = bench->add_option("--proximity-window", bench_flags.proximity_window,
                                 "Proximity window in basepairs (LD design)");
    auto* pc = bench->add_option("--proximity-corr", bench_flags.proximity_corr,
                                 "Minimum |genotype correlation| (LD design)");
    bench->add_flag("--no-proximity", bench_flags.no_proximity,
                    "Evaluate LD runs without proximity truth matching");

    auto* test = app.add_subcommand("test", "Run one strategy on a p-value file");
    test->add_option("--in", in_path, "P-value TSV")->required()->check(CLI::ExistingFile);
    test->add_option("--out", out_path, "Decisions TSV")->required();
    add_strategy_flags(test, test_flags, false);

    auto* scan = app.add_subcommand("scan", "Association scan over genotype/phenotype TSVs");
    scan->add_option("--genotypes", geno_path, "Subjects x variants TSV")
        ->required()
        ->check(CLI::ExistingFile);
    scan->add_option("--phenotypes", pheno_path, "Subjects x phenotypes TSV")
        ->required()
        ->check(CLI::ExistingFile);
    scan->add_option("--covariates", cov_path, "Subjects x covariates TSV")
        ->check(CLI::ExistingFile);
    scan->add_option("--out", out_path, "Output p-value TSV")->required();
    scan->add_option("--save-threshold", save_threshold, "Censor p-values above this");
    scan->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* report = app.add_subcommand("report", "Pretty-print a bench CSV");
    report->add_option("--in", in_path, "Bench CSV")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) {
            run_simulate(scenario_path, out_path, sim_seed, sim_seed_opt->count() > 0);
        } else if (bench->parsed()) {
            bench_flags.proximity_flag_given = pw->count() > 0 || pc->count() > 0;
            bench_flags.seed_given = bench_seed_opt->count() > 0;
            run_bench_cmd(bench_flags);
        } else if (test->parsed()) {
            run_test_cmd(in_path, out_path, test_flags);
        } else if (scan->parsed()) {
            run_scan_cmd(geno_path, pheno_path, cov_path, out_path, save_threshold, threads);
        } else if (report->parsed()) {
            run_report_cmd(in_path);
        }
    } catch (const hfdr::SparseCutoffError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const hfdr::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
