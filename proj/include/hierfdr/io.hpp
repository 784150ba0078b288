#ifndef HIERFDR_IO_HPP
#define HIERFDR_IO_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hierfdr/core.hpp"
#include "hierfdr/simgen.hpp"

namespace hfdr::io {

/// P-value matrix plus the external identifiers its indices map to.
struct PValueTable {
    PValueMatrix matrix;
    std::vector<std::string> variant_ids;
    std::vector<std::string> phenotype_ids;
};

/// Reads a p-value TSV: optional "# key=value" metadata lines (n_variants,
/// n_phenotypes, save_threshold), then a header "variant_id phenotype_id
/// p_value", then one row per stored cell. Ids are mapped to indices in
/// first-appearance order; metadata may declare more variants or phenotypes
/// than appear. A save_threshold line marks the file censored; without it
/// the file must cover every cell.
PValueTable read_pvalue_tsv(const std::string& path);

/// Inverse of read_pvalue_tsv; p-values are written with enough digits to
/// round-trip exactly. Null id vectors fall back to v0..v{M-1} / t0..t{P-1}.
void write_pvalue_tsv(const std::string& path, const PValueMatrix& matrix,
                      const std::vector<std::string>* variant_ids = nullptr,
                      const std::vector<std::string>* phenotype_ids = nullptr);

/// Numeric TSV with one header row of column identifiers; NA and nan parse
/// to NaN.
struct NamedMatrix {
    Eigen::MatrixXd data;
    std::vector<std::string> column_ids;
};

NamedMatrix read_matrix_tsv(const std::string& path);
void write_matrix_tsv(const std::string& path, const Eigen::MatrixXd& data,
                      const std::vector<std::string>& column_ids);

/// Truth masks are stored by index: metadata lines for the dimensions, a
/// "variant phenotype" header, one row per false null.
void write_truth_tsv(const std::string& path, const TruthMask& truth);
TruthMask read_truth_tsv(const std::string& path);

/// Selected families and rejections of one strategy run, with ids mapped
/// back through the input table's identifiers.
void write_decisions_tsv(const std::string& path, const DecisionSet& decisions,
                         const std::vector<std::string>* variant_ids = nullptr,
                         const std::vector<std::string>* phenotype_ids = nullptr);

/// Flat key-value scenario file. Keys: M, P, blocks (comma list of NxK),
/// mu, grid (comma list), replicates, seed. '#' starts a comment.
ScenarioSpec read_scenario(const std::string& path);

/// Scenario file that may also name the LD design via "design = ld", which
/// adds the keys subjects, beta, ld_block, rho, maf (lo,hi), spacing and
/// save_threshold.
struct ScenarioFile {
    bool is_ld = false;
    ScenarioSpec independent;
    LdScenarioSpec ld;
};

ScenarioFile read_scenario_file(const std::string& path);

struct BenchRow {
    double sigma = 0.0;
    std::string strategy;
    std::string metric;
    double mean = 0.0;
    double se = 0.0;
};

/// CSV with the fixed header sigma,strategy,metric,mean,se.
void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_bench_csv(const std::string& path);

} // namespace hfdr::io

#endif
