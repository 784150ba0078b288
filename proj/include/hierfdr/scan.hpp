#ifndef HIERFDR_SCAN_HPP
#define HIERFDR_SCAN_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "hierfdr/core.hpp"
#include "hierfdr/simgen.hpp"

namespace hfdr {

struct ScanConfig {
    /// p-values above this are censored from the output matrix.
    double save_threshold = 5e-4;
    /// Optional n_subjects x k covariate matrix; an intercept column is
    /// always added.
    std::optional<Eigen::MatrixXd> covariates;
    /// true: t from the correlation of standardized residuals. false: t from
    /// the regression-slope algebra on the same residuals. The two routes
    /// agree analytically and serve as cross-checks.
    bool standardize = true;
    unsigned n_threads = 0;
    /// Variants per block in the blocked cross-product.
    std::size_t block_size = 2048;

    void validate() const;
};

struct ScanDiagnostics {
    std::vector<VariantIndex> zero_variance_variants;
    std::vector<PhenotypeIndex> zero_variance_phenotypes;
    std::size_t n_tests = 0;
    std::size_t n_stored = 0;
};

/// data minus its least-squares projection onto span{intercept, covariates}.
Eigen::MatrixXd residualize(const Eigen::MatrixXd& data, const Eigen::MatrixXd& covariates);

/// Two-sided p-values of the per-(variant, phenotype) association slope
/// after residualizing both sides against the covariates, computed as
/// blocked cross-products; entries with p <= save_threshold are stored,
/// the rest censored. df = n - 2 - k. Zero-variance columns get p = 1
/// (censored) and are listed in the diagnostics. Missing genotypes (NaN)
/// are mean-imputed per variant first.
PValueMatrix scan_assoc(const GenotypeMatrix& genotypes, const Eigen::MatrixXd& phenotypes,
                        const ScanConfig& config, ScanDiagnostics* diagnostics = nullptr);

} // namespace hfdr

#endif
