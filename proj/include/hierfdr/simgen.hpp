#ifndef HIERFDR_SIMGEN_HPP
#define HIERFDR_SIMGEN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hierfdr/core.hpp"
#include "hierfdr/rng.hpp"

namespace hfdr {

/// One group of associated variants: `n_variants` variants, each truly
/// associated with `n_phenotypes_each` randomly chosen phenotypes.
struct AssociationBlock {
    std::size_t n_variants = 0;
    std::size_t n_phenotypes_each = 0;
};

/// Independent-test simulation scenario: M x P p-values per replicate, true
/// signals placed by the association blocks, false-null test statistics
/// drawn from Normal(mu, sigma^2) and converted to two-sided p-values under
/// Normal(0, sigma^2).
struct ScenarioSpec {
    std::size_t M = 0;
    std::size_t P = 0;
    std::vector<AssociationBlock> blocks;
    double mu = 2.0;
    std::vector<double> noise_grid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::size_t replicates = 100;
    std::uint64_t base_seed = 20260815;

    void validate() const;
};

/// Two-sided p-value of statistic z under Normal(0, sigma^2).
double pvalue_from_stat(double z, double sigma);

/// One replicate of the independent-test design. The replicate's stream is
/// derived from (base_seed, sigma, replicate_index); truth placement is
/// drawn first, then the matrix is filled row-major, so outputs are
/// bit-reproducible.
std::pair<PValueMatrix, TruthMask> gen_independent(const ScenarioSpec& spec, double sigma,
                                                   std::uint64_t replicate_index);

/// Subjects x variants minor-allele counts plus the metadata the proximity
/// rule needs.
struct GenotypeMatrix {
    Eigen::MatrixXd data;
    std::vector<VariantPosition> positions;
    std::vector<double> maf;

    std::size_t n_subjects() const { return static_cast<std::size_t>(data.rows()); }
    std::size_t n_variants() const { return static_cast<std::size_t>(data.cols()); }
};

/// Synthetic LD genotypes: within each block of `block_size` consecutive
/// variants a latent AR(1) chain with parameter rho is thresholded into
/// {0,1,2} at the Hardy-Weinberg quantiles of a per-variant MAF drawn
/// uniformly from maf_range. Positions sit on a uniform grid of
/// `spacing_bp` basepairs on one chromosome.
GenotypeMatrix gen_genotypes_ld(std::size_t n_subjects, std::size_t n_variants,
                                std::size_t block_size, double rho,
                                std::pair<double, double> maf_range, std::uint64_t seed,
                                std::int64_t spacing_bp = 100000);

/// Sample correlation of two genotype columns.
double genotype_correlation(const GenotypeMatrix& g, VariantIndex a, VariantIndex b);

/// Correlation accessor for TruthMask::set_genotype_corr; holds a reference,
/// the genotype matrix must outlive the mask.
TruthMask::CorrFn genotype_corr_fn(const GenotypeMatrix& g);

/// Sparse M x P effect matrix B.
struct EffectEntry {
    VariantIndex variant;
    PhenotypeIndex phenotype;
    double beta;
};

struct EffectMap {
    std::size_t n_variants = 0;
    std::size_t n_phenotypes = 0;
    std::vector<EffectEntry> entries;

    TruthMask to_truth() const;
    Eigen::MatrixXd dense() const;
};

/// Random effect placement: distinct variants per block, each paired with
/// distinct random phenotypes, all effects equal to beta.
EffectMap random_effects(std::size_t M, std::size_t P,
                         const std::vector<AssociationBlock>& blocks, double beta,
                         rng::Stream& stream);

/// Y = X * B + E with E entries i.i.d. Normal(0, sigma^2).
Eigen::MatrixXd gen_phenotypes(const GenotypeMatrix& genotypes, const EffectMap& effects,
                               double sigma, std::uint64_t seed);

/// LD-regime scenario: per replicate, synthetic genotypes, random effect
/// placement and phenotypes, meant to feed the association scan.
struct LdScenarioSpec {
    std::size_t n_subjects = 0;
    std::size_t M = 0;
    std::size_t P = 0;
    std::vector<AssociationBlock> blocks;
    double beta = 1.0;
    std::size_t ld_block_size = 10;
    double rho = 0.9;
    std::pair<double, double> maf_range = {0.05, 0.5};
    std::int64_t spacing_bp = 100000;
    std::vector<double> noise_grid = {1.0};
    std::size_t replicates = 25;
    std::uint64_t base_seed = 20260815;
    double save_threshold = 5e-4;

    void validate() const;
};

struct LdReplicate {
    GenotypeMatrix genotypes;
    EffectMap effects;
    Eigen::MatrixXd phenotypes;
};

/// One LD replicate; genotypes, effect placement and noise each get their
/// own stream derived from (base_seed, sigma, replicate_index).
LdReplicate gen_ld_replicate(const LdScenarioSpec& spec, double sigma,
                             std::uint64_t replicate_index);

} // namespace hfdr

#endif
