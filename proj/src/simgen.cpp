#include "hierfdr/simgen.hpp"

#include <algorithm>
#include <cmath>

#include "hierfdr/stats.hpp"

namespace hfdr {

void ScenarioSpec::validate() const {
    if (M == 0 || P == 0) throw ValidationError("scenario needs M >= 1 and P >= 1");
    std::size_t total_variants = 0;
    for (const auto& b : blocks) {
        if (b.n_variants == 0 || b.n_phenotypes_each == 0) {
            throw ValidationError("association blocks must be nonempty");
        }
        if (b.n_phenotypes_each > P) {
            throw ValidationError("block phenotype count exceeds P");
        }
        total_variants += b.n_variants;
    }
    if (total_variants > M) throw ValidationError("block variant counts exceed M");
    if (noise_grid.empty()) throw ValidationError("noise grid is empty");
    for (double s : noise_grid) {
        if (!(s > 0.0)) throw ValidationError("noise levels must be positive");
    }
    if (replicates == 0) throw ValidationError("replicates must be >= 1");
    if (!std::isfinite(mu)) throw ValidationError("effect mean must be finite");
}

double pvalue_from_stat(double z, double sigma) {
    return 2.0 * stats::normal_sf(std::abs(z) / sigma);
}

namespace {

// First k entries of a partial Fisher-Yates shuffle over [0, n): k distinct
// indices, order determined by the stream.
std::vector<std::uint32_t> sample_distinct(std::size_t n, std::size_t k, rng::Stream& stream) {
    std::vector<std::uint32_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(stream.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

} // namespace

std::pair<PValueMatrix, TruthMask> gen_independent(const ScenarioSpec& spec, double sigma,
                                                   std::uint64_t replicate_index) {
    spec.validate();
    if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");

    rng::Stream stream(rng::derive_seed(spec.base_seed, sigma, replicate_index));
    TruthMask truth(spec.M, spec.P);

    std::size_t total_assoc = 0;
    for (const auto& b : spec.blocks) total_assoc += b.n_variants;
    const auto variants = sample_distinct(spec.M, total_assoc, stream);
    std::size_t offset = 0;
    for (const auto& b : spec.blocks) {
        for (std::size_t i = 0; i < b.n_variants; ++i) {
            const VariantIndex v = variants[offset + i];
            for (std::uint32_t t : sample_distinct(spec.P, b.n_phenotypes_each, stream)) {
                truth.set_false_null(v, t);
            }
        }
        offset += b.n_variants;
    }

    std::vector<double> values(spec.M * spec.P);
    for (VariantIndex v = 0; v < spec.M; ++v) {
        for (PhenotypeIndex t = 0; t < spec.P; ++t) {
            double p;
            if (truth.false_null(v, t)) {
                p = pvalue_from_stat(stream.normal(spec.mu, sigma), sigma);
            } else {
                p = stream.uniform01();
            }
            values[static_cast<std::size_t>(v) * spec.P + t] = p;
        }
    }
    return {PValueMatrix::build_dense(spec.M, spec.P, values), std::move(truth)};
}

GenotypeMatrix gen_genotypes_ld(std::size_t n_subjects, std::size_t n_variants,
                                std::size_t block_size, double rho,
                                std::pair<double, double> maf_range, std::uint64_t seed,
                                std::int64_t spacing_bp) {
    if (n_subjects == 0 || n_variants == 0) throw ValidationError("empty genotype dimensions");
    if (block_size == 0) throw ValidationError("block_size must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw ValidationError("rho must lie in [0,1)");
    if (!(maf_range.first > 0.0 && maf_range.second <= 0.5 &&
          maf_range.first <= maf_range.second)) {
        throw ValidationError("MAF range must satisfy 0 < lo <= hi <= 0.5");
    }
    if (spacing_bp <= 0) throw ValidationError("position spacing must be positive");

    rng::Stream stream(seed);
    GenotypeMatrix g;
    g.maf.resize(n_variants);
    g.positions.resize(n_variants);
    // Thresholds on the latent normal giving Hardy-Weinberg frequencies
    // ((1-f)^2, 2f(1-f), f^2) for genotypes (0, 1, 2).
    std::vector<double> cut0(n_variants), cut1(n_variants);
    for (std::size_t v = 0; v < n_variants; ++v) {
        const double f = stream.uniform(maf_range.first, maf_range.second);
        g.maf[v] = f;
        cut0[v] = stats::normal_quantile((1.0 - f) * (1.0 - f));
        cut1[v] = stats::normal_quantile((1.0 - f) * (1.0 - f) + 2.0 * f * (1.0 - f));
        g.positions[v] = {1, static_cast<std::int64_t>(v + 1) * spacing_bp};
    }

    g.data.resize(static_cast<Eigen::Index>(n_subjects), static_cast<Eigen::Index>(n_variants));
    const double innovation = std::sqrt(1.0 - rho * rho);
    for (std::size_t s = 0; s < n_subjects; ++s) {
        double z = 0.0;
        for (std::size_t v = 0; v < n_variants; ++v) {
            if (v % block_size == 0) {
                z = stream.normal(0.0, 1.0);
            } else {
                z = rho * z + innovation * stream.normal(0.0, 1.0);
            }
            double geno = 0.0;
            if (z >= cut1[v]) {
                geno = 2.0;
            } else if (z >= cut0[v]) {
                geno = 1.0;
            }
            g.data(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(v)) = geno;
        }
    }
    return g;
}

double genotype_correlation(const GenotypeMatrix& g, VariantIndex a, VariantIndex b) {
    const auto ca = g.data.col(a);
    const auto cb = g.data.col(b);
    const Eigen::VectorXd da = ca.array() - ca.mean();
    const Eigen::VectorXd db = cb.array() - cb.mean();
    const double denom = std::sqrt(da.squaredNorm() * db.squaredNorm());
    if (denom <= 0.0) return 0.0;
    return da.dot(db) / denom;
}

TruthMask::CorrFn genotype_corr_fn(const GenotypeMatrix& g) {
    return [&g](VariantIndex a, VariantIndex b) { return genotype_correlation(g, a, b); };
}

TruthMask EffectMap::to_truth() const {
    TruthMask truth(n_variants, n_phenotypes);
    for (const auto& e : entries) truth.set_false_null(e.variant, e.phenotype);
    return truth;
}

Eigen::MatrixXd EffectMap::dense() const {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_variants),
                                              static_cast<Eigen::Index>(n_phenotypes));
    for (const auto& e : entries) b(e.variant, e.phenotype) += e.beta;
    return b;
}

EffectMap random_effects(std::size_t M, std::size_t P,
                         const std::vector<AssociationBlock>& blocks, double beta,
                         rng::Stream& stream) {
    std::size_t total = 0;
    for (const auto& b : blocks) {
        if (b.n_variants == 0 || b.n_phenotypes_each == 0 || b.n_phenotypes_each > P) {
            throw ValidationError("invalid association block");
        }
        total += b.n_variants;
    }
    if (total > M) throw ValidationError("block variant counts exceed M");

    EffectMap map;
    map.n_variants = M;
    map.n_phenotypes = P;
    const auto variants = sample_distinct(M, total, stream);
    std::size_t offset = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.n_variants; ++i) {
            const VariantIndex v = variants[offset + i];
            for (std::uint32_t t : sample_distinct(P, b.n_phenotypes_each, stream)) {
                map.entries.push_back({v, t, beta});
            }
        }
        offset += b.n_variants;
    }
    std::sort(map.entries.begin(), map.entries.end(), [](const EffectEntry& a, const EffectEntry& b) {
        if (a.variant != b.variant) return a.variant < b.variant;
        return a.phenotype < b.phenotype;
    });
    return map;
}

void LdScenarioSpec::validate() const {
    if (n_subjects == 0 || M == 0 || P == 0) {
        throw ValidationError("LD scenario needs subjects, M and P");
    }
    std::size_t total = 0;
    for (const auto& b : blocks) {
        if (b.n_variants == 0 || b.n_phenotypes_each == 0 || b.n_phenotypes_each > P) {
            throw ValidationError("invalid association block");
        }
        total += b.n_variants;
    }
    if (total > M) throw ValidationError("block variant counts exceed M");
    if (ld_block_size == 0) throw ValidationError("ld_block_size must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw ValidationError("rho must lie in [0,1)");
    if (noise_grid.empty()) throw ValidationError("noise grid is empty");
    for (double s : noise_grid) {
        if (!(s > 0.0)) throw ValidationError("noise levels must be positive");
    }
    if (replicates == 0) throw ValidationError("replicates must be >= 1");
    if (!(save_threshold > 0.0 && save_threshold <= 1.0)) {
        throw ValidationError("save threshold must lie in (0,1]");
    }
}

LdReplicate gen_ld_replicate(const LdScenarioSpec& spec, double sigma,
                             std::uint64_t replicate_index) {
    spec.validate();
    if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");

    std::uint64_t state = rng::derive_seed(spec.base_seed, sigma, replicate_index);
    const std::uint64_t seed_geno = rng::splitmix64(state);
    const std::uint64_t seed_effects = rng::splitmix64(state);
    const std::uint64_t seed_noise = rng::splitmix64(state);

    LdReplicate rep;
    rep.genotypes = gen_genotypes_ld(spec.n_subjects, spec.M, spec.ld_block_size, spec.rho,
                                     spec.maf_range, seed_geno, spec.spacing_bp);
    rng::Stream effect_stream(seed_effects);
    rep.effects = random_effects(spec.M, spec.P, spec.blocks, spec.beta, effect_stream);
    rep.phenotypes = gen_phenotypes(rep.genotypes, rep.effects, sigma, seed_noise);
    return rep;
}

Eigen::MatrixXd gen_phenotypes(const GenotypeMatrix& genotypes, const EffectMap& effects,
                               double sigma, std::uint64_t seed) {
    if (effects.n_variants != genotypes.n_variants()) {
        throw ValidationError("effect map and genotype matrix disagree on variant count");
    }
    if (!(sigma >= 0.0)) throw ValidationError("sigma must be nonnegative");

    rng::Stream stream(seed);
    Eigen::MatrixXd y = genotypes.data * effects.dense();
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            y(i, j) += stream.normal(0.0, sigma);
        }
    }
    return y;
}

} // namespace hfdr
