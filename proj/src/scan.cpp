#include "hierfdr/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hierfdr/parallel.hpp"
#include "hierfdr/stats.hpp"

namespace hfdr {

void ScanConfig::validate() const {
    if (!(save_threshold > 0.0 && save_threshold <= 1.0)) {
        throw ValidationError("save threshold must lie in (0,1]");
    }
    if (block_size == 0) throw ValidationError("block size must be >= 1");
}

Eigen::MatrixXd residualize(const Eigen::MatrixXd& data, const Eigen::MatrixXd& covariates) {
    const Eigen::Index n = data.rows();
    const Eigen::Index k = covariates.size() == 0 ? 0 : covariates.cols();
    if (k > 0 && covariates.rows() != n) {
        throw ValidationError("covariate and data matrices disagree on subject count");
    }
    if (n <= k + 2) throw ValidationError("need more subjects than covariates plus two");

    Eigen::MatrixXd design(n, k + 1);
    design.col(0).setOnes();
    if (k > 0) design.rightCols(k) = covariates;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < k + 1) {
        throw ValidationError("covariates are rank-deficient after adding the intercept");
    }
    return data - design * qr.solve(data);
}

namespace {

// A centered column counts as zero-variance when its residual norm is
// negligible against the original column scale.
bool negligible(double resid_sq, double orig_sq) {
    return resid_sq <= 1e-18 * std::max(1.0, orig_sq);
}

} // namespace

PValueMatrix scan_assoc(const GenotypeMatrix& genotypes, const Eigen::MatrixXd& phenotypes,
                        const ScanConfig& config, ScanDiagnostics* diagnostics) {
    config.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(genotypes.n_subjects());
    const std::size_t M = genotypes.n_variants();
    const std::size_t P = static_cast<std::size_t>(phenotypes.cols());
    if (phenotypes.rows() != n) {
        throw ValidationError("genotype and phenotype matrices disagree on subject count");
    }
    const Eigen::MatrixXd covariates =
        config.covariates ? *config.covariates : Eigen::MatrixXd(0, 0);
    const Eigen::Index k = covariates.size() == 0 ? 0 : covariates.cols();
    const double df = static_cast<double>(n - 2 - k);
    if (df < 1.0) throw ValidationError("not enough subjects for the residual t test");

    // Mean-impute missing genotypes per variant before anything else.
    Eigen::MatrixXd x = genotypes.data;
    for (Eigen::Index v = 0; v < x.cols(); ++v) {
        double sum = 0.0;
        Eigen::Index count = 0;
        for (Eigen::Index s = 0; s < n; ++s) {
            const double g = x(s, v);
            if (!std::isnan(g)) {
                sum += g;
                ++count;
            }
        }
        const double mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
        for (Eigen::Index s = 0; s < n; ++s) {
            if (std::isnan(x(s, v))) x(s, v) = mean;
        }
    }

    Eigen::VectorXd x_orig_sq(x.cols()), y_orig_sq(phenotypes.cols());
    for (Eigen::Index v = 0; v < x.cols(); ++v) x_orig_sq(v) = x.col(v).squaredNorm();
    for (Eigen::Index t = 0; t < phenotypes.cols(); ++t) {
        y_orig_sq(t) = phenotypes.col(t).squaredNorm();
    }

    x = residualize(x, covariates);
    Eigen::MatrixXd y = residualize(phenotypes, covariates);

    ScanDiagnostics local_diag;
    ScanDiagnostics& diag = diagnostics ? *diagnostics : local_diag;
    diag = ScanDiagnostics{};
    diag.n_tests = M * P;

    Eigen::VectorXd sxx(x.cols()), syy(y.cols());
    std::vector<char> x_degenerate(M, 0), y_degenerate(P, 0);
    for (Eigen::Index v = 0; v < x.cols(); ++v) {
        sxx(v) = x.col(v).squaredNorm();
        if (negligible(sxx(v), x_orig_sq(v))) {
            x_degenerate[static_cast<std::size_t>(v)] = 1;
            diag.zero_variance_variants.push_back(static_cast<VariantIndex>(v));
        }
    }
    for (Eigen::Index t = 0; t < y.cols(); ++t) {
        syy(t) = y.col(t).squaredNorm();
        if (negligible(syy(t), y_orig_sq(t))) {
            y_degenerate[static_cast<std::size_t>(t)] = 1;
            diag.zero_variance_phenotypes.push_back(static_cast<PhenotypeIndex>(t));
        }
    }

    if (config.standardize) {
        for (Eigen::Index v = 0; v < x.cols(); ++v) {
            x.col(v) *= x_degenerate[static_cast<std::size_t>(v)] ? 0.0 : 1.0 / std::sqrt(sxx(v));
        }
        for (Eigen::Index t = 0; t < y.cols(); ++t) {
            y.col(t) *= y_degenerate[static_cast<std::size_t>(t)] ? 0.0 : 1.0 / std::sqrt(syy(t));
        }
    }

    const double p_floor = std::numeric_limits<double>::denorm_min();
    const std::size_t n_blocks = (M + config.block_size - 1) / config.block_size;
    std::vector<std::vector<PValueEntry>> slots(n_blocks);

    parallel_for(n_blocks, effective_threads(config.n_threads), [&](std::size_t blk) {
        const std::size_t v0 = blk * config.block_size;
        const std::size_t nv = std::min(config.block_size, M - v0);
        const Eigen::MatrixXd cross =
            x.middleCols(static_cast<Eigen::Index>(v0), static_cast<Eigen::Index>(nv))
                .transpose() *
            y;
        auto& out = slots[blk];
        for (std::size_t i = 0; i < nv; ++i) {
            const std::size_t v = v0 + i;
            for (std::size_t t = 0; t < P; ++t) {
                double p;
                if (x_degenerate[v] || y_degenerate[t]) {
                    p = 1.0;
                } else if (config.standardize) {
                    const double r = cross(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(t));
                    const double one_minus = 1.0 - r * r;
                    if (one_minus <= 0.0) {
                        p = p_floor;
                    } else {
                        const double tstat = r * std::sqrt(df) / std::sqrt(one_minus);
                        p = stats::student_sf_two_sided(tstat, df);
                    }
                } else {
                    const double sxy = cross(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(t));
                    const double beta = sxy / sxx(static_cast<Eigen::Index>(v));
                    const double rss = syy(static_cast<Eigen::Index>(t)) - beta * sxy;
                    if (rss <= 0.0) {
                        p = p_floor;
                    } else {
                        const double se =
                            std::sqrt(rss / (df * sxx(static_cast<Eigen::Index>(v))));
                        p = stats::student_sf_two_sided(beta / se, df);
                    }
                }
                if (p <= 0.0) p = p_floor;
                if (p <= config.save_threshold) {
                    out.push_back({static_cast<VariantIndex>(v), static_cast<PhenotypeIndex>(t),
                                   p});
                }
            }
        }
    });

    std::vector<PValueEntry> entries;
    std::size_t total = 0;
    for (const auto& s : slots) total += s.size();
    entries.reserve(total);
    for (auto& s : slots) entries.insert(entries.end(), s.begin(), s.end());
    diag.n_stored = entries.size();
    return PValueMatrix::build_sparse(M, P, std::move(entries), config.save_threshold);
}

} // namespace hfdr
