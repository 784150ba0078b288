#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hierfdr/errors.hpp"
#include "hierfdr/simgen.hpp"
#include "oracles.hpp"

using namespace hfdr;

namespace {

// Kolmogorov-Smirnov distance of a sample against Uniform(0,1).
double ks_uniform(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double lo = sample[i] - static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n - sample[i];
        d = std::max(d, std::max(lo, hi));
    }
    return d;
}

double column_corr(const Eigen::MatrixXd& m, Eigen::Index a, Eigen::Index b) {
    const Eigen::VectorXd x = m.col(a).array() - m.col(a).mean();
    const Eigen::VectorXd y = m.col(b).array() - m.col(b).mean();
    return x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
}

} // namespace

TEST_SUITE("simgen") {

TEST_CASE("pvalue_from_stat matches the normal tail") {
    CHECK(pvalue_from_stat(2.0, 1.0) ==
          doctest::Approx(0.04550026389635842).epsilon(1e-12));
    CHECK(pvalue_from_stat(-2.0, 1.0) == pvalue_from_stat(2.0, 1.0));
    CHECK(pvalue_from_stat(0.0, 1.0) == 1.0);
    CHECK(pvalue_from_stat(2.0, 2.0) ==
          doctest::Approx(2.0 * oracle::normal_sf(1.0)).epsilon(1e-12));
    CHECK(pvalue_from_stat(7.0, 0.5) ==
          doctest::Approx(2.0 * oracle::normal_sf(14.0)).epsilon(1e-11));
}

TEST_CASE("truth placement respects the block layout") {
    ScenarioSpec spec;
    spec.M = 100;
    spec.P = 20;
    spec.blocks = {{10, 3}, {5, 1}};
    const auto [matrix, truth] = gen_independent(spec, 1.0, 0);

    CHECK(matrix.n_variants() == 100);
    CHECK(matrix.n_phenotypes() == 20);
    CHECK(truth.n_false_nulls() == 10 * 3 + 5 * 1);

    std::size_t with3 = 0, with1 = 0, with0 = 0;
    for (VariantIndex v = 0; v < 100; ++v) {
        const auto k = truth.family_false_nulls(v);
        if (k == 3) ++with3;
        else if (k == 1) ++with1;
        else if (k == 0) ++with0;
        else CHECK(false);
    }
    CHECK(with3 == 10);
    CHECK(with1 == 5);
    CHECK(with0 == 85);

    for (double p : matrix.dense_values()) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("figure-sized scenario yields 1500 false nulls") {
    ScenarioSpec spec;
    spec.M = 3000;
    spec.P = 100;
    spec.blocks = {{60, 25}};
    const auto [matrix, truth] = gen_independent(spec, 1.0, 3);
    CHECK(truth.n_false_nulls() == 1500);
    CHECK(matrix.n_cells() == 300000);
}

TEST_CASE("replicates are reproducible and distinct") {
    ScenarioSpec spec;
    spec.M = 50;
    spec.P = 8;
    spec.blocks = {{5, 2}};
    const auto [m1, t1] = gen_independent(spec, 1.5, 7);
    const auto [m2, t2] = gen_independent(spec, 1.5, 7);
    const auto v1 = m1.dense_values();
    const auto v2 = m2.dense_values();
    REQUIRE(v1.size() == v2.size());
    for (std::size_t i = 0; i < v1.size(); ++i) CHECK(v1[i] == v2[i]);
    CHECK(t1.n_false_nulls() == t2.n_false_nulls());
    for (VariantIndex v = 0; v < 50; ++v) {
        CHECK(t1.family_false_nulls(v) == t2.family_false_nulls(v));
    }

    const auto [m3, t3] = gen_independent(spec, 1.5, 8);
    const auto v3 = m3.dense_values();
    bool any_diff = false;
    for (std::size_t i = 0; i < v1.size() && !any_diff; ++i) any_diff = v1[i] != v3[i];
    CHECK(any_diff);
}

TEST_CASE("null cells are uniform, signal cells are shifted") {
    ScenarioSpec spec;
    spec.M = 200;
    spec.P = 10;
    spec.blocks = {{20, 2}};
    const auto [matrix, truth] = gen_independent(spec, 1.0, 11);

    std::vector<double> nulls, signals;
    for (VariantIndex v = 0; v < 200; ++v) {
        for (PhenotypeIndex t = 0; t < 10; ++t) {
            (truth.false_null(v, t) ? signals : nulls).push_back(matrix.at(v, t));
        }
    }
    REQUIRE(nulls.size() == 2000 - 40);
    REQUIRE(signals.size() == 40);

    // 1% KS critical value is 1.63 / sqrt(n).
    CHECK(ks_uniform(nulls) < 1.63 / std::sqrt(static_cast<double>(nulls.size())));

    double null_mean = 0.0, signal_mean = 0.0;
    for (double p : nulls) null_mean += p;
    for (double p : signals) signal_mean += p;
    null_mean /= static_cast<double>(nulls.size());
    signal_mean /= static_cast<double>(signals.size());
    CHECK(signal_mean < 0.25);
    CHECK(null_mean > 0.4);
    CHECK(null_mean < 0.6);
}

TEST_CASE("scenario validation") {
    ScenarioSpec spec;
    spec.M = 10;
    spec.P = 4;
    spec.blocks = {{11, 1}};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.blocks = {{2, 5}};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.blocks = {{2, 2}};
    CHECK_NOTHROW(spec.validate());
    spec.noise_grid = {};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.noise_grid = {-1.0};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.noise_grid = {1.0};
    spec.replicates = 0;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.replicates = 1;
    CHECK_THROWS_AS(gen_independent(spec, 0.0, 0), ValidationError);
}

TEST_CASE("ld genotypes have the declared shape") {
    const auto g = gen_genotypes_ld(200, 12, 5, 0.9, {0.05, 0.5}, 42, 100000);
    CHECK(g.n_subjects() == 200);
    CHECK(g.n_variants() == 12);
    REQUIRE(g.positions.size() == 12);
    for (std::size_t v = 0; v < 12; ++v) {
        CHECK(g.positions[v].chromosome == 1);
        CHECK(g.positions[v].basepair == static_cast<std::int64_t>(v + 1) * 100000);
        CHECK(g.maf[v] >= 0.05);
        CHECK(g.maf[v] <= 0.5);
    }
    for (Eigen::Index s = 0; s < g.data.rows(); ++s) {
        for (Eigen::Index v = 0; v < g.data.cols(); ++v) {
            const double x = g.data(s, v);
            CHECK((x == 0.0 || x == 1.0 || x == 2.0));
        }
    }
}

TEST_CASE("ld correlation tracks rho and restarts at block boundaries") {
    {
        const auto g = gen_genotypes_ld(5000, 10, 10, 0.0, {0.2, 0.5}, 7, 100000);
        for (Eigen::Index v = 0; v + 1 < 10; ++v) {
            CHECK(std::abs(column_corr(g.data, v, v + 1)) < 0.05);
        }
    }
    {
        const auto g = gen_genotypes_ld(5000, 10, 5, 0.9, {0.2, 0.5}, 8, 100000);
        CHECK(column_corr(g.data, 0, 1) > 0.5);
        CHECK(column_corr(g.data, 2, 3) > 0.5);
        CHECK(column_corr(g.data, 5, 6) > 0.5);
        // Columns 4 and 5 straddle a block boundary.
        CHECK(std::abs(column_corr(g.data, 4, 5)) < 0.05);

        CHECK(genotype_correlation(g, 0, 1) ==
              doctest::Approx(column_corr(g.data, 0, 1)).epsilon(1e-12));
        CHECK(genotype_correlation(g, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        const auto fn = genotype_corr_fn(g);
        CHECK(fn(0, 1) == genotype_correlation(g, 0, 1));
    }
}

TEST_CASE("genotype frequencies follow hardy-weinberg at maf one half") {
    const auto g = gen_genotypes_ld(20000, 2, 1, 0.0, {0.5, 0.5}, 9, 100000);
    for (Eigen::Index v = 0; v < 2; ++v) {
        double c0 = 0, c1 = 0, c2 = 0;
        for (Eigen::Index s = 0; s < g.data.rows(); ++s) {
            const double x = g.data(s, v);
            if (x == 0.0) ++c0;
            else if (x == 1.0) ++c1;
            else ++c2;
        }
        const double n = static_cast<double>(g.data.rows());
        CHECK(c0 / n == doctest::Approx(0.25).epsilon(0.08));
        CHECK(c1 / n == doctest::Approx(0.50).epsilon(0.05));
        CHECK(c2 / n == doctest::Approx(0.25).epsilon(0.08));
    }
}

TEST_CASE("ld genotype validation") {
    CHECK_THROWS_AS(gen_genotypes_ld(0, 5, 5, 0.5, {0.1, 0.5}, 1), ValidationError);
    CHECK_THROWS_AS(gen_genotypes_ld(10, 0, 5, 0.5, {0.1, 0.5}, 1), ValidationError);
    CHECK_THROWS_AS(gen_genotypes_ld(10, 5, 0, 0.5, {0.1, 0.5}, 1), ValidationError);
    CHECK_THROWS_AS(gen_genotypes_ld(10, 5, 5, 1.0, {0.1, 0.5}, 1), ValidationError);
    CHECK_THROWS_AS(gen_genotypes_ld(10, 5, 5, -0.1, {0.1, 0.5}, 1), ValidationError);
    CHECK_THROWS_AS(gen_genotypes_ld(10, 5, 5, 0.5, {0.0, 0.5}, 1), ValidationError);
    CHECK_THROWS_AS(gen_genotypes_ld(10, 5, 5, 0.5, {0.1, 0.6}, 1), ValidationError);
    CHECK_THROWS_AS(gen_genotypes_ld(10, 5, 5, 0.5, {0.4, 0.2}, 1), ValidationError);
    CHECK_THROWS_AS(gen_genotypes_ld(10, 5, 5, 0.5, {0.1, 0.5}, 1, 0), ValidationError);
}

TEST_CASE("random effects pick distinct slots") {
    rng::Stream stream(77);
    const auto eff = random_effects(50, 10, {{5, 2}, {3, 1}}, 1.5, stream);
    CHECK(eff.n_variants == 50);
    CHECK(eff.n_phenotypes == 10);
    REQUIRE(eff.entries.size() == 5 * 2 + 3 * 1);
    for (const auto& e : eff.entries) {
        CHECK(e.variant < 50);
        CHECK(e.phenotype < 10);
        CHECK(e.beta == 1.5);
    }
    for (std::size_t i = 1; i < eff.entries.size(); ++i) {
        const auto& a = eff.entries[i - 1];
        const auto& b = eff.entries[i];
        CHECK((a.variant < b.variant || (a.variant == b.variant && a.phenotype < b.phenotype)));
    }

    const auto truth = eff.to_truth();
    CHECK(truth.n_false_nulls() == eff.entries.size());
    for (const auto& e : eff.entries) CHECK(truth.false_null(e.variant, e.phenotype));

    const auto dense = eff.dense();
    CHECK(dense.rows() == 50);
    CHECK(dense.cols() == 10);
    CHECK(dense.sum() == doctest::Approx(1.5 * 13.0).epsilon(1e-12));
}

TEST_CASE("phenotypes are genotype effects plus noise") {
    const auto g = gen_genotypes_ld(500, 6, 3, 0.5, {0.2, 0.5}, 12, 100000);

    EffectMap none;
    none.n_variants = 6;
    none.n_phenotypes = 2;
    const auto noise_only = gen_phenotypes(g, none, 1.0, 100);
    CHECK(noise_only.rows() == 500);
    CHECK(noise_only.cols() == 2);
    CHECK(std::abs(noise_only.mean()) < 0.1);

    const auto again = gen_phenotypes(g, none, 1.0, 100);
    CHECK((noise_only - again).cwiseAbs().maxCoeff() == 0.0);
    const auto other = gen_phenotypes(g, none, 1.0, 101);
    CHECK((noise_only - other).cwiseAbs().maxCoeff() > 0.0);

    EffectMap one;
    one.n_variants = 6;
    one.n_phenotypes = 2;
    one.entries = {{2, 1, 1.0}};
    const auto strong = gen_phenotypes(g, one, 1e-8, 100);
    Eigen::MatrixXd joint(500, 2);
    joint.col(0) = g.data.col(2);
    joint.col(1) = strong.col(1);
    CHECK(column_corr(joint, 0, 1) > 0.999);
}

TEST_CASE("ld replicates regenerate bit for bit") {
    LdScenarioSpec spec;
    spec.n_subjects = 120;
    spec.M = 30;
    spec.P = 4;
    spec.blocks = {{3, 2}};
    spec.beta = 0.8;
    spec.ld_block_size = 5;
    CHECK_NOTHROW(spec.validate());

    const auto a = gen_ld_replicate(spec, 1.0, 2);
    const auto b = gen_ld_replicate(spec, 1.0, 2);
    CHECK(a.genotypes.n_variants() == 30);
    CHECK(a.phenotypes.cols() == 4);
    CHECK(a.effects.entries.size() == 6);
    CHECK((a.genotypes.data - b.genotypes.data).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.phenotypes - b.phenotypes).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.effects.entries.size() == b.effects.entries.size());
    for (std::size_t i = 0; i < a.effects.entries.size(); ++i) {
        CHECK(a.effects.entries[i].variant == b.effects.entries[i].variant);
        CHECK(a.effects.entries[i].phenotype == b.effects.entries[i].phenotype);
    }

    const auto c = gen_ld_replicate(spec, 1.0, 3);
    CHECK((a.phenotypes - c.phenotypes).cwiseAbs().maxCoeff() > 0.0);
}

} // TEST_SUITE
