#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "hierfdr/errors.hpp"
#include "hierfdr/metrics.hpp"

using namespace hfdr;

namespace {

DecisionSet make_decisions(std::size_t M, std::size_t P,
                           std::vector<std::pair<VariantIndex, PhenotypeIndex>> rejected) {
    DecisionSet d;
    d.n_variants = M;
    d.n_phenotypes = P;
    std::sort(rejected.begin(), rejected.end());
    d.rejected = std::move(rejected);
    for (const auto& [v, t] : d.rejected) {
        if (d.selected_families.empty() || d.selected_families.back() != v) {
            d.selected_families.push_back(v);
        }
    }
    return d;
}

bool reports_equal(const MetricsReport& a, const MetricsReport& b) {
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
        if (metric_value(a, m) != metric_value(b, m)) return false;
    }
    return a.R == b.R && a.F == b.F && a.Rv == b.Rv && a.Fv == b.Fv;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("five family worked example") {
    // 5 families x 8 phenotypes. Families 0 and 2 carry signal; rejections
    // land in families 0, 1 and 2.
    TruthMask truth(5, 8);
    for (const PhenotypeIndex t : {0, 2, 5, 7}) truth.set_false_null(0, t);
    for (const PhenotypeIndex t : {0, 1, 3, 4, 5}) truth.set_false_null(2, t);

    std::vector<std::pair<VariantIndex, PhenotypeIndex>> rejected;
    for (const PhenotypeIndex t : {0, 2, 5}) rejected.push_back({0, t});
    rejected.push_back({1, 3});
    for (PhenotypeIndex t = 0; t < 6; ++t) rejected.push_back({2, t});
    const auto d = make_decisions(5, 8, rejected);

    const auto rep = evaluate(d, truth);
    CHECK(rep.R == 10);
    CHECK(rep.F == 2);
    CHECK(rep.Rv == 3);
    CHECK(rep.Fv == 1);
    CHECK(rep.gFDP == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(rep.vFDP == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(rep.aFDP == doctest::Approx(7.0 / 30.0).epsilon(1e-12));
    CHECK(rep.sFDP == doctest::Approx(7.0 / 18.0).epsilon(1e-12));
    CHECK(rep.gFWE == 1.0);
    CHECK(rep.vFWE == 1.0);
    CHECK(rep.sFWE_avg == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rep.gPower == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(rep.vPower == 1.0);
    // No family has exactly one false null.
    CHECK(rep.singletonPower == 0.0);
}

TEST_CASE("no rejections gives all zeros") {
    TruthMask truth(3, 4);
    truth.set_false_null(1, 2);
    const auto rep = evaluate(make_decisions(3, 4, {}), truth);
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) CHECK(metric_value(rep, m) == 0.0);
}

TEST_CASE("perfect decisions") {
    TruthMask truth(3, 4);
    truth.set_false_null(0, 1);
    truth.set_false_null(0, 3);
    truth.set_false_null(2, 0);
    const auto d = make_decisions(3, 4, {{0, 1}, {0, 3}, {2, 0}});
    const auto rep = evaluate(d, truth);
    CHECK(rep.gFDP == 0.0);
    CHECK(rep.aFDP == 0.0);
    CHECK(rep.sFDP == 0.0);
    CHECK(rep.vFDP == 0.0);
    CHECK(rep.gFWE == 0.0);
    CHECK(rep.gPower == 1.0);
    CHECK(rep.vPower == 1.0);
    // Family 2 is a singleton and was discovered.
    CHECK(rep.singletonPower == 1.0);
}

TEST_CASE("vpower counts discovered associated families") {
    TruthMask truth(60, 1);
    for (VariantIndex v = 0; v < 60; ++v) truth.set_false_null(v, 0);
    std::vector<std::pair<VariantIndex, PhenotypeIndex>> rejected;
    for (VariantIndex v = 0; v < 30; ++v) rejected.push_back({v, 0});
    const auto powers = power_components(make_decisions(60, 1, rejected), truth);
    CHECK(powers[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(powers[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("all-null truth marks every rejection false") {
    TruthMask truth(2, 2);
    const auto rep = evaluate(make_decisions(2, 2, {{0, 0}, {1, 1}}), truth);
    CHECK(rep.gFDP == 1.0);
    CHECK(rep.gPower == 0.0);
    CHECK(rep.vPower == 0.0);
    CHECK(rep.vFDP == 1.0);
}

TEST_CASE("sfdp dominates afdp when selection matches rejections") {
    std::mt19937_64 eng(6006);
    std::uniform_int_distribution<std::size_t> m_dist(2, 12);
    std::uniform_int_distribution<std::size_t> p_dist(1, 6);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t M = m_dist(eng), P = p_dist(eng);
        TruthMask truth(M, P);
        std::vector<std::pair<VariantIndex, PhenotypeIndex>> rejected;
        for (VariantIndex v = 0; v < M; ++v) {
            for (PhenotypeIndex t = 0; t < P; ++t) {
                if (unif(eng) < 0.2) truth.set_false_null(v, t);
                if (unif(eng) < 0.3) rejected.push_back({v, t});
            }
        }
        const auto r = evaluate(make_decisions(M, P, rejected), truth);
        CHECK(r.sFDP >= r.aFDP - 1e-15);
        CHECK(r.F <= r.R);
        CHECK(r.Fv <= r.Rv);
    }
}

TEST_CASE("evaluate is invariant to phenotype permutations") {
    std::mt19937_64 eng(7007);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t M = 8, P = 5;
    for (int rep = 0; rep < 200; ++rep) {
        TruthMask truth(M, P), truth_perm(M, P);
        std::vector<PhenotypeIndex> perm(P);
        for (PhenotypeIndex t = 0; t < P; ++t) perm[t] = t;
        std::shuffle(perm.begin(), perm.end(), eng);

        std::vector<std::pair<VariantIndex, PhenotypeIndex>> rejected, rejected_perm;
        for (VariantIndex v = 0; v < M; ++v) {
            for (PhenotypeIndex t = 0; t < P; ++t) {
                if (unif(eng) < 0.2) {
                    truth.set_false_null(v, t);
                    truth_perm.set_false_null(v, perm[t]);
                }
                if (unif(eng) < 0.3) {
                    rejected.push_back({v, t});
                    rejected_perm.push_back({v, perm[t]});
                }
            }
        }
        const auto a = evaluate(make_decisions(M, P, rejected), truth);
        const auto b = evaluate(make_decisions(M, P, rejected_perm), truth_perm);
        CHECK(reports_equal(a, b));
    }
}

TEST_CASE("aggregate means and standard errors") {
    MetricsReport r0, r1;
    r0.gFDP = 0.0;
    r1.gFDP = 1.0;
    const auto two = aggregate({r0, r1});
    CHECK(two.n == 2);
    CHECK(two.mean[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.se[0] == doctest::Approx(0.5).epsilon(1e-12));

    const auto one = aggregate({r1});
    CHECK(one.mean[0] == 1.0);
    CHECK(one.se[0] == 0.0);

    const auto many = aggregate(std::vector<MetricsReport>(250, r1));
    CHECK(many.mean[0] == 1.0);
    CHECK(many.se[0] == 0.0);

    CHECK_THROWS_AS(aggregate({}), ValidationError);
}

TEST_CASE("metric names line up with metric_value") {
    MetricsReport r;
    r.gFDP = 0.1;
    r.singletonPower = 0.9;
    CHECK(metric_value(r, 0) == 0.1);
    CHECK(metric_value(r, 9) == 0.9);
    CHECK(std::string(kMetricNames[0]) == "gFDR");
    CHECK(std::string(kMetricNames[9]) == "singletonPower");
    CHECK_THROWS_AS(metric_value(r, 10), std::out_of_range);
}

TEST_CASE("proximity rule needs positions and correlations") {
    TruthMask truth(2, 1);
    truth.set_false_null(0, 0);
    ProximityRule rule;
    rule.enabled = true;
    const auto d = make_decisions(2, 1, {{1, 0}});
    CHECK_THROWS_AS(evaluate(d, truth, rule), ValidationError);
    truth.set_positions({{1, 100}, {1, 200}});
    CHECK_THROWS_AS(evaluate(d, truth, rule), ValidationError);
    truth.set_genotype_corr([](VariantIndex, VariantIndex) { return 1.0; });
    CHECK_NOTHROW(evaluate(d, truth, rule));

    rule.window = -1;
    CHECK_THROWS_AS(evaluate(d, truth, rule), ValidationError);
    rule.window = 100;
    rule.min_abs_corr = 1.5;
    CHECK_THROWS_AS(evaluate(d, truth, rule), ValidationError);
}

TEST_CASE("proximity rule credits nearby correlated rejections") {
    // Causal variant 0 at 1kb. Variant 1 is close and correlated, variant 2
    // is correlated but 2Mb away, variant 3 is close but uncorrelated,
    // variant 4 sits on another chromosome.
    TruthMask truth(5, 1);
    truth.set_false_null(0, 0);
    truth.set_positions({{1, 1000}, {1, 500000}, {1, 2000000}, {1, 900000}, {2, 1000}});
    truth.set_genotype_corr([](VariantIndex a, VariantIndex b) {
        const auto lo = std::min(a, b), hi = std::max(a, b);
        if (lo == 0 && hi == 1) return 0.5;
        if (lo == 0 && hi == 2) return 0.9;
        if (lo == 0 && hi == 3) return 0.05;
        return 0.0;
    });

    const auto d = make_decisions(5, 1, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});

    ProximityRule off;
    const auto plain = evaluate(d, truth, off);
    CHECK(plain.F == 4);
    CHECK(plain.Fv == 4);

    ProximityRule rule;
    rule.enabled = true;
    rule.window = 1000000;
    rule.min_abs_corr = 0.2;
    const auto prox = evaluate(d, truth, rule);
    CHECK(prox.F == 3);
    CHECK(prox.Fv == 3);
    CHECK(prox.gFDP == doctest::Approx(0.6).epsilon(1e-12));
    // Power still reads the raw truth.
    CHECK(prox.gPower == plain.gPower);
    CHECK(prox.vPower == plain.vPower);

    // Window and correlation bounds are inclusive.
    ProximityRule exact;
    exact.enabled = true;
    exact.window = 499000;
    exact.min_abs_corr = 0.5;
    const auto edge = evaluate(d, truth, exact);
    CHECK(edge.F == 3);
    exact.window = 498999;
    CHECK(evaluate(d, truth, exact).F == 4);
    exact.window = 499000;
    exact.min_abs_corr = 0.5000001;
    CHECK(evaluate(d, truth, exact).F == 4);
}

TEST_CASE("dimension mismatches are rejected") {
    TruthMask truth(2, 2);
    CHECK_THROWS_AS(evaluate(make_decisions(3, 2, {}), truth), ValidationError);
    CHECK_THROWS_AS(power_components(make_decisions(2, 3, {}), truth), ValidationError);
}

} // TEST_SUITE
