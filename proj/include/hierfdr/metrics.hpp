#ifndef HIERFDR_METRICS_HPP
#define HIERFDR_METRICS_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "hierfdr/core.hpp"

namespace hfdr {

/// Truth matching for LD data: a rejection of (v,t) also counts as true
/// when a causal variant for t sits within `window` basepairs of v on the
/// same chromosome and the genotype correlation is at least min_abs_corr in
/// absolute value.
struct ProximityRule {
    bool enabled = false;
    std::int64_t window = 1000000;
    double min_abs_corr = 0.2;

    void validate() const;
};

/// Realized error proportions and power for one replicate.
struct MetricsReport {
    // Proportions over hypotheses / families / selected families / variants.
    double gFDP = 0.0;
    double aFDP = 0.0;
    double sFDP = 0.0;
    double vFDP = 0.0;
    // Familywise-error indicators and their selected-family average.
    double gFWE = 0.0;
    double vFWE = 0.0;
    double sFWE_avg = 0.0;
    // Power against the raw (non-proximity) truth.
    double gPower = 0.0;
    double vPower = 0.0;
    double singletonPower = 0.0;
    // Underlying counts. R/F over hypotheses, Rv/Fv over discovered
    // families, R_i/F_i per family (length M).
    std::size_t R = 0;
    std::size_t F = 0;
    std::size_t Rv = 0;
    std::size_t Fv = 0;
    std::vector<std::size_t> R_i;
    std::vector<std::size_t> F_i;
};

/// Names of the aggregated metrics as reported in CSV output, in the order
/// metric_value() indexes them.
inline constexpr std::array<const char*, 10> kMetricNames = {
    "gFDR", "aFDR", "sFDR", "vFDR", "gFWER",
    "vFWER", "sFWER_avg", "gPower", "vPower", "singletonPower"};

double metric_value(const MetricsReport& r, std::size_t metric_index);

MetricsReport evaluate(const DecisionSet& decisions, const TruthMask& truth,
                       const ProximityRule& rule = {});

/// (gPower, vPower, singletonPower) against the raw truth. Zero denominators
/// yield zero power.
std::array<double, 3> power_components(const DecisionSet& decisions, const TruthMask& truth);

/// Per-metric mean and standard error over replicates. SE is the sample
/// standard deviation (n-1 denominator) divided by sqrt(n); 0 when n == 1.
struct ReplicateAggregate {
    std::size_t n = 0;
    std::array<double, kMetricNames.size()> mean{};
    std::array<double, kMetricNames.size()> se{};
};

ReplicateAggregate aggregate(const std::vector<MetricsReport>& reports);

} // namespace hfdr

#endif
