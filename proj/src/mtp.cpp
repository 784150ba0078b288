#include "hierfdr/mtp.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "hierfdr/errors.hpp"

namespace hfdr {

const char* to_string(TestProcedure p) {
    switch (p) {
        case TestProcedure::bh: return "bh";
        case TestProcedure::by: return "by";
        case TestProcedure::bonferroni: return "bonferroni";
    }
    return "?";
}

double RejectionResult::censor_guard() const {
    if (procedure == TestProcedure::bonferroni) {
        return level / static_cast<double>(n_total);
    }
    return cutoff;
}

namespace {

void validate(std::span<const double> pvec, double q, std::size_t& n_total) {
    if (pvec.empty()) throw ValidationError("procedure requires a nonempty p-value vector");
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("level q must lie in (0,1)");
    if (n_total == 0) n_total = pvec.size();
    if (n_total < pvec.size()) {
        throw ValidationError("n_total smaller than the stored p-value count");
    }
}

// Index-stable ascending order: (p, index). Ties are broken by position so
// rejected sets are reproducible.
std::vector<std::uint32_t> sorted_order(std::span<const double> pvec) {
    std::vector<std::uint32_t> order(pvec.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (pvec[a] != pvec[b]) return pvec[a] < pvec[b];
        return a < b;
    });
    return order;
}

RejectionResult step_up(std::span<const double> pvec, double q_requested, double q_effective,
                        std::size_t n_total, TestProcedure tag) {
    auto order = sorted_order(pvec);
    const double m = static_cast<double>(n_total);
    std::size_t k = 0;
    for (std::size_t i = order.size(); i >= 1; --i) {
        if (pvec[order[i - 1]] <= static_cast<double>(i) * q_effective / m) {
            k = i;
            break;
        }
    }
    RejectionResult r;
    r.level = q_requested;
    r.procedure = tag;
    r.n_total = n_total;
    r.cutoff = (k == 0) ? 0.0 : static_cast<double>(k) * q_effective / m;
    r.rejected.assign(order.begin(), order.begin() + k);
    std::sort(r.rejected.begin(), r.rejected.end());
    return r;
}

} // namespace

RejectionResult bh(std::span<const double> pvec, double q, std::size_t n_total) {
    validate(pvec, q, n_total);
    return step_up(pvec, q, q, n_total, TestProcedure::bh);
}

RejectionResult by(std::span<const double> pvec, double q, std::size_t n_total) {
    validate(pvec, q, n_total);
    double harmonic = 0.0;
    for (std::size_t i = n_total; i >= 1; --i) harmonic += 1.0 / static_cast<double>(i);
    return step_up(pvec, q, q / harmonic, n_total, TestProcedure::by);
}

RejectionResult bonferroni(std::span<const double> pvec, double q, std::size_t n_total) {
    validate(pvec, q, n_total);
    const double threshold = q / static_cast<double>(n_total);
    RejectionResult r;
    r.level = q;
    r.procedure = TestProcedure::bonferroni;
    r.n_total = n_total;
    for (std::size_t i = 0; i < pvec.size(); ++i) {
        if (pvec[i] <= threshold) r.rejected.push_back(i);
    }
    r.cutoff = r.rejected.empty() ? 0.0 : threshold;
    return r;
}

RejectionResult run_procedure(TestProcedure proc, std::span<const double> pvec, double q,
                              std::size_t n_total) {
    switch (proc) {
        case TestProcedure::bh: return bh(pvec, q, n_total);
        case TestProcedure::by: return by(pvec, q, n_total);
        case TestProcedure::bonferroni: return bonferroni(pvec, q, n_total);
    }
    throw ValidationError("unknown test procedure");
}

} // namespace hfdr
