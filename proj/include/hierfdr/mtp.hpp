#ifndef HIERFDR_MTP_HPP
#define HIERFDR_MTP_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace hfdr {

enum class TestProcedure { bh, by, bonferroni };

const char* to_string(TestProcedure p);

/// Result of one single-collection procedure run.
struct RejectionResult {
    /// Indices (into the input vector) of rejected hypotheses, ascending.
    std::vector<std::size_t> rejected;
    /// Step-up procedures: i*q_eff/m at the maximizing i, 0 when nothing is
    /// rejected. Bonferroni: q/m when anything is rejected, else 0. This is
    /// the value censored-storage verification compares against the
    /// save-threshold.
    double cutoff = 0.0;
    /// Target level q as requested.
    double level = 0.0;
    TestProcedure procedure = TestProcedure::bh;
    /// Hypothesis count m used in the thresholds. Exceeds pvec.size() when
    /// the collection is censored and only the sub-threshold part is stored.
    std::size_t n_total = 0;

    /// Largest threshold the procedure applies to any hypothesis, including
    /// unstored ones; must stay below the save-threshold for censored input.
    double censor_guard() const;
};

/// Benjamini-Hochberg step-up at level q. With n_total > pvec.size() the
/// unstored hypotheses are assumed to exceed every stored p-value; they
/// enter the thresholds i*q/m through m = n_total but cannot be rejected.
RejectionResult bh(std::span<const double> pvec, double q, std::size_t n_total = 0);

/// Benjamini-Yekutieli: BH at effective level q / H_m, H_m = sum 1/i.
RejectionResult by(std::span<const double> pvec, double q, std::size_t n_total = 0);

/// Bonferroni: reject every p <= q/m.
RejectionResult bonferroni(std::span<const double> pvec, double q, std::size_t n_total = 0);

RejectionResult run_procedure(TestProcedure proc, std::span<const double> pvec, double q,
                              std::size_t n_total = 0);

} // namespace hfdr

#endif
