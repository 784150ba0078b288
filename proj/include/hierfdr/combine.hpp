#ifndef HIERFDR_COMBINE_HPP
#define HIERFDR_COMBINE_HPP

#include <span>
#include <vector>

#include "hierfdr/core.hpp"

namespace hfdr {

enum class Combiner { simes, fisher, bonferroni_min };

const char* to_string(Combiner c);

/// One global p-value per family (length M).
struct GlobalPValues {
    std::vector<double> values;
    Combiner combiner = Combiner::simes;
    /// True when censored cells were treated as 1.0, making the values an
    /// upper bound on the dense result.
    bool conservative = false;
};

/// Simes combination: min over t of P * p_(t) / t, clamped to <= 1.
/// family_size = 0 means P = pvec.size(); a larger family_size stands for a
/// censored family whose unstored members count as 1.0 (they can never
/// attain the minimum, so only the multiplicity P changes).
double simes(std::span<const double> pvec, std::size_t family_size = 0);

/// Fisher combination: upper tail of chi-square with 2P dof at -2 sum log p.
/// Zero entries are floored at the smallest positive double before the log.
double fisher(std::span<const double> pvec);

/// min(P * min(pvec), 1).
double bonferroni_min(std::span<const double> pvec);

/// Stage 0: one global p-value per family. Censored matrices are accepted
/// under Simes only (treat-as-1 is conservative there and anti-conservative
/// for the other combiners); the result is flagged conservative.
GlobalPValues combine_matrix(const PValueMatrix& matrix, Combiner combiner,
                             unsigned n_threads = 1);

} // namespace hfdr

#endif
