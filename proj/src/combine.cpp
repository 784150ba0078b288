#include "hierfdr/combine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hierfdr/parallel.hpp"
#include "hierfdr/stats.hpp"

namespace hfdr {

const char* to_string(Combiner c) {
    switch (c) {
        case Combiner::simes: return "simes";
        case Combiner::fisher: return "fisher";
        case Combiner::bonferroni_min: return "bonferroni_min";
    }
    return "?";
}

namespace {

void require_nonempty(std::span<const double> pvec) {
    if (pvec.empty()) throw ValidationError("combiner requires a nonempty p-value vector");
}

} // namespace

double simes(std::span<const double> pvec, std::size_t family_size) {
    require_nonempty(pvec);
    if (family_size == 0) family_size = pvec.size();
    if (family_size < pvec.size()) {
        throw ValidationError("family_size smaller than the stored p-value count");
    }
    std::vector<double> sorted(pvec.begin(), pvec.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(family_size);
    double best = 1.0;
    for (std::size_t t = 0; t < sorted.size(); ++t) {
        best = std::min(best, n * sorted[t] / static_cast<double>(t + 1));
    }
    // Unstored members count as 1.0: at rank t they contribute P*1/t >= 1,
    // never below the clamp, so scanning the stored part is exact.
    return best;
}

double fisher(std::span<const double> pvec) {
    require_nonempty(pvec);
    std::vector<double> sorted(pvec.begin(), pvec.end());
    std::sort(sorted.begin(), sorted.end());
    double stat = 0.0;
    for (double p : sorted) {
        if (p <= 0.0) p = std::numeric_limits<double>::denorm_min();
        stat -= 2.0 * std::log(p);
    }
    return stats::chi2_sf(stat, 2.0 * static_cast<double>(sorted.size()));
}

double bonferroni_min(std::span<const double> pvec) {
    require_nonempty(pvec);
    const double lo = *std::min_element(pvec.begin(), pvec.end());
    return std::min(1.0, static_cast<double>(pvec.size()) * lo);
}

GlobalPValues combine_matrix(const PValueMatrix& matrix, Combiner combiner, unsigned n_threads) {
    if (matrix.is_sparse() && combiner != Combiner::simes) {
        throw ValidationError("censored matrices support the Simes combiner only: "
                              "missing cells make the other combiners anti-conservative");
    }
    GlobalPValues out;
    out.combiner = combiner;
    out.conservative = matrix.is_sparse();
    out.values.resize(matrix.n_variants());

    const std::size_t P = matrix.n_phenotypes();
    parallel_for(matrix.n_variants(), effective_threads(n_threads), [&](std::size_t v) {
        auto vals = matrix.family_values(static_cast<VariantIndex>(v));
        double g;
        if (matrix.is_sparse()) {
            g = vals.empty() ? 1.0 : simes(vals, P);
        } else {
            switch (combiner) {
                case Combiner::simes: g = simes(vals); break;
                case Combiner::fisher: g = fisher(vals); break;
                case Combiner::bonferroni_min: g = bonferroni_min(vals); break;
                default: g = 1.0; break;
            }
        }
        out.values[v] = g;
    });
    return out;
}

} // namespace hfdr
