#include "hierfdr/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "hierfdr/errors.hpp"

namespace hfdr {

namespace {

std::string cell_name(std::size_t v, std::size_t t) {
    return "(variant " + std::to_string(v) + ", phenotype " + std::to_string(t) + ")";
}

void check_dims(std::size_t n_variants, std::size_t n_phenotypes) {
    if (n_variants == 0 || n_phenotypes == 0) {
        throw ValidationError("matrix dimensions must be positive");
    }
    if (n_variants > std::numeric_limits<VariantIndex>::max() ||
        n_phenotypes > std::numeric_limits<PhenotypeIndex>::max()) {
        throw ValidationError("matrix dimension exceeds index range");
    }
}

} // namespace

std::string SparseCutoffError::make_message(double cutoff, double save_threshold) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "realized rejection cutoff %.6g exceeds save-threshold %.6g; "
                  "censored entries could have been rejected "
                  "(lower q or raise the save-threshold)",
                  cutoff, save_threshold);
    return buf;
}

PValueMatrix PValueMatrix::build_dense(std::size_t n_variants, std::size_t n_phenotypes,
                                       std::span<const double> values) {
    check_dims(n_variants, n_phenotypes);
    if (values.size() != n_variants * n_phenotypes) {
        throw ValidationError("dense input has " + std::to_string(values.size()) +
                              " values, expected " + std::to_string(n_variants * n_phenotypes));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double p = values[i];
        const std::size_t v = i / n_phenotypes;
        const std::size_t t = i % n_phenotypes;
        if (std::isnan(p)) {
            throw ValidationError("missing p-value at " + cell_name(v, t) +
                                  "; dense input may not contain gaps");
        }
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError("p-value " + std::to_string(p) + " at " + cell_name(v, t) +
                                  " lies outside [0,1]");
        }
    }
    PValueMatrix m;
    m.n_variants_ = n_variants;
    m.n_phenotypes_ = n_phenotypes;
    m.sparse_ = false;
    m.dense_.assign(values.begin(), values.end());
    return m;
}

PValueMatrix PValueMatrix::build_sparse(std::size_t n_variants, std::size_t n_phenotypes,
                                        std::vector<PValueEntry> entries, double save_threshold) {
    check_dims(n_variants, n_phenotypes);
    if (!(save_threshold > 0.0 && save_threshold <= 1.0)) {
        throw ValidationError("save_threshold must lie in (0,1]");
    }
    std::sort(entries.begin(), entries.end(), [](const PValueEntry& a, const PValueEntry& b) {
        if (a.variant != b.variant) return a.variant < b.variant;
        return a.phenotype < b.phenotype;
    });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.variant >= n_variants || e.phenotype >= n_phenotypes) {
            throw ValidationError("entry index " + cell_name(e.variant, e.phenotype) +
                                  " out of range");
        }
        if (std::isnan(e.p) || !(e.p >= 0.0 && e.p <= 1.0)) {
            throw ValidationError("p-value at " + cell_name(e.variant, e.phenotype) +
                                  " lies outside [0,1]");
        }
        if (e.p > save_threshold) {
            throw ValidationError("p-value " + std::to_string(e.p) + " at " +
                                  cell_name(e.variant, e.phenotype) +
                                  " exceeds save_threshold " + std::to_string(save_threshold));
        }
        if (i > 0 && entries[i - 1].variant == e.variant && entries[i - 1].phenotype == e.phenotype) {
            throw ValidationError("duplicate entry at " + cell_name(e.variant, e.phenotype));
        }
    }
    PValueMatrix m;
    m.n_variants_ = n_variants;
    m.n_phenotypes_ = n_phenotypes;
    m.sparse_ = true;
    m.save_threshold_ = save_threshold;
    m.values_.reserve(entries.size());
    m.phenotypes_.reserve(entries.size());
    m.row_start_.assign(n_variants + 1, 0);
    for (const auto& e : entries) {
        m.values_.push_back(e.p);
        m.phenotypes_.push_back(e.phenotype);
        ++m.row_start_[e.variant + 1];
    }
    for (std::size_t v = 0; v < n_variants; ++v) m.row_start_[v + 1] += m.row_start_[v];
    return m;
}

VariantIndex PValueMatrix::stored_variant(std::size_t k) const {
    // row_start_ is nondecreasing; find the row containing entry k.
    const auto it = std::upper_bound(row_start_.begin(), row_start_.end(), k);
    return static_cast<VariantIndex>(it - row_start_.begin() - 1);
}

std::size_t TruthMask::n_false_nulls() const {
    std::size_t n = 0;
    for (auto b : false_null_) n += b;
    return n;
}

std::size_t TruthMask::family_false_nulls(VariantIndex v) const {
    std::size_t n = 0;
    const std::size_t base = static_cast<std::size_t>(v) * n_phenotypes_;
    for (std::size_t t = 0; t < n_phenotypes_; ++t) n += false_null_[base + t];
    return n;
}

void TruthMask::set_positions(std::vector<VariantPosition> positions) {
    if (positions.size() != n_variants_) {
        throw ValidationError("positions must be defined for all " +
                              std::to_string(n_variants_) + " variants");
    }
    positions_ = std::move(positions);
}

} // namespace hfdr
