#ifndef HIERFDR_CORE_HPP
#define HIERFDR_CORE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hierfdr/errors.hpp"

namespace hfdr {

using VariantIndex = std::uint32_t;
using PhenotypeIndex = std::uint32_t;

struct PValueEntry {
    VariantIndex variant;
    PhenotypeIndex phenotype;
    double p;
};

/// M x P grid of per-(variant, phenotype) p-values. Either dense (every cell
/// present) or censored at a save-threshold: cells above the threshold are
/// not stored and behave as "p > threshold" downstream. Immutable after
/// construction; safe to share across threads.
class PValueMatrix {
public:
    /// Dense construction from a row-major (variant-major) array of M*P
    /// values. Values must lie in [0,1]; NaN marks a missing cell and is
    /// rejected here; sparsity must be declared through build_sparse.
    static PValueMatrix build_dense(std::size_t n_variants, std::size_t n_phenotypes,
                                    std::span<const double> values);

    /// Censored construction from (variant, phenotype, p) triples. Every p
    /// must be <= save_threshold; duplicate cells are rejected. Unstored
    /// cells are treated as "> save_threshold" by all procedures.
    static PValueMatrix build_sparse(std::size_t n_variants, std::size_t n_phenotypes,
                                     std::vector<PValueEntry> entries, double save_threshold);

    std::size_t n_variants() const { return n_variants_; }
    std::size_t n_phenotypes() const { return n_phenotypes_; }
    std::size_t n_cells() const { return n_variants_ * n_phenotypes_; }
    std::size_t stored_count() const { return sparse_ ? values_.size() : dense_.size(); }

    bool is_sparse() const { return sparse_; }
    std::optional<double> save_threshold() const {
        return sparse_ ? std::optional<double>(save_threshold_) : std::nullopt;
    }

    /// Dense cell access (dense matrices only).
    double at(VariantIndex v, PhenotypeIndex t) const {
        return dense_[static_cast<std::size_t>(v) * n_phenotypes_ + t];
    }

    /// Full dense payload, row-major (dense matrices only).
    std::span<const double> dense_values() const { return dense_; }

    /// Stored values of family v. Dense: the whole row, phenotype index ==
    /// position. Sparse: the stored subset, phenotype indices in
    /// family_phenotypes(v).
    std::span<const double> family_values(VariantIndex v) const {
        if (!sparse_) {
            return {dense_.data() + static_cast<std::size_t>(v) * n_phenotypes_, n_phenotypes_};
        }
        return {values_.data() + row_start_[v], row_start_[v + 1] - row_start_[v]};
    }

    /// Phenotype indices of the stored entries of family v (sparse only).
    std::span<const PhenotypeIndex> family_phenotypes(VariantIndex v) const {
        return {phenotypes_.data() + row_start_[v], row_start_[v + 1] - row_start_[v]};
    }

    /// Stored entries in (variant, phenotype) order (sparse only).
    std::span<const double> stored_values() const { return values_; }
    std::span<const PhenotypeIndex> stored_phenotypes() const { return phenotypes_; }
    VariantIndex stored_variant(std::size_t k) const;

private:
    PValueMatrix() = default;

    std::size_t n_variants_ = 0;
    std::size_t n_phenotypes_ = 0;
    bool sparse_ = false;
    double save_threshold_ = 1.0;
    std::vector<double> dense_;
    // CSR layout for the sparse case.
    std::vector<double> values_;
    std::vector<PhenotypeIndex> phenotypes_;
    std::vector<std::size_t> row_start_;
};

/// How hypotheses group into families. Fixed to one family per variant,
/// each of size P.
struct FamilyLayout {
    std::size_t n_families = 0;
    std::size_t family_size = 0;

    static FamilyLayout by_variant(const PValueMatrix& m) {
        return {m.n_variants(), m.n_phenotypes()};
    }
};

struct VariantPosition {
    std::int32_t chromosome = 0;
    std::int64_t basepair = 0;
};

/// Ground-truth labels per (variant, phenotype), with optional genomic
/// coordinates and a genotype-correlation accessor for proximity matching.
class TruthMask {
public:
    TruthMask(std::size_t n_variants, std::size_t n_phenotypes)
        : n_variants_(n_variants), n_phenotypes_(n_phenotypes),
          false_null_(n_variants * n_phenotypes, 0) {}

    std::size_t n_variants() const { return n_variants_; }
    std::size_t n_phenotypes() const { return n_phenotypes_; }

    void set_false_null(VariantIndex v, PhenotypeIndex t, bool value = true) {
        false_null_[idx(v, t)] = value ? 1 : 0;
    }
    bool false_null(VariantIndex v, PhenotypeIndex t) const { return false_null_[idx(v, t)] != 0; }

    std::size_t n_false_nulls() const;
    /// Number of false nulls in family v.
    std::size_t family_false_nulls(VariantIndex v) const;

    void set_positions(std::vector<VariantPosition> positions);
    bool has_positions() const { return !positions_.empty(); }
    const std::vector<VariantPosition>& positions() const { return positions_; }

    using CorrFn = std::function<double(VariantIndex, VariantIndex)>;
    void set_genotype_corr(CorrFn fn) { corr_ = std::move(fn); }
    bool has_genotype_corr() const { return static_cast<bool>(corr_); }
    double genotype_corr(VariantIndex a, VariantIndex b) const { return corr_(a, b); }

private:
    std::size_t idx(VariantIndex v, PhenotypeIndex t) const {
        return static_cast<std::size_t>(v) * n_phenotypes_ + t;
    }

    std::size_t n_variants_;
    std::size_t n_phenotypes_;
    std::vector<std::uint8_t> false_null_;
    std::vector<VariantPosition> positions_;
    CorrFn corr_;
};

/// Outcome of one testing strategy: hypothesis-level rejections plus the
/// family-level selection that produced them.
struct DecisionSet {
    std::size_t n_variants = 0;
    std::size_t n_phenotypes = 0;
    /// Rejected (variant, phenotype) pairs, sorted.
    std::vector<std::pair<VariantIndex, PhenotypeIndex>> rejected;
    /// Selected (discovered) families, sorted ascending.
    std::vector<VariantIndex> selected_families;
    /// Realized within-family target level (q2 * |S| / M for hierarchical
    /// runs, 0 when nothing is selected; the flat level otherwise).
    double stage2_level = 0.0;

    bool operator==(const DecisionSet&) const = default;
};

/// Stage-1 outcome: the selected family indices and the global p-values
/// they were selected from.
struct SelectionSet {
    std::vector<VariantIndex> indices;    // sorted unique
    std::vector<double> global_pvalues;   // length M
};

} // namespace hfdr

#endif
