#include "hierfdr/hier.hpp"

#include <algorithm>
#include <stdexcept>

namespace hfdr {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::pooled_bh: return "pooled_bh";
        case Strategy::pooled_bonferroni: return "pooled_bonferroni";
        case Strategy::per_family_bh: return "per_family_bh";
        case Strategy::hier_bh: return "hier_bh";
        case Strategy::hier_bonferroni: return "hier_bonferroni";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "pooled_bh") return Strategy::pooled_bh;
    if (name == "pooled_bonferroni") return Strategy::pooled_bonferroni;
    if (name == "per_family_bh") return Strategy::per_family_bh;
    if (name == "hier_bh") return Strategy::hier_bh;
    if (name == "hier_bonferroni") return Strategy::hier_bonferroni;
    throw ValidationError("unknown strategy '" + name + "'");
}

void StrategySpec::validate() const {
    if (!(q1 > 0.0 && q1 < 1.0)) throw ValidationError("q1 must lie in (0,1)");
    if (!(q2 > 0.0 && q2 < 1.0)) throw ValidationError("q2 must lie in (0,1)");
    if (stage2 == TestProcedure::by) {
        throw ValidationError("stage-2 procedure must be bh or bonferroni");
    }
}

namespace {

void check_censoring(const PValueMatrix& matrix, const RejectionResult& r) {
    if (!matrix.is_sparse()) return;
    const double thr = *matrix.save_threshold();
    if (r.censor_guard() > thr) {
        throw SparseCutoffError(r.censor_guard(), thr);
    }
}

std::vector<VariantIndex> families_with_rejections(const DecisionSet& d) {
    std::vector<VariantIndex> fams;
    for (const auto& [v, t] : d.rejected) {
        if (fams.empty() || fams.back() != v) fams.push_back(v);
    }
    return fams;
}

} // namespace

DecisionSet run_pooled(const PValueMatrix& matrix, TestProcedure procedure, double q) {
    DecisionSet d;
    d.n_variants = matrix.n_variants();
    d.n_phenotypes = matrix.n_phenotypes();
    d.stage2_level = q;

    if (!matrix.is_sparse()) {
        auto r = run_procedure(procedure, matrix.dense_values(), q);
        const std::size_t P = matrix.n_phenotypes();
        for (std::size_t k : r.rejected) {
            d.rejected.emplace_back(static_cast<VariantIndex>(k / P),
                                    static_cast<PhenotypeIndex>(k % P));
        }
    } else {
        auto r = run_procedure(procedure, matrix.stored_values(), q, matrix.n_cells());
        check_censoring(matrix, r);
        for (std::size_t k : r.rejected) {
            d.rejected.emplace_back(matrix.stored_variant(k), matrix.stored_phenotypes()[k]);
        }
        std::sort(d.rejected.begin(), d.rejected.end());
    }
    d.selected_families = families_with_rejections(d);
    return d;
}

DecisionSet run_per_family_bh(const PValueMatrix& matrix, double q) {
    if (matrix.is_sparse()) {
        throw ValidationError("per-family BH needs the dense matrix: its within-family "
                              "cutoffs are not covered by a save-threshold guarantee");
    }
    DecisionSet d;
    d.n_variants = matrix.n_variants();
    d.n_phenotypes = matrix.n_phenotypes();
    d.stage2_level = q;
    for (std::size_t v = 0; v < matrix.n_variants(); ++v) {
        auto r = bh(matrix.family_values(static_cast<VariantIndex>(v)), q);
        for (std::size_t t : r.rejected) {
            d.rejected.emplace_back(static_cast<VariantIndex>(v), static_cast<PhenotypeIndex>(t));
        }
    }
    d.selected_families = families_with_rejections(d);
    return d;
}

DecisionSet run_hierarchical(const PValueMatrix& matrix, const StrategySpec& spec,
                             SelectionSet* selection_out) {
    spec.validate();
    if (!spec.hierarchical()) {
        throw ValidationError("run_hierarchical requires a hierarchical strategy");
    }

    GlobalPValues global = combine_matrix(matrix, spec.combiner);
    const std::size_t M = matrix.n_variants();
    const std::size_t P = matrix.n_phenotypes();

    const TestProcedure stage1 = (spec.strategy == Strategy::hier_bonferroni)
                                     ? TestProcedure::bonferroni
                                     : TestProcedure::bh;
    auto sel = run_procedure(stage1, global.values, spec.q1);

    DecisionSet d;
    d.n_variants = M;
    d.n_phenotypes = P;
    d.selected_families.assign(sel.rejected.begin(), sel.rejected.end());
    if (selection_out) {
        selection_out->indices = d.selected_families;
        selection_out->global_pvalues = global.values;
    }
    if (d.selected_families.empty()) {
        d.stage2_level = 0.0;
        return d;
    }

    d.stage2_level =
        spec.q2 * static_cast<double>(d.selected_families.size()) / static_cast<double>(M);
    for (VariantIndex v : d.selected_families) {
        auto vals = matrix.family_values(v);
        if (vals.empty()) continue;
        auto r = run_procedure(spec.stage2, vals, d.stage2_level, P);
        check_censoring(matrix, r);
        if (!matrix.is_sparse()) {
            for (std::size_t t : r.rejected) {
                d.rejected.emplace_back(v, static_cast<PhenotypeIndex>(t));
            }
        } else {
            auto phen = matrix.family_phenotypes(v);
            for (std::size_t k : r.rejected) d.rejected.emplace_back(v, phen[k]);
        }
    }
    std::sort(d.rejected.begin(), d.rejected.end());
    return d;
}

DecisionSet run_strategy(const PValueMatrix& matrix, const StrategySpec& spec) {
    spec.validate();
    switch (spec.strategy) {
        case Strategy::pooled_bh: return run_pooled(matrix, TestProcedure::bh, spec.q1);
        case Strategy::pooled_bonferroni:
            return run_pooled(matrix, TestProcedure::bonferroni, spec.q1);
        case Strategy::per_family_bh: return run_per_family_bh(matrix, spec.q1);
        case Strategy::hier_bh:
        case Strategy::hier_bonferroni: return run_hierarchical(matrix, spec);
    }
    throw ValidationError("unknown strategy");
}

} // namespace hfdr
