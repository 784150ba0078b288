#ifndef HIERFDR_HIER_HPP
#define HIERFDR_HIER_HPP

#include <string>

#include "hierfdr/combine.hpp"
#include "hierfdr/core.hpp"
#include "hierfdr/mtp.hpp"

namespace hfdr {

enum class Strategy { pooled_bh, pooled_bonferroni, per_family_bh, hier_bh, hier_bonferroni };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

/// One testing strategy and its tuning. Flat strategies (pooled_*,
/// per_family_bh) run at q1 and ignore q2 and the combiner; hierarchical
/// strategies use the combiner at Stage 0, q1 at Stage 1 and q2 at Stage 2.
struct StrategySpec {
    Strategy strategy = Strategy::hier_bh;
    double q1 = 0.05;
    double q2 = 0.05;
    Combiner combiner = Combiner::simes;
    /// Within-family procedure for Stage 2 (bh or bonferroni).
    TestProcedure stage2 = TestProcedure::bh;

    bool hierarchical() const {
        return strategy == Strategy::hier_bh || strategy == Strategy::hier_bonferroni;
    }
    void validate() const;
};

/// One procedure over the pooled collection of all M*P p-values. Censored
/// matrices are accepted as long as the realized cutoff stays below the
/// save-threshold (SparseCutoffError otherwise).
DecisionSet run_pooled(const PValueMatrix& matrix, TestProcedure procedure, double q);

/// BH at level q independently within each family. Dense matrices only:
/// per-family cutoffs routinely exceed any useful save-threshold.
DecisionSet run_per_family_bh(const PValueMatrix& matrix, double q);

/// Stage 0: combine each family into a global p-value. Stage 1: BH
/// (hier_bh) or Bonferroni (hier_bonferroni) at q1 over the M global
/// p-values, selecting families S. Stage 2: the within-family procedure at
/// level q2*|S|/M inside each selected family. Optionally reports the
/// Stage-1 selection.
DecisionSet run_hierarchical(const PValueMatrix& matrix, const StrategySpec& spec,
                             SelectionSet* selection_out = nullptr);

DecisionSet run_strategy(const PValueMatrix& matrix, const StrategySpec& spec);

} // namespace hfdr

#endif
