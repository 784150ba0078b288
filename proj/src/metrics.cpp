#include "hierfdr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hfdr {

void ProximityRule::validate() const {
    if (window < 0) throw ValidationError("proximity window must be nonnegative");
    if (!(min_abs_corr >= 0.0 && min_abs_corr <= 1.0)) {
        throw ValidationError("proximity correlation threshold must lie in [0,1]");
    }
}

namespace {

// Causal variants per phenotype, sorted by (chromosome, basepair) when
// positions exist so proximity lookups can bisect.
struct CausalIndex {
    const TruthMask& truth;
    const ProximityRule& rule;
    std::vector<std::vector<VariantIndex>> by_phenotype;

    CausalIndex(const TruthMask& t, const ProximityRule& r) : truth(t), rule(r) {
        by_phenotype.resize(t.n_phenotypes());
        for (VariantIndex v = 0; v < t.n_variants(); ++v) {
            for (PhenotypeIndex ph = 0; ph < t.n_phenotypes(); ++ph) {
                if (t.false_null(v, ph)) by_phenotype[ph].push_back(v);
            }
        }
        if (rule.enabled) {
            const auto& pos = t.positions();
            for (auto& list : by_phenotype) {
                std::sort(list.begin(), list.end(), [&](VariantIndex a, VariantIndex b) {
                    if (pos[a].chromosome != pos[b].chromosome) {
                        return pos[a].chromosome < pos[b].chromosome;
                    }
                    return pos[a].basepair < pos[b].basepair;
                });
            }
        }
    }

    // Effective truth of hypothesis (v,t): raw truth, or proximity to a
    // causal variant for the same phenotype.
    bool effective(VariantIndex v, PhenotypeIndex t) const {
        if (truth.false_null(v, t)) return true;
        if (!rule.enabled) return false;
        const auto& pos = truth.positions();
        const auto& list = by_phenotype[t];
        const VariantPosition target = pos[v];
        auto lo = std::lower_bound(list.begin(), list.end(), target.basepair - rule.window,
                                   [&](VariantIndex a, std::int64_t bp) {
                                       if (pos[a].chromosome != target.chromosome) {
                                           return pos[a].chromosome < target.chromosome;
                                       }
                                       return pos[a].basepair < bp;
                                   });
        for (auto it = lo; it != list.end(); ++it) {
            const VariantPosition cand = pos[*it];
            if (cand.chromosome != target.chromosome ||
                cand.basepair > target.basepair + rule.window) {
                break;
            }
            if (std::abs(truth.genotype_corr(v, *it)) >= rule.min_abs_corr) return true;
        }
        return false;
    }

    // A family discovery is true when the family holds any effective false
    // null for some phenotype.
    bool family_effective(VariantIndex v) const {
        for (PhenotypeIndex t = 0; t < truth.n_phenotypes(); ++t) {
            if (effective(v, t)) return true;
        }
        return false;
    }
};

void check_dimensions(const DecisionSet& d, const TruthMask& truth) {
    if (d.n_variants != truth.n_variants() || d.n_phenotypes != truth.n_phenotypes()) {
        throw ValidationError("decision set and truth mask dimensions disagree");
    }
}

} // namespace

std::array<double, 3> power_components(const DecisionSet& decisions, const TruthMask& truth) {
    check_dimensions(decisions, truth);
    const std::size_t M = truth.n_variants();

    std::size_t true_rejections = 0;
    std::vector<std::uint8_t> family_hit(M, 0);
    for (const auto& [v, t] : decisions.rejected) {
        if (truth.false_null(v, t)) ++true_rejections;
        family_hit[v] = 1;
    }

    std::size_t n_false_nulls = 0;
    std::size_t assoc = 0, assoc_hit = 0;
    std::size_t singleton = 0, singleton_hit = 0;
    for (VariantIndex v = 0; v < M; ++v) {
        const std::size_t k = truth.family_false_nulls(v);
        n_false_nulls += k;
        if (k > 0) {
            ++assoc;
            assoc_hit += family_hit[v];
        }
        if (k == 1) {
            ++singleton;
            singleton_hit += family_hit[v];
        }
    }

    auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    return {ratio(true_rejections, n_false_nulls), ratio(assoc_hit, assoc),
            ratio(singleton_hit, singleton)};
}

MetricsReport evaluate(const DecisionSet& decisions, const TruthMask& truth,
                       const ProximityRule& rule) {
    check_dimensions(decisions, truth);
    rule.validate();
    if (rule.enabled) {
        if (!truth.has_positions()) {
            throw ValidationError("proximity rule enabled but the truth mask has no positions");
        }
        if (!truth.has_genotype_corr()) {
            throw ValidationError(
                "proximity rule enabled but the truth mask has no genotype correlations");
        }
    }

    const std::size_t M = truth.n_variants();
    CausalIndex causal(truth, rule);

    MetricsReport rep;
    rep.R_i.assign(M, 0);
    rep.F_i.assign(M, 0);
    rep.R = decisions.rejected.size();
    for (const auto& [v, t] : decisions.rejected) {
        ++rep.R_i[v];
        if (!causal.effective(v, t)) {
            ++rep.F;
            ++rep.F_i[v];
        }
    }

    rep.Rv = decisions.selected_families.size();
    for (VariantIndex v : decisions.selected_families) {
        if (!causal.family_effective(v)) ++rep.Fv;
    }

    auto fdp = [](std::size_t f, std::size_t r) {
        return static_cast<double>(f) / static_cast<double>(std::max<std::size_t>(r, 1));
    };
    rep.gFDP = fdp(rep.F, rep.R);
    rep.vFDP = fdp(rep.Fv, rep.Rv);

    double a_sum = 0.0;
    for (std::size_t v = 0; v < M; ++v) a_sum += fdp(rep.F_i[v], rep.R_i[v]);
    rep.aFDP = a_sum / static_cast<double>(M);

    if (!decisions.selected_families.empty()) {
        double s_sum = 0.0, s_ind = 0.0;
        for (VariantIndex v : decisions.selected_families) {
            s_sum += fdp(rep.F_i[v], rep.R_i[v]);
            s_ind += rep.F_i[v] > 0 ? 1.0 : 0.0;
        }
        const double ns = static_cast<double>(decisions.selected_families.size());
        rep.sFDP = s_sum / ns;
        rep.sFWE_avg = s_ind / ns;
    }

    rep.gFWE = rep.F > 0 ? 1.0 : 0.0;
    rep.vFWE = rep.Fv > 0 ? 1.0 : 0.0;

    const auto powers = power_components(decisions, truth);
    rep.gPower = powers[0];
    rep.vPower = powers[1];
    rep.singletonPower = powers[2];
    return rep;
}

double metric_value(const MetricsReport& r, std::size_t metric_index) {
    switch (metric_index) {
        case 0: return r.gFDP;
        case 1: return r.aFDP;
        case 2: return r.sFDP;
        case 3: return r.vFDP;
        case 4: return r.gFWE;
        case 5: return r.vFWE;
        case 6: return r.sFWE_avg;
        case 7: return r.gPower;
        case 8: return r.vPower;
        case 9: return r.singletonPower;
    }
    throw std::out_of_range("metric index");
}

ReplicateAggregate aggregate(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw ValidationError("aggregate requires at least one report");
    ReplicateAggregate agg;
    agg.n = reports.size();
    const double n = static_cast<double>(reports.size());
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
        double sum = 0.0;
        for (const auto& r : reports) sum += metric_value(r, m);
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& r : reports) {
            const double d = metric_value(r, m) - mean;
            ss += d * d;
        }
        agg.mean[m] = mean;
        agg.se[m] = reports.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    }
    return agg;
}

} // namespace hfdr
