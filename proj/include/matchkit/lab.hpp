#ifndef MATCHKIT_LAB_HPP
#define MATCHKIT_LAB_HPP

#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/numerics.hpp"
#include "matchkit/policy.hpp"

namespace matchkit {

// LearningAugmentedBalance: vertex-weighted fractional matching with
// fractional advice, maintaining the dual certificate online.
class LabPolicy : public OnlinePolicy {
public:
    LabPolicy(std::vector<double> weights, double lambda,
              bool strict_snapshots = false);

    std::vector<double> step(
        const std::vector<OfflineId>& nbrs,
        const std::vector<std::pair<OfflineId, double>>& advice) override;

    PenaltyParams params;
    std::vector<double> w, X, A, alpha;
    std::vector<double> beta; // one entry per arrival seen
    bool strict_snapshots = false;
    std::vector<std::vector<double>> alpha_snap; // per arrival, aligned w/ nbrs

    double alg_value() const; // sum w_u X_u
};

RunResult lab_run(const GraphInstance& g, double lambda,
                  bool strict_snapshots = false);

struct LabCertReport {
    double alg_value = 0.0;
    double dual_total = 0.0;
    double equality_gap_rel = 0.0;     // (a)
    double min_edge_ratio = 1e300;     // (b) min (alpha_u + beta_v)/w_u
    double min_consistency_ratio = 1e300; // (c)
    bool has_advice = false;
    bool pass_gap = false, pass_robust = false, pass_consistent = false;
    bool pass() const { return pass_gap && pass_robust && pass_consistent; }
};

LabCertReport lab_certify(const RunResult& result, const GraphInstance& g,
                          double lambda);

} // namespace matchkit

#endif
