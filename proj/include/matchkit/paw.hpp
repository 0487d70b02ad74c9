#ifndef MATCHKIT_PAW_HPP
#define MATCHKIT_PAW_HPP

#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/numerics.hpp"
#include "matchkit/policy.hpp"

namespace matchkit {

// PushAndWaterfill: unweighted matching with integral advice. Maintains two
// dual certificates side by side, one per splitting function (g_r / g_c).
class PawPolicy : public OnlinePolicy {
public:
    PawPolicy(int n_offline, double lambda);

    std::vector<double> step(
        const std::vector<OfflineId>& nbrs,
        const std::vector<std::pair<OfflineId, double>>& advice) override;

    PenaltyParams params;
    std::vector<double> d;               // per-offline level
    std::vector<double> alpha_r, alpha_c;
    std::vector<double> beta_r, beta_c;  // one entry per arrival

    double alg_value() const; // sum of levels

private:
    // Accounts the slab [a,b] pushed into u against both certificates.
    void slab(OfflineId u, double a, double b, double& brv, double& bcv);
};

RunResult paw_run(const GraphInstance& g, double lambda);

struct PawCertReport {
    double alg_value = 0.0;
    double gap_r_rel = 0.0, gap_c_rel = 0.0;
    double min_edge_robust = 1e300;   // (a) over all edges, g_r certificate
    double min_advised_consistent = 1e300; // (b) over advised edges, g_c
    bool has_advice = false;
    bool pass_gap = false, pass_robust = false, pass_consistent = false;
    bool pass() const { return pass_gap && pass_robust && pass_consistent; }
};

PawCertReport paw_certify(const RunResult& result, const GraphInstance& g,
                          double lambda);

} // namespace matchkit

#endif
