#ifndef MATCHKIT_ADVERSARY_HPP
#define MATCHKIT_ADVERSARY_HPP

#include <functional>
#include <string>
#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/policy.hpp"

namespace matchkit {

struct AdversaryTranscript {
    GraphInstance instance; // realized hindsight instance (2n x 2n)
    std::vector<double> final_levels;
    double alg_value = 0.0;
    double opt = 0.0;   // always 2n
    double ratio = 0.0; // alg_value / 2n
    bool feasible = true;
    std::string violation;
};

// Adaptive adversaries; the algorithm is driven only through the step
// interface. Unweighted setting (all offline weights 1).
AdversaryTranscript run_adversary_R(OnlinePolicy& alg, int n);
AdversaryTranscript run_adversary_C(OnlinePolicy& alg, int n);

struct TradeoffPoint {
    double lambda = 0.0;
    double r_hat = 0.0;
    double c_hat = 0.0;
};

// Runs both adversaries for each lambda; alg_factory builds a fresh policy
// per run. Parallel across lambda (MATCHKIT_WORKERS / OpenMP).
std::vector<TradeoffPoint> empirical_tradeoff(
    const std::function<std::unique_ptr<OnlinePolicy>(double)>& alg_factory,
    int n, const std::vector<double>& lambda_grid);

} // namespace matchkit

#endif
