#ifndef MATCHKIT_BASELINES_HPP
#define MATCHKIT_BASELINES_HPP

#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/policy.hpp"

namespace matchkit {

// Classical vertex-weighted Balance (waterfilling with penalty e^{X-1}).
class BalancePolicy : public OnlinePolicy {
public:
    explicit BalancePolicy(std::vector<double> weights);
    std::vector<double> step(
        const std::vector<OfflineId>& nbrs,
        const std::vector<std::pair<OfflineId, double>>& advice) override;

    std::vector<double> w, X;
};

// Fills neighbors in order of decreasing weight (ties: lower index).
class GreedyPolicy : public OnlinePolicy {
public:
    explicit GreedyPolicy(std::vector<double> weights);
    std::vector<double> step(
        const std::vector<OfflineId>& nbrs,
        const std::vector<std::pair<OfflineId, double>>& advice) override;

    std::vector<double> w, X;
};

// Outputs exactly the advice.
class FollowAdvicePolicy : public OnlinePolicy {
public:
    explicit FollowAdvicePolicy(int n_offline);
    std::vector<double> step(
        const std::vector<OfflineId>& nbrs,
        const std::vector<std::pair<OfflineId, double>>& advice) override;
};

// Deterministic convex combination mix*advice + (1-mix)*Balance.
class CoinflipPolicy : public OnlinePolicy {
public:
    CoinflipPolicy(std::vector<double> weights, double mix);
    std::vector<double> step(
        const std::vector<OfflineId>& nbrs,
        const std::vector<std::pair<OfflineId, double>>& advice) override;

    double mix;
    BalancePolicy balance;
};

// Unweighted variant: push the advice, then waterfill the remainder
// (realizes the (1/2, 1) endpoint).
class AdviceFillPolicy : public OnlinePolicy {
public:
    explicit AdviceFillPolicy(int n_offline);
    std::vector<double> step(
        const std::vector<OfflineId>& nbrs,
        const std::vector<std::pair<OfflineId, double>>& advice) override;

    std::vector<double> X;
};

RunResult balance_run(const GraphInstance& g, double unused_lambda = 0.0);
RunResult greedy_run(const GraphInstance& g);
RunResult follow_advice_run(const GraphInstance& g);
RunResult coinflip_run(const GraphInstance& g, double mix);
RunResult advice_waterfill_run(const GraphInstance& g);

} // namespace matchkit

#endif
