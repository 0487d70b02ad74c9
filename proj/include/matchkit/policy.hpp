#ifndef MATCHKIT_POLICY_HPP
#define MATCHKIT_POLICY_HPP

#include <memory>
#include <string>
#include <vector>

#include "matchkit/core.hpp"

namespace matchkit {

// Step interface shared by all online algorithms; the adversaries and the
// run harness interact with algorithms only through this.
class OnlinePolicy {
public:
    virtual ~OnlinePolicy() = default;
    // Returns the allocation aligned with `nbrs` (sorted offline ids).
    virtual std::vector<double> step(
        const std::vector<OfflineId>& nbrs,
        const std::vector<std::pair<OfflineId, double>>& advice) = 0;
};

// Feeds every arrival of g to the policy and collects the allocation.
RunResult run_policy(const GraphInstance& g, OnlinePolicy& policy);

// Factory for CLI / adversary use. alg one of: lab, paw, balance, greedy,
// advice, coinflip, advicefill. mix only used by coinflip.
std::unique_ptr<OnlinePolicy> make_policy(const std::string& alg,
                                          const std::vector<double>& weights,
                                          double lambda, double mix = 0.5);

} // namespace matchkit

#endif
