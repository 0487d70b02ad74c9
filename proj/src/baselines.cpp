#include "matchkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "matchkit/lab.hpp"
#include "matchkit/paw.hpp"

namespace matchkit {

namespace {

// Shared unweighted waterfill: raise the lowest levels among nbrs to a
// common line using `budget` mass; returns per-neighbor pushes.
std::vector<double> unweighted_waterfill(const std::vector<OfflineId>& nbrs,
                                         const std::vector<double>& levels,
                                         double budget) {
    const size_t k = nbrs.size();
    std::vector<double> x(k, 0.0);
    if (k == 0 || budget <= 0.0) return x;
    std::vector<double> sorted;
    sorted.reserve(k);
    for (OfflineId u : nbrs) sorted.push_back(levels[u]);
    std::sort(sorted.begin(), sorted.end());
    double cap = 0.0;
    for (double v : sorted) cap += 1.0 - v;
    double line;
    if (cap <= budget) {
        line = 1.0;
    } else {
        line = 1.0;
        double prefix = 0.0;
        for (size_t j = 0; j < k; ++j) {
            prefix += sorted[j];
            double hi = j + 1 < k ? sorted[j + 1] : 1.0;
            double filled_at_hi = (j + 1) * hi - prefix;
            if (filled_at_hi >= budget) {
                line = (budget + prefix) / static_cast<double>(j + 1);
                break;
            }
        }
    }
    for (size_t i = 0; i < k; ++i)
        x[i] = std::max(0.0, line - levels[nbrs[i]]);
    return x;
}

} // namespace

BalancePolicy::BalancePolicy(std::vector<double> weights)
    : w(std::move(weights)), X(w.size(), 0.0) {}

std::vector<double> BalancePolicy::step(
    const std::vector<OfflineId>& nbrs,
    const std::vector<std::pair<OfflineId, double>>& /*advice*/) {
    const size_t k = nbrs.size();
    std::vector<double> x(k, 0.0);
    if (k == 0) return x;

    // Smallest z with w*(1 - e^{X+z-1}) <= level.
    auto need = [&](size_t i, double level) {
        OfflineId u = nbrs[i];
        if (w[u] <= 0.0) return 0.0;
        double y = 1.0 - level / w[u];
        if (std::exp(X[u] - 1.0) >= y) return 0.0;
        double Xstar = std::clamp(1.0 + std::log(y), X[u], 1.0);
        return Xstar - X[u];
    };
    auto total_need = [&](double level) {
        double s = 0.0;
        for (size_t i = 0; i < k; ++i) s += need(i, level);
        return s;
    };

    double max_phi = 0.0;
    for (OfflineId u : nbrs)
        max_phi = std::max(max_phi, w[u] * (1.0 - std::exp(X[u] - 1.0)));

    double lstar = 0.0;
    if (total_need(0.0) > 1.0) {
        double lo = 0.0, hi = max_phi;
        for (int it = 0; it < 100 && hi - lo > 1e-16 * std::max(1.0, max_phi);
             ++it) {
            double mid = 0.5 * (lo + hi);
            (total_need(mid) <= 1.0 ? hi : lo) = mid;
        }
        lstar = hi;
    }
    for (size_t i = 0; i < k; ++i) {
        x[i] = need(i, lstar);
        X[nbrs[i]] = std::min(X[nbrs[i]] + x[i], 1.0);
    }
    return x;
}

GreedyPolicy::GreedyPolicy(std::vector<double> weights)
    : w(std::move(weights)), X(w.size(), 0.0) {}

std::vector<double> GreedyPolicy::step(
    const std::vector<OfflineId>& nbrs,
    const std::vector<std::pair<OfflineId, double>>& /*advice*/) {
    std::vector<size_t> order(nbrs.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return w[nbrs[a]] > w[nbrs[b]];
    });
    std::vector<double> x(nbrs.size(), 0.0);
    double budget = 1.0;
    for (size_t i : order) {
        if (budget <= 0.0) break;
        OfflineId u = nbrs[i];
        double take = std::min(budget, 1.0 - X[u]);
        if (take <= 0.0) continue;
        x[i] = take;
        X[u] += take;
        budget -= take;
    }
    return x;
}

FollowAdvicePolicy::FollowAdvicePolicy(int /*n_offline*/) {}

std::vector<double> FollowAdvicePolicy::step(
    const std::vector<OfflineId>& nbrs,
    const std::vector<std::pair<OfflineId, double>>& advice) {
    std::vector<double> x(nbrs.size(), 0.0);
    for (const auto& [u, val] : advice) {
        auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u);
        if (it != nbrs.end() && *it == u) x[it - nbrs.begin()] += val;
    }
    return x;
}

CoinflipPolicy::CoinflipPolicy(std::vector<double> weights, double m)
    : mix(m), balance(std::move(weights)) {
    if (mix < 0.0 || mix > 1.0) throw RunError("coinflip: mix outside [0,1]");
}

std::vector<double> CoinflipPolicy::step(
    const std::vector<OfflineId>& nbrs,
    const std::vector<std::pair<OfflineId, double>>& advice) {
    std::vector<double> x = balance.step(nbrs, advice);
    for (double& v : x) v *= 1.0 - mix;
    for (const auto& [u, val] : advice) {
        auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u);
        if (it != nbrs.end() && *it == u) x[it - nbrs.begin()] += mix * val;
    }
    return x;
}

AdviceFillPolicy::AdviceFillPolicy(int n_offline)
    : X(static_cast<size_t>(n_offline), 0.0) {}

std::vector<double> AdviceFillPolicy::step(
    const std::vector<OfflineId>& nbrs,
    const std::vector<std::pair<OfflineId, double>>& advice) {
    std::vector<double> x(nbrs.size(), 0.0);
    double pushed = 0.0;
    for (const auto& [u, val] : advice) {
        auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u);
        if (it == nbrs.end() || *it != u) continue;
        double take = std::min(val, 1.0 - X[u]);
        x[it - nbrs.begin()] += take;
        X[u] += take;
        pushed += take;
    }
    std::vector<double> fill = unweighted_waterfill(nbrs, X, 1.0 - pushed);
    for (size_t i = 0; i < nbrs.size(); ++i) {
        x[i] += fill[i];
        X[nbrs[i]] = std::min(X[nbrs[i]] + fill[i], 1.0);
    }
    return x;
}

RunResult balance_run(const GraphInstance& g, double /*unused_lambda*/) {
    BalancePolicy pol(g.weights);
    return run_policy(g, pol);
}

RunResult greedy_run(const GraphInstance& g) {
    GreedyPolicy pol(g.weights);
    return run_policy(g, pol);
}

RunResult follow_advice_run(const GraphInstance& g) {
    FollowAdvicePolicy pol(g.n_offline);
    return run_policy(g, pol);
}

RunResult coinflip_run(const GraphInstance& g, double mix) {
    CoinflipPolicy pol(g.weights, mix);
    return run_policy(g, pol);
}

RunResult advice_waterfill_run(const GraphInstance& g) {
    AdviceFillPolicy pol(g.n_offline);
    return run_policy(g, pol);
}

RunResult run_policy(const GraphInstance& g, OnlinePolicy& policy) {
    RunResult res;
    res.allocation = Allocation::zeros(g);
    for (size_t t = 0; t < g.arrivals.size(); ++t) {
        const ArrivalEvent& ev = g.arrivals[t];
        std::vector<double> x = policy.step(ev.neighborhood, ev.advice);
        if (x.size() != ev.neighborhood.size())
            throw RunError("policy returned misaligned allocation");
        res.allocation.x[t] = x;
        for (size_t i = 0; i < x.size(); ++i)
            res.allocation.levels[ev.neighborhood[i]] += x[i];
    }
    res.value = 0.0;
    for (int u = 0; u < g.n_offline; ++u)
        res.value += g.weights[u] * res.allocation.levels[u];
    return res;
}

std::unique_ptr<OnlinePolicy> make_policy(const std::string& alg,
                                          const std::vector<double>& weights,
                                          double lambda, double mix) {
    if (alg == "lab") return std::make_unique<LabPolicy>(weights, lambda);
    if (alg == "paw")
        return std::make_unique<PawPolicy>(static_cast<int>(weights.size()),
                                           lambda);
    if (alg == "balance") return std::make_unique<BalancePolicy>(weights);
    if (alg == "greedy") return std::make_unique<GreedyPolicy>(weights);
    if (alg == "advice")
        return std::make_unique<FollowAdvicePolicy>(
            static_cast<int>(weights.size()));
    if (alg == "coinflip")
        return std::make_unique<CoinflipPolicy>(weights, mix);
    if (alg == "advicefill")
        return std::make_unique<AdviceFillPolicy>(
            static_cast<int>(weights.size()));
    throw RunError("unknown algorithm: " + alg);
}

} // namespace matchkit
