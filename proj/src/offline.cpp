#include "matchkit/offline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace matchkit {

namespace {

// Kuhn augmenting path from offline vertex u over offline->online adjacency.
bool augment(int u, const std::vector<std::vector<int>>& off_adj,
             std::vector<int>& offline_match, std::vector<int>& online_match,
             std::vector<char>& visited) {
    for (int v : off_adj[u]) {
        if (visited[v]) continue;
        visited[v] = 1;
        if (online_match[v] < 0 ||
            augment(online_match[v], off_adj, offline_match, online_match,
                    visited)) {
            offline_match[u] = v;
            online_match[v] = u;
            return true;
        }
    }
    return false;
}

} // namespace

MatchingResult max_weight_matching(
    const std::vector<std::vector<OfflineId>>& online_adj,
    const std::vector<double>& weights, const std::vector<char>& available) {
    const int n_off = static_cast<int>(weights.size());
    const int n_on = static_cast<int>(online_adj.size());
    std::vector<std::vector<int>> off_adj(n_off);
    for (int v = 0; v < n_on; ++v)
        for (OfflineId u : online_adj[v])
            if (available.empty() || available[u]) off_adj[u].push_back(v);

    // Transversal-matroid greedy: offer offline vertices in descending weight
    // (ties by lower index), augmenting when possible.
    std::vector<int> order;
    for (int u = 0; u < n_off; ++u)
        if ((available.empty() || available[u]) && !off_adj[u].empty())
            order.push_back(u);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return weights[a] > weights[b]; });

    MatchingResult res;
    res.offline_match.assign(n_off, -1);
    res.online_match.assign(n_on, -1);
    std::vector<char> visited(n_on, 0);
    for (int u : order) {
        if (weights[u] <= 0.0) continue;
        std::fill(visited.begin(), visited.end(), 0);
        if (augment(u, off_adj, res.offline_match, res.online_match, visited))
            res.value += weights[u];
    }
    return res;
}

MatchingResult opt_matching(const GraphInstance& g) {
    std::vector<std::vector<OfflineId>> adj;
    adj.reserve(g.arrivals.size());
    for (const ArrivalEvent& ev : g.arrivals) adj.push_back(ev.neighborhood);
    return max_weight_matching(adj, g.weights, {});
}

GraphInstance perturb_graph(const GraphInstance& g, const NoiseModel& noise) {
    if (noise.gamma < 0.0 || noise.gamma > 1.0)
        throw RunError("perturb_graph: gamma outside [0,1]");
    Rng rng(noise.seed);
    GraphInstance out = g;
    std::vector<char> is_nbr(g.n_offline, 0);
    std::vector<double> prio(g.n_offline, 0.0);
    for (size_t t = 0; t < g.arrivals.size(); ++t) {
        const std::vector<OfflineId>& nbrs = g.arrivals[t].neighborhood;
        for (OfflineId u : nbrs) is_nbr[u] = 1;
        // Per-(arrival, vertex) priorities do not depend on gamma, so for a
        // fixed seed the corrupted neighborhoods are nested across gamma:
        // raising gamma only drops more true neighbors (highest priority
        // first) and adds more spurious ones. Any single gamma still sees a
        // uniformly random subset of each size.
        for (OfflineId u = 0; u < g.n_offline; ++u) prio[u] = rng.uniform();
        std::vector<OfflineId> non_nbrs;
        for (OfflineId u = 0; u < g.n_offline; ++u)
            if (!is_nbr[u]) non_nbrs.push_back(u);
        size_t keep =
            static_cast<size_t>(std::llround((1.0 - noise.gamma) * nbrs.size()));
        size_t gain =
            static_cast<size_t>(std::llround(noise.gamma * non_nbrs.size()));
        auto lowest = [&](std::vector<OfflineId> pool, size_t k) {
            std::nth_element(pool.begin(), pool.begin() + k, pool.end(),
                             [&](OfflineId a, OfflineId b) {
                                 return prio[a] < prio[b];
                             });
            pool.resize(k);
            return pool;
        };
        std::vector<OfflineId> pred = lowest(nbrs, keep);
        std::vector<OfflineId> extra = lowest(std::move(non_nbrs), gain);
        pred.insert(pred.end(), extra.begin(), extra.end());
        std::sort(pred.begin(), pred.end());
        out.arrivals[t].neighborhood = std::move(pred);
        out.arrivals[t].advice.clear();
        for (OfflineId u : nbrs) is_nbr[u] = 0;
    }
    return out;
}

GraphInstance generate_advice(const GraphInstance& g, const NoiseModel& noise) {
    GraphInstance predicted = perturb_graph(g, noise);
    GraphInstance out = g;
    const int n_on = static_cast<int>(g.arrivals.size());
    std::vector<char> available(g.n_offline, 1);
    for (int t = 0; t < n_on; ++t) {
        out.arrivals[t].advice.clear();
        // Hybrid graph over arrivals t..n: the current arrival with its true
        // neighborhood, the future with predicted neighborhoods; offline
        // vertices promised to earlier arrivals are unavailable.
        std::vector<std::vector<OfflineId>> adj;
        adj.reserve(n_on - t);
        adj.push_back(g.arrivals[t].neighborhood);
        for (int s = t + 1; s < n_on; ++s)
            adj.push_back(predicted.arrivals[s].neighborhood);
        MatchingResult m = max_weight_matching(adj, g.weights, available);
        if (m.offline_match.empty()) continue;
        for (OfflineId u = 0; u < g.n_offline; ++u) {
            if (m.offline_match[u] == 0) { // matched to the current arrival
                out.arrivals[t].advice.emplace_back(u, 1.0);
                available[u] = 0;
                break;
            }
        }
    }
    out.validate();
    return out;
}

GraphInstance gen_er(int n, double p, std::uint64_t seed) {
    if (n < 1) throw RunError("gen_er: n must be >= 1");
    if (p < 0.0 || p > 1.0) throw RunError("gen_er: p outside [0,1]");
    Rng rng(seed);
    GraphInstance g;
    g.n_offline = n;
    g.weighted = false;
    g.weights.assign(n, 1.0);
    g.arrivals.resize(n);
    for (int v = 0; v < n; ++v)
        for (OfflineId u = 0; u < n; ++u)
            if (rng.uniform() < p) g.arrivals[v].neighborhood.push_back(u);
    return g;
}

GraphInstance gen_ut(int n) {
    if (n < 1) throw RunError("gen_ut: n must be >= 1");
    GraphInstance g;
    g.n_offline = n;
    g.weighted = false;
    g.weights.assign(n, 1.0);
    g.arrivals.resize(n);
    for (int v = 0; v < n; ++v) // arrival i adjacent to offline {i..n}, 1-based
        for (OfflineId u = v; u < n; ++u)
            g.arrivals[v].neighborhood.push_back(u);
    return g;
}

GraphInstance gen_weights(GraphInstance g, std::uint64_t seed) {
    Rng rng(seed);
    g.weighted = true;
    for (double& w : g.weights) w = 1000.0 * rng.uniform();
    return g;
}

GraphInstance ingest_real(const std::string& edge_list_text,
                          std::uint64_t seed) {
    std::vector<std::pair<long long, long long>> edges;
    long long max_id = -1;
    bool saw_zero = false;
    std::istringstream in(edge_list_text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        long long a, b;
        if (!(ls >> a)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ParseError("ingest: malformed edge on line " +
                                 std::to_string(line_no));
            continue; // blank / comment line
        }
        std::string extra;
        if (!(ls >> b) || a < 0 || b < 0)
            throw ParseError("ingest: malformed edge on line " +
                             std::to_string(line_no));
        if (ls >> extra)
            throw ParseError("ingest: trailing tokens on line " +
                             std::to_string(line_no));
        edges.emplace_back(a, b);
        max_id = std::max({max_id, a, b});
        if (a == 0 || b == 0) saw_zero = true;
    }
    if (edges.empty()) throw ParseError("ingest: no edges found");
    const long long base = saw_zero ? 0 : 1; // 0-/1-based auto-detection
    const long long n_nodes = max_id + 1 - base;
    if (n_nodes < 2) throw ParseError("ingest: need at least two nodes");

    std::vector<long long> perm(n_nodes);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);

    const long long n_off = n_nodes / 2;
    // role[x]: offline id in [0, n_off) or n_off + arrival index.
    std::vector<long long> role(n_nodes);
    for (long long i = 0; i < n_nodes; ++i) role[perm[i]] = i;

    GraphInstance g;
    g.n_offline = static_cast<int>(n_off);
    g.weighted = false;
    g.weights.assign(g.n_offline, 1.0);
    g.arrivals.resize(n_nodes - n_off);
    for (auto [a, b] : edges) {
        long long ra = role[a - base], rb = role[b - base];
        if (ra > rb) std::swap(ra, rb);
        if (ra < n_off && rb >= n_off) // crossing edge
            g.arrivals[rb - n_off].neighborhood.push_back(
                static_cast<OfflineId>(ra));
    }
    for (ArrivalEvent& ev : g.arrivals) {
        std::sort(ev.neighborhood.begin(), ev.neighborhood.end());
        ev.neighborhood.erase(
            std::unique(ev.neighborhood.begin(), ev.neighborhood.end()),
            ev.neighborhood.end());
    }
    return g;
}

} // namespace matchkit
