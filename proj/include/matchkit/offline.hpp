#ifndef MATCHKIT_OFFLINE_HPP
#define MATCHKIT_OFFLINE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "matchkit/core.hpp"

namespace matchkit {

// Deterministic RNG wrapper. mt19937_64's output sequence is specified by the
// standard, and the derived draws below avoid std::*_distribution (whose
// mappings vary across standard libraries), so streams are identical on every
// platform for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return (eng_() >> 11) * 0x1.0p-53; } // [0,1)

    // Uniform integer in [0, bound) via rejection sampling (unbiased).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return r % bound;
    }

    // Uniform sample of k distinct elements from items (partial Fisher-Yates,
    // preserves determinism; result order is the shuffle order).
    template <typename T>
    std::vector<T> sample(std::vector<T> items, size_t k) {
        if (k > items.size()) k = items.size();
        for (size_t i = 0; i < k; ++i) {
            size_t j = i + static_cast<size_t>(below(items.size() - i));
            std::swap(items[i], items[j]);
        }
        items.resize(k);
        return items;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[static_cast<size_t>(below(i))]);
    }

private:
    std::mt19937_64 eng_;
};

struct MatchingResult {
    double value = 0.0;
    std::vector<int> offline_match; // online index per offline vertex, -1 free
    std::vector<int> online_match;  // offline vertex per online index, -1 free
};

// Maximum-weight bipartite matching where value is the total weight of
// matched offline vertices (vertex-weighted; the matchable offline sets form
// a transversal matroid, so descending-weight greedy with augmenting paths is
// exact). `available[u] == 0` excludes offline vertex u.
MatchingResult max_weight_matching(const std::vector<std::vector<OfflineId>>& online_adj,
                                   const std::vector<double>& weights,
                                   const std::vector<char>& available);

MatchingResult opt_matching(const GraphInstance& g);

struct NoiseModel {
    double gamma = 0.0;
    std::uint64_t seed = 0;
};

// Per online vertex: keep round((1-gamma)*deg) true neighbors and gain
// round(gamma*codeg) non-neighbors, both uniform without replacement.
GraphInstance perturb_graph(const GraphInstance& g, const NoiseModel& noise);

// Produces a copy of g whose arrivals carry integral advice generated from
// the noisy prediction: at each step t a maximum-weight matching of the
// hybrid graph (true edges of arrival t, predicted edges of t+1..n, offline
// vertices already promised by earlier advice removed) decides t's edge.
GraphInstance generate_advice(const GraphInstance& g, const NoiseModel& noise);

GraphInstance gen_er(int n, double p, std::uint64_t seed);
GraphInstance gen_ut(int n);
GraphInstance gen_weights(GraphInstance g, std::uint64_t seed); // U[0,1000]

// Undirected edge list -> bipartite instance: shuffle node ids under seed,
// first half offline, second half online (in permuted order), crossing edges
// only. Indices 0- or 1-based, auto-detected.
GraphInstance ingest_real(const std::string& edge_list_text, std::uint64_t seed);

} // namespace matchkit

#endif
