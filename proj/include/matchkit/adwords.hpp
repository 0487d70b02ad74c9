#ifndef MATCHKIT_ADWORDS_HPP
#define MATCHKIT_ADWORDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/numerics.hpp"

namespace matchkit {

struct AdwordsArrival {
    std::vector<OfflineId> advertisers; // sorted ascending; bid > 0 each
    std::vector<double> bids;           // aligned with advertisers
    std::vector<std::pair<OfflineId, double>> advice; // fractional a_{u,v}

    double bid_of(OfflineId u) const; // 0 if u absent
};

struct AdwordsInstance {
    std::vector<double> budgets; // B_u > 0
    std::vector<AdwordsArrival> arrivals;

    int n_advertisers() const { return static_cast<int>(budgets.size()); }
    void validate() const;       // throws ParseError
    double epsilon_hat() const;  // max bid/budget (small-bids ratio)
    double advice_value() const; // sum of b_{u,v} a_{u,v}
};

AdwordsInstance parse_adwords(const std::string& text);
std::string serialize_adwords(const AdwordsInstance& inst);
AdwordsInstance load_adwords(const std::string& path);

struct AdwordsFracResult {
    double revenue = 0.0;
    // Impression mass x_{u,v} per arrival, aligned with arrival.advertisers.
    std::vector<std::vector<double>> x;
    std::vector<double> spend; // exact bid units, never exceeds B_u
    DualCertificate certificate; // mode ADWORDS
};

// Fractional AdWords with the LAB penalty on budget fractions: each
// impression is waterfilled by potential b_{u,v} (1 - f(A_u, X_u)).
AdwordsFracResult adwords_frac_run(const AdwordsInstance& inst, double lambda);

struct AdwordsCertReport {
    double revenue = 0.0;
    double dual_total = 0.0;
    double equality_gap_rel = 0.0;
    double min_edge_ratio = 1e300;        // min ((b/B) alpha_u + beta_v)/b
    double min_consistency_ratio = 1e300; // min alpha_u / (B_u A_u)
    bool has_advice = false;
    bool pass_gap = false, pass_robust = false, pass_consistent = false;
    bool pass() const { return pass_gap && pass_robust && pass_consistent; }
};

AdwordsCertReport adwords_certify(const AdwordsFracResult& result,
                                  const AdwordsInstance& inst, double lambda);

// Largest epsilon with gamma(eps) = 1 - eps - sqrt(eps ln(1/eps)) > 0.
double adwords_epsilon0();
double adwords_gamma(double epsilon); // throws RunError outside (0, eps0)

// Randomized rounding under small bids: sample advertiser u for each
// impression with probability gamma * x_{u,v}, assign iff budget remains.
// Deterministic per seed; returns realized integral revenue.
double adwords_round(const AdwordsInstance& inst,
                     const std::vector<std::vector<double>>& frac_trace,
                     double epsilon, std::uint64_t seed);

} // namespace matchkit

#endif
