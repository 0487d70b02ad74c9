#include "matchkit/lab.hpp"

#include <algorithm>
#include <cmath>

namespace matchkit {

LabPolicy::LabPolicy(std::vector<double> weights, double lambda, bool strict)
    : params(lambda),
      w(std::move(weights)),
      X(w.size(), 0.0),
      A(w.size(), 0.0),
      alpha(w.size(), 0.0),
      strict_snapshots(strict) {}

std::vector<double> LabPolicy::step(
    const std::vector<OfflineId>& nbrs,
    const std::vector<std::pair<OfflineId, double>>& advice) {
    // Advice accumulates before allocation (A_u is "up to and including v").
    for (const auto& [u, val] : advice) {
        A[u] += val;
        if (A[u] > 1.0 + kTol)
            throw RunError("lab: cumulative advice on offline vertex " +
                           std::to_string(u) + " exceeds 1");
        A[u] = std::min(A[u], 1.0);
    }

    const size_t k = nbrs.size();
    std::vector<double> x(k, 0.0);
    if (k == 0) {
        beta.push_back(0.0);
        if (strict_snapshots) alpha_snap.emplace_back();
        return x;
    }

    // Potentials are fixed during the level search, so f(A,X) (the only
    // Lambert-W evaluation) is computed once per neighbor, not per probe.
    std::vector<double> phi(k, 0.0);
    double max_phi = 0.0;
    for (size_t i = 0; i < k; ++i) {
        OfflineId u = nbrs[i];
        phi[i] = w[u] * (1.0 - f(A[u], X[u], params));
        max_phi = std::max(max_phi, phi[i]);
    }

    auto need = [&](size_t i, double level) {
        if (level >= phi[i]) return 0.0;
        OfflineId u = nbrs[i];
        if (w[u] <= 0.0) return 0.0;
        double y = 1.0 - level / w[u];
        if (y > 1.0) return 1.0 - X[u];
        double Xstar = std::min(f1_inv(y, params), A[u] + f0_inv(y, params));
        Xstar = std::clamp(Xstar, X[u], 1.0);
        return Xstar - X[u];
    };
    auto total_need = [&](double level) {
        double s = 0.0;
        for (size_t i = 0; i < k; ++i) s += need(i, level);
        return s;
    };

    // Smallest water level with total demand <= 1 (outer bisection).
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

    double pushed = 0.0;
    for (size_t i = 0; i < k; ++i) {
        x[i] = need(i, lstar);
        pushed += x[i];
    }

    // Dual split: each receiving vertex is credited its value minus the
    // final water level, and the arrival keeps the level itself (when
    // saturated). This is the end-of-iteration construction, except that a
    // vertex pinned at X = A (where f jumps and its residual potential falls
    // below the water line) is charged the water level rather than its own
    // residual -- its mass was poured at levels above the line, so the alpha
    // credit still dominates the integral of f over the slab, and the split
    // keeps ALG = sum(alpha) + sum(beta) an exact identity.
    std::vector<double> snap;
    if (strict_snapshots) snap.resize(k);
    double beta_v = pushed >= 1.0 - 1e-9 ? lstar : 0.0;
    for (size_t i = 0; i < k; ++i) {
        OfflineId u = nbrs[i];
        X[u] = std::min(X[u] + x[i], 1.0);
        alpha[u] += x[i] * (w[u] - beta_v);
    }
    beta.push_back(beta_v);
    if (strict_snapshots) {
        for (size_t i = 0; i < k; ++i) snap[i] = alpha[nbrs[i]];
        alpha_snap.push_back(std::move(snap));
    }
    return x;
}

double LabPolicy::alg_value() const {
    double s = 0.0;
    for (size_t u = 0; u < w.size(); ++u) s += w[u] * X[u];
    return s;
}

RunResult lab_run(const GraphInstance& g, double lambda, bool strict_snapshots) {
    LabPolicy pol(g.weights, lambda, strict_snapshots);
    RunResult res = run_policy(g, pol);
    DualCertificate cert;
    cert.mode = DualCertificate::Mode::LAB;
    cert.alpha = pol.alpha;
    cert.beta = pol.beta;
    if (strict_snapshots) cert.alpha_at_arrival = pol.alpha_snap;
    res.certificate = std::move(cert);
    return res;
}

LabCertReport lab_certify(const RunResult& result, const GraphInstance& g,
                          double lambda) {
    if (!result.certificate)
        throw RunError("lab_certify: missing certificate");
    const DualCertificate& cert = *result.certificate;
    LabCertReport rep;
    rep.alg_value = result.value;
    rep.dual_total = cert.total();
    rep.equality_gap_rel =
        std::abs(rep.alg_value - rep.dual_total) / std::max(1.0, rep.alg_value);

    const bool strict = !cert.alpha_at_arrival.empty();
    for (size_t t = 0; t < g.arrivals.size(); ++t) {
        const auto& nbrs = g.arrivals[t].neighborhood;
        for (size_t i = 0; i < nbrs.size(); ++i) {
            OfflineId u = nbrs[i];
            if (g.weights[u] <= 0.0) continue; // r * w_u = 0, trivially feasible
            double au = strict ? cert.alpha_at_arrival[t][i] : cert.alpha[u];
            rep.min_edge_ratio =
                std::min(rep.min_edge_ratio, (au + cert.beta[t]) / g.weights[u]);
        }
    }

    std::vector<double> adv_beta(g.n_offline, 0.0), adv_sum(g.n_offline, 0.0);
    for (size_t t = 0; t < g.arrivals.size(); ++t)
        for (const auto& [u, val] : g.arrivals[t].advice) {
            adv_beta[u] += val * cert.beta[t];
            adv_sum[u] += val;
        }
    for (int u = 0; u < g.n_offline; ++u) {
        if (adv_sum[u] <= 0.0 || g.weights[u] <= 0.0) continue;
        rep.has_advice = true;
        rep.min_consistency_ratio =
            std::min(rep.min_consistency_ratio,
                     (cert.alpha[u] + adv_beta[u]) /
                         (g.weights[u] * std::min(adv_sum[u], 1.0)));
    }

    rep.pass_gap = rep.equality_gap_rel <= 1e-8;
    rep.pass_robust = rep.min_edge_ratio >= r_lab(lambda) - 1e-6;
    rep.pass_consistent =
        !rep.has_advice || rep.min_consistency_ratio >= c_lab(lambda) - 1e-6;
    return rep;
}

} // namespace matchkit
