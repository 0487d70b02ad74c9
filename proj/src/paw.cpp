#include "matchkit/paw.hpp"

#include <algorithm>
#include <cmath>

namespace matchkit {

PawPolicy::PawPolicy(int n_offline, double lambda)
    : params(lambda),
      d(static_cast<size_t>(n_offline), 0.0),
      alpha_r(d.size(), 0.0),
      alpha_c(d.size(), 0.0) {}

void PawPolicy::slab(OfflineId u, double a, double b, double& brv, double& bcv) {
    if (b <= a) return;
    double gr = g_r_integral(b, params) - g_r_integral(a, params);
    double gc = g_c_integral(b, params) - g_c_integral(a, params);
    alpha_r[u] += gr;
    alpha_c[u] += gc;
    brv += (b - a) - gr;
    bcv += (b - a) - gc;
}

std::vector<double> PawPolicy::step(
    const std::vector<OfflineId>& nbrs,
    const std::vector<std::pair<OfflineId, double>>& advice) {
    if (advice.size() > 1 ||
        (advice.size() == 1 && std::abs(advice[0].second - 1.0) > 1e-12))
        throw RunError("paw: advice must be integral (one vertex, value 1)");

    const size_t k = nbrs.size();
    std::vector<double> x(k, 0.0);
    double brv = 0.0, bcv = 0.0;

    // Phase 1: push the advised edge until its level reaches lambda.
    double tau = 0.0;
    if (advice.size() == 1) {
        OfflineId au = advice[0].first;
        auto it = std::lower_bound(nbrs.begin(), nbrs.end(), au);
        if (it != nbrs.end() && *it == au) {
            tau = std::max(0.0, params.lambda - d[au]);
            if (tau > 0.0) {
                slab(au, d[au], d[au] + tau, brv, bcv);
                d[au] += tau;
                x[it - nbrs.begin()] += tau;
            }
        }
    }

    // Phase 2: waterfill the remaining 1 - tau over N(v); the level equation
    // is piecewise linear, solved exactly by sorting + prefix sums.
    double budget = 1.0 - tau;
    if (k > 0 && budget > 0.0) {
        std::vector<double> sorted;
        sorted.reserve(k);
        for (OfflineId u : nbrs) sorted.push_back(d[u]);
        std::sort(sorted.begin(), sorted.end());
        double cap = 0.0;
        for (double v : sorted) cap += 1.0 - v;
        double line = 1.0;
        if (cap > budget) {
            double prefix = 0.0;
            for (size_t j = 0; j < k; ++j) {
                prefix += sorted[j];
                double hi = j + 1 < k ? sorted[j + 1] : 1.0;
                if ((j + 1) * hi - prefix >= budget) {
                    line = (budget + prefix) / static_cast<double>(j + 1);
                    break;
                }
            }
        }
        for (size_t i = 0; i < k; ++i) {
            OfflineId u = nbrs[i];
            if (d[u] < line) {
                double delta = line - d[u];
                slab(u, d[u], line, brv, bcv);
                d[u] = line;
                x[i] += delta;
            }
        }
    }
    beta_r.push_back(brv);
    beta_c.push_back(bcv);
    return x;
}

double PawPolicy::alg_value() const {
    double s = 0.0;
    for (double v : d) s += v;
    return s;
}

RunResult paw_run(const GraphInstance& g, double lambda) {
    if (g.weighted)
        throw RunError("paw: requires an unweighted instance");
    if (!g.advice_integral())
        throw RunError("paw: requires integral advice");
    PawPolicy pol(g.n_offline, lambda);
    RunResult res = run_policy(g, pol);
    DualCertificate cr, cc;
    cr.mode = DualCertificate::Mode::PAW_ROBUST;
    cr.alpha = pol.alpha_r;
    cr.beta = pol.beta_r;
    cc.mode = DualCertificate::Mode::PAW_CONSISTENT;
    cc.alpha = pol.alpha_c;
    cc.beta = pol.beta_c;
    res.certificate = std::move(cr);
    res.certificate2 = std::move(cc);
    return res;
}

PawCertReport paw_certify(const RunResult& result, const GraphInstance& g,
                          double lambda) {
    if (!result.certificate || !result.certificate2)
        throw RunError("paw_certify: missing certificates");
    const DualCertificate& cr = *result.certificate;
    const DualCertificate& cc = *result.certificate2;
    PawCertReport rep;
    rep.alg_value = result.value;
    rep.gap_r_rel = std::abs(result.value - cr.total()) /
                    std::max(1.0, result.value);
    rep.gap_c_rel = std::abs(result.value - cc.total()) /
                    std::max(1.0, result.value);
    for (size_t t = 0; t < g.arrivals.size(); ++t) {
        for (OfflineId u : g.arrivals[t].neighborhood)
            rep.min_edge_robust =
                std::min(rep.min_edge_robust, cr.alpha[u] + cr.beta[t]);
        for (const auto& [u, val] : g.arrivals[t].advice) {
            if (val <= 0.0) continue;
            rep.has_advice = true;
            rep.min_advised_consistent =
                std::min(rep.min_advised_consistent, cc.alpha[u] + cc.beta[t]);
        }
    }
    rep.pass_gap = rep.gap_r_rel <= 1e-8 && rep.gap_c_rel <= 1e-8;
    rep.pass_robust = rep.min_edge_robust >= r_paw(lambda) - 1e-6;
    rep.pass_consistent =
        !rep.has_advice || rep.min_advised_consistent >= c_paw(lambda) - 1e-6;
    return rep;
}

} // namespace matchkit
