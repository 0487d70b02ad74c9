#include "matchkit/adversary.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace matchkit {

namespace {

struct AdversaryDriver {
    int n;
    std::vector<OfflineId> pos; // logical position (0-based) -> actual id
    std::vector<double> lev;    // per actual id
    GraphInstance inst;
    double alg_value = 0.0;
    bool feasible = true;
    std::string violation;

    explicit AdversaryDriver(int n_) : n(n_), pos(2 * n_), lev(2 * n_, 0.0) {
        std::iota(pos.begin(), pos.end(), 0);
        inst.n_offline = 2 * n;
        inst.weighted = false;
        inst.weights.assign(2 * n, 1.0);
    }

    // Feeds one arrival (logical positions [lo, hi], inclusive, 0-based)
    // with advice at logical position `adv_pos` (-1 for no advice).
    void feed(OnlinePolicy& alg, int lo, int hi, int adv_pos) {
        ArrivalEvent ev;
        for (int i = lo; i <= hi; ++i) ev.neighborhood.push_back(pos[i]);
        std::sort(ev.neighborhood.begin(), ev.neighborhood.end());
        if (adv_pos >= 0) ev.advice.emplace_back(pos[adv_pos], 1.0);
        std::vector<double> x = alg.step(ev.neighborhood, ev.advice);
        if (x.size() != ev.neighborhood.size()) {
            feasible = false;
            violation = "misaligned allocation";
        } else {
            double s = 0.0;
            for (size_t i = 0; i < x.size(); ++i) {
                OfflineId u = ev.neighborhood[i];
                if (x[i] < -kTol) {
                    feasible = false;
                    violation = "negative allocation";
                }
                lev[u] += x[i];
                if (lev[u] > 1.0 + kTol) {
                    feasible = false;
                    violation = "offline level exceeds 1";
                }
                s += x[i];
                alg_value += x[i];
            }
            if (s > 1.0 + kTol) {
                feasible = false;
                violation = "online degree exceeds 1";
            }
        }
        inst.arrivals.push_back(std::move(ev));
    }

    // Stable reorder of logical positions [lo, hi] by level.
    void reorder(int lo, int hi, bool descending) {
        std::stable_sort(pos.begin() + lo, pos.begin() + hi + 1,
                         [&](OfflineId a, OfflineId b) {
                             return descending ? lev[a] > lev[b]
                                               : lev[a] < lev[b];
                         });
    }

    void assert_sorted(int lo, int hi, bool descending) const {
        for (int i = lo; i < hi; ++i) {
            bool ok = descending ? lev[pos[i]] >= lev[pos[i + 1]]
                                 : lev[pos[i]] <= lev[pos[i + 1]];
            if (!ok) throw std::logic_error("adversary ordering invariant broken");
        }
    }

    // Common phase shared by R and C (iterations t = 1..n, 1-based).
    void common_phase(OnlinePolicy& alg) {
        for (int t = 1; t <= n && feasible; ++t) {
            feed(alg, t - 1, 2 * n - t, t - 1); // N = {u_t..u_{2n-t+1}}, A = u_t
            reorder(t, 2 * n - t, /*descending=*/true); // positions t+1..2n-t+1
            assert_sorted(t, 2 * n - t, true);
        }
    }

    AdversaryTranscript finish() {
        AdversaryTranscript tr;
        tr.instance = std::move(inst);
        tr.final_levels = lev;
        tr.alg_value = alg_value;
        tr.opt = 2.0 * n;
        tr.ratio = alg_value / (2.0 * n);
        tr.feasible = feasible;
        tr.violation = violation;
        return tr;
    }
};

} // namespace

AdversaryTranscript run_adversary_R(OnlinePolicy& alg, int n) {
    if (n < 1) throw RunError("adversary: n must be >= 1");
    AdversaryDriver drv(n);
    drv.common_phase(alg);
    if (drv.feasible) {
        drv.reorder(0, n - 1, /*descending=*/false); // u_1..u_n ascending
        for (int t = n + 1; t <= 2 * n && drv.feasible; ++t) {
            drv.feed(alg, t - n - 1, n - 1, -1); // N = {u_{t-n}..u_n}, no advice
            drv.reorder(t - n - 1, n - 1, /*descending=*/false);
            drv.assert_sorted(t - n - 1, n - 1, false);
        }
    }
    return drv.finish();
}

AdversaryTranscript run_adversary_C(OnlinePolicy& alg, int n) {
    if (n < 1) throw RunError("adversary: n must be >= 1");
    AdversaryDriver drv(n);
    drv.common_phase(alg);
    for (int t = n + 1; t <= 2 * n && drv.feasible; ++t)
        drv.feed(alg, t - 1, t - 1, t - 1); // N = {u_t}, A = u_t
    return drv.finish();
}

int worker_limit() {
    int workers = 1;
#ifdef _OPENMP
    workers = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("MATCHKIT_WORKERS")) {
        int lim = std::atoi(env);
        if (lim >= 1) workers = lim;
    }
    return workers;
}

std::vector<TradeoffPoint> empirical_tradeoff(
    const std::function<std::unique_ptr<OnlinePolicy>(double)>& alg_factory,
    int n, const std::vector<double>& lambda_grid) {
    std::vector<TradeoffPoint> out(lambda_grid.size());
    const int workers = worker_limit();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (size_t i = 0; i < lambda_grid.size(); ++i) {
        double lam = lambda_grid[i];
        auto pr = alg_factory(lam);
        AdversaryTranscript tr = run_adversary_R(*pr, n);
        auto pc = alg_factory(lam);
        AdversaryTranscript tc = run_adversary_C(*pc, n);
        out[i] = {lam, tr.ratio, tc.ratio};
    }
    (void)workers;
    return out;
}

} // namespace matchkit
