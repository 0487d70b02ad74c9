#include "matchkit/lp.hpp"

#include <algorithm>
#include <cmath>

namespace matchkit {

namespace {
constexpr double kPivTol = 1e-9;  // minimum pivot magnitude
constexpr double kCostTol = 1e-9; // reduced-cost optimality tolerance
constexpr double kFeasTol = 1e-7; // phase-1 feasibility tolerance
} // namespace

LpSolution solve_lp_dense(const LinearProgram& lp) {
    // Working copy with finite upper bounds materialized as rows.
    std::vector<LpRow> rows = lp.rows;
    for (int j = 0; j < lp.num_vars; ++j)
        if (lp.upper[j] < kLpInf)
            rows.push_back({{{j, 1.0}}, 'L', lp.upper[j], ""});

    const int m = static_cast<int>(rows.size());
    const int nv = lp.num_vars;

    // Column layout: structural | slack/surplus | artificial.
    int n_slack = 0, n_art = 0;
    for (const LpRow& r : rows) {
        char sense = r.sense;
        double rhs = r.rhs;
        if (rhs < 0.0) sense = (sense == 'L') ? 'G' : (sense == 'G') ? 'L' : 'E';
        if (sense != 'E') ++n_slack;
        if (sense != 'L') ++n_art;
    }
    const int total = nv + n_slack + n_art;
    const int art0 = nv + n_slack;

    std::vector<std::vector<double>> T(m, std::vector<double>(total, 0.0));
    std::vector<double> b(m, 0.0);
    std::vector<int> basis(m, -1);

    int slack_at = nv, art_at = art0;
    for (int i = 0; i < m; ++i) {
        double sign = rows[i].rhs < 0.0 ? -1.0 : 1.0;
        char sense = rows[i].sense;
        if (sign < 0.0)
            sense = (sense == 'L') ? 'G' : (sense == 'G') ? 'L' : 'E';
        for (const auto& [j, a] : rows[i].coeffs) T[i][j] += sign * a;
        b[i] = sign * rows[i].rhs;
        if (sense == 'L') {
            T[i][slack_at] = 1.0;
            basis[i] = slack_at++;
        } else if (sense == 'G') {
            T[i][slack_at++] = -1.0;
            T[i][art_at] = 1.0;
            basis[i] = art_at++;
        } else {
            T[i][art_at] = 1.0;
            basis[i] = art_at++;
        }
    }

    // Internally minimize. Phase 1: sum of artificials; phase 2: -objective.
    // Both reduced-cost rows are maintained through every pivot so the phase
    // switch is free.
    std::vector<double> r1(total, 0.0), r2(total, 0.0);
    double z1 = 0.0, z2 = 0.0;
    for (int j = art0; j < total; ++j) r1[j] = 1.0;
    for (int j = 0; j < nv; ++j) r2[j] = -lp.objective[j];
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= art0) { // cost 1 in phase-1 objective
            for (int j = 0; j < total; ++j) r1[j] -= T[i][j];
            z1 -= b[i];
        }
    }

    auto pivot = [&](int pr, int pc) {
        double pv = T[pr][pc];
        for (int j = 0; j < total; ++j) T[pr][j] /= pv;
        b[pr] /= pv;
        for (int i = 0; i < m; ++i) {
            if (i == pr || std::abs(T[i][pc]) < 1e-12) continue;
            double f = T[i][pc];
            for (int j = 0; j < total; ++j) T[i][j] -= f * T[pr][j];
            b[i] -= f * b[pr];
            if (b[i] < 0.0 && b[i] > -1e-11) b[i] = 0.0;
        }
        double f1 = r1[pc], f2 = r2[pc];
        if (std::abs(f1) > 0.0) {
            for (int j = 0; j < total; ++j) r1[j] -= f1 * T[pr][j];
            z1 -= f1 * b[pr];
        }
        if (std::abs(f2) > 0.0) {
            for (int j = 0; j < total; ++j) r2[j] -= f2 * T[pr][j];
            z2 -= f2 * b[pr];
        }
        basis[pr] = pc;
    };

    // allow_art: whether artificial columns may enter (phase 1 only).
    auto iterate = [&](std::vector<double>& red, bool allow_art,
                       long max_iter) -> LpStatus {
        const int limit = allow_art ? total : art0;
        long bland_after = 4L * (m + total);
        for (long it = 0; it < max_iter; ++it) {
            bool bland = it >= bland_after;
            int pc = -1;
            double best = -kCostTol;
            for (int j = 0; j < limit; ++j) {
                if (red[j] < best) {
                    pc = j;
                    if (bland) break;
                    best = red[j];
                }
            }
            if (pc < 0) return LpStatus::Optimal;
            int pr = -1;
            double best_ratio = 0.0;
            for (int i = 0; i < m; ++i) {
                if (T[i][pc] <= kPivTol) continue;
                double ratio = b[i] / T[i][pc];
                if (pr < 0 || ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && basis[i] < basis[pr]))
                    pr = i, best_ratio = ratio;
            }
            if (pr < 0) return LpStatus::Unbounded;
            pivot(pr, pc);
        }
        return LpStatus::IterationLimit;
    };

    LpSolution sol;
    const long max_iter = 200000;

    if (n_art > 0) {
        LpStatus st = iterate(r1, true, max_iter);
        if (st == LpStatus::IterationLimit) {
            sol.status = st;
            return sol;
        }
        if (-z1 > kFeasTol) { // phase-1 optimum = sum of artificials
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // Drive basic artificials (at value 0) out where a structural or
        // slack pivot exists; otherwise the row is redundant and harmless.
        for (int i = 0; i < m; ++i) {
            if (basis[i] < art0) continue;
            for (int j = 0; j < art0; ++j) {
                if (std::abs(T[i][j]) > 1e-7) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    LpStatus st = iterate(r2, false, max_iter);
    if (st != LpStatus::Optimal) {
        sol.status = st;
        return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.x.assign(nv, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < nv) sol.x[basis[i]] = b[i];
    sol.objective = 0.0;
    for (int j = 0; j < nv; ++j) sol.objective += lp.objective[j] * sol.x[j];
    return sol;
}

} // namespace matchkit
