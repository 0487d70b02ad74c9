#ifndef MATCHKIT_FRLP_HPP
#define MATCHKIT_FRLP_HPP

#include <string>
#include <vector>

#include "matchkit/lp.hpp"

namespace matchkit {

// Factor-revealing LP: maximize consistency c subject to r-robustness over
// the normalized (greedy/monotone/uniform) algorithm class.
// Variables, 1-based t and i with t <= i <= n:
//   x_t, xbar_t, d_t, dbar_t, c, y_{i,t}, D^{(t)}_i.
struct FrlpModel {
    int n = 0;
    double r = 0.0;
    LinearProgram lp;               // full model; objective is c
    std::vector<std::string> names; // per variable, for LP-file export

    int idx_x(int t) const { return t - 1; }
    int idx_xbar(int t) const { return n + t - 1; }
    int idx_d(int t) const { return 2 * n + t - 1; }
    int idx_dbar(int t) const { return 3 * n + t - 1; }
    int idx_c() const { return 4 * n; }
    // Triangular blocks, t = 1..n, i = t..n.
    int tri(int t, int i) const {
        return (t - 1) * n - (t - 1) * (t - 2) / 2 + (i - t);
    }
    int idx_y(int i, int t) const { return 4 * n + 1 + tri(t, i); }
    int idx_D(int t, int i) const {
        return 4 * n + 1 + n * (n + 1) / 2 + tri(t, i);
    }
    int num_vars() const { return 4 * n + 1 + n * (n + 1); }
};

FrlpModel build_frlp(int n, double r);

// CPLEX-LP text (Maximize / Subject To / Bounds / End).
std::string export_lp(const FrlpModel& model);

// Minimal LP-file parser covering the subset export_lp emits (and what a
// conforming solver would accept back): used for round-trip tests and for
// loading externally edited models. Variable names are returned in first-use
// order via names_out.
LinearProgram parse_lp(const std::string& text,
                       std::vector<std::string>& names_out);

struct FrlpSolution {
    bool feasible = false;
    double c_star = 0.0;
    std::vector<double> var;    // full-model variable values (num_vars())
    double max_violation = 0.0; // across all constraint families
    int cuts_used = 0;          // embedded solver only
};

// Full dense simplex on the complete model; internal oracle for small n.
FrlpSolution solve_frlp_dense(const FrlpModel& model, int cap = 16);

// Cuts of the form  sum_i g_i d_i + rho <= rhs, valid for every r at fixed n,
// so a pool can be shared across an r-grid.
struct FrlpCutPool {
    int n = 0;
    struct Cut {
        std::vector<double> grad; // size n
        double rhs = 0.0;
    };
    std::vector<Cut> cuts;
};

// Cutting-plane solver: master LP over (x, xbar, rho, c) where rho stands in
// for the total robustness-phase water, bounded above by supergradient cuts
// of the concave waterfill value T(d). Terminates with a certificate
// (master relaxation value == feasible reconstructed primal value).
FrlpSolution solve_frlp_embedded(const FrlpModel& model,
                                 FrlpCutPool* pool = nullptr, int cap = 80);

// Largest violation of the model's constraints/boxes by `var`.
double frlp_check(const FrlpModel& model, const std::vector<double>& var);

// Exact waterfill value T(d) of the robustness phase for nondecreasing
// d in [0,1]^n, plus a supergradient. Exposed for tests.
double frlp_waterfill(const std::vector<double>& d, std::vector<double>& grad);

} // namespace matchkit

#endif
