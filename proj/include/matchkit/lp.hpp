#ifndef MATCHKIT_LP_HPP
#define MATCHKIT_LP_HPP

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace matchkit {

inline constexpr double kLpInf = std::numeric_limits<double>::infinity();

struct LpRow {
    std::vector<std::pair<int, double>> coeffs; // (variable, coefficient)
    char sense = 'L';                           // 'L' <=, 'G' >=, 'E' =
    double rhs = 0.0;
    std::string name;
};

// Maximize objective subject to rows; variables have lower bound 0 and an
// optional finite upper bound.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective; // size num_vars
    std::vector<LpRow> rows;
    std::vector<double> upper; // size num_vars, kLpInf if unbounded above

    int add_var(double obj = 0.0, double up = kLpInf) {
        objective.push_back(obj);
        upper.push_back(up);
        return num_vars++;
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

// Two-phase primal simplex on the dense tableau; Dantzig pricing with a
// Bland's-rule fallback for anti-cycling. Intended for desk-scale models
// (a few hundred rows/columns).
LpSolution solve_lp_dense(const LinearProgram& lp);

} // namespace matchkit

#endif
