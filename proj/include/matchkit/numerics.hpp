#ifndef MATCHKIT_NUMERICS_HPP
#define MATCHKIT_NUMERICS_HPP

#include <stdexcept>
#include <string>

namespace matchkit {

class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

// Principal-branch Lambert W on [-1/e, inf): W(z) e^{W(z)} = z, W >= -1.
// Halley iteration, residual stop 1e-13, <= 40 iterations.
double lambert_w(double z);

// Precomputed constants for the tradeoff parameter lambda in [0,1].
struct PenaltyParams {
    double lambda = 0.0;
    double e_lm1 = 0.0;        // e^{lambda-1}
    double lam_e_1ml = 0.0;    // lambda * e^{1-lambda}
    double e_lm1_m_lam = 0.0;  // e^{lambda-1} - lambda

    PenaltyParams() = default;
    explicit PenaltyParams(double lam);
};

enum class Region { L, BR, TR };

// Penalty pieces of Eq. (1) and their combination Eq. (2).
double f0(double z, const PenaltyParams& p);
double f1(double z, const PenaltyParams& p);
double f(double A, double X, const PenaltyParams& p);

Region classify_region(double A, double X, const PenaltyParams& p);

// Smallest z in [0, 1-X0] with w*(1 - f(A, X0+z)) <= level; bisection to 1e-12.
double invert_level_lab(double u_weight, double A, double X0, double level,
                        const PenaltyParams& p);

// Exact piecewise inverse used by the LAB hot loop; agrees with
// invert_level_lab to bisection accuracy (property-tested).
double invert_level_lab_analytic(double u_weight, double A, double X0, double level,
                                 const PenaltyParams& p);

// Piece inverses: smallest z >= 0 with f1(z) >= y (resp. f0(z) >= y).
// Cheap (no Lambert W); exposed so hot loops can cache f(A, X0) themselves.
double f1_inv(double y, const PenaltyParams& p);
double f0_inv(double y, const PenaltyParams& p);

// PAW splitting functions (robustness / consistency variants).
double g_r(double z, const PenaltyParams& p);
double g_c(double z, const PenaltyParams& p);
// Antiderivatives from 0, used for closed-form dual slab integrals.
double g_r_integral(double z, const PenaltyParams& p);
double g_c_integral(double z, const PenaltyParams& p);

// Closed-form tradeoff curves.
double r_lab(double lambda);
double c_lab(double lambda);
double r_paw(double lambda);
double c_paw(double lambda);

// lambda_PAW with c_paw(lambda_PAW) = c_lab(lambda_LAB).
double map_lambda_equal_consistency(double lambda_lab);
// Inverse of c_lab / c_paw on [1-1/e, 1] (bisection), for consistency targets.
double lambda_lab_for_consistency(double c_target);
double lambda_paw_for_consistency(double c_target);

} // namespace matchkit

#endif
