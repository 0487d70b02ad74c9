#include "matchkit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace matchkit {

namespace {
constexpr double kInvE = 0.36787944117144233; // 1/e
} // namespace

double lambert_w(double z) {
    if (std::isnan(z)) throw NumericsError("lambert_w: NaN input");
    if (z < -kInvE - 1e-12) {
        throw NumericsError("lambert_w: argument " + std::to_string(z) +
                            " below -1/e");
    }
    if (z < -kInvE) z = -kInvE;
    if (z == 0.0) return 0.0;

    // Seed: series near the branch point, log-based guess elsewhere.
    double w;
    if (z < -kInvE + 1e-4) {
        double q = std::sqrt(2.0 * (1.0 + std::exp(1.0) * z));
        w = -1.0 + q - q * q / 3.0 + 11.0 / 72.0 * q * q * q;
    } else if (z < 0.0) {
        // W(z) ~ z (1 - z + 1.5 z^2) for small |z|; z here is in (-1/e, 0).
        w = z * (1.0 - z + 1.5 * z * z);
        if (w <= -1.0) w = -0.999;
    } else if (z < std::exp(3.0)) {
        // log(1+z) over- then under-shoots mildly; safe Halley seed on [0,e^3).
        w = std::log1p(z);
    } else {
        double l1 = std::log(z);
        double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    for (int it = 0; it < 40; ++it) {
        double ew = std::exp(w);
        double res = w * ew - z;
        if (std::abs(res) <= 1e-13 * std::max(1.0, std::abs(z))) break;
        double denom = ew * (w + 1.0) - (w + 2.0) * res / (2.0 * w + 2.0);
        if (denom == 0.0) break;
        double wn = w - res / denom;
        if (wn < -1.0) wn = -1.0; // stay on the principal branch
        w = wn;
    }
    return w;
}

PenaltyParams::PenaltyParams(double lam) {
    if (lam < -1e-12 || lam > 1.0 + 1e-12)
        throw NumericsError("PenaltyParams: lambda outside [0,1]");
    lambda = std::clamp(lam, 0.0, 1.0);
    e_lm1 = std::exp(lambda - 1.0);
    lam_e_1ml = lambda * std::exp(1.0 - lambda);
    e_lm1_m_lam = e_lm1 - lambda;
}

namespace {
void check_unit(double z, const char* who) {
    if (z < -1e-12 || z > 1.0 + 1e-12)
        throw NumericsError(std::string(who) + ": argument outside [0,1]");
}
} // namespace

double f0(double z, const PenaltyParams& p) {
    check_unit(z, "f0");
    z = std::clamp(z, 0.0, 1.0);
    return std::min(std::exp(z + p.lambda - 1.0), 1.0);
}

double f1(double z, const PenaltyParams& p) {
    check_unit(z, "f1");
    z = std::clamp(z, 0.0, 1.0);
    if (z >= 1.0) return 1.0;
    if (p.lambda == 0.0) return std::exp(z - 1.0); // limit of the W piece
    if (z < p.lam_e_1ml) return p.e_lm1_m_lam / (1.0 - z);
    return -p.lambda / lambert_w(-p.lambda * std::exp(1.0 - p.lambda - z));
}

double f(double A, double X, const PenaltyParams& p) {
    check_unit(A, "f");
    check_unit(X, "f");
    if (A > X) return f1(X, p);
    return std::max(f0(std::min(X - A, 1.0), p), f1(X, p));
}

Region classify_region(double A, double X, const PenaltyParams& p) {
    if (X < A) return X < p.lam_e_1ml ? Region::BR : Region::TR;
    // X >= A: left of the curve X = A - ln A + (1-lambda) + ln lambda -> L.
    if (p.lambda == 0.0) return Region::TR; // boundary at -inf, R_L empty
    if (A == 0.0) return Region::L;         // boundary at +inf; (0,0) in R_L
    double boundary = A - std::log(A) + (1.0 - p.lambda) + std::log(p.lambda);
    return X < boundary ? Region::L : Region::TR;
}

double invert_level_lab(double u_weight, double A, double X0, double level,
                        const PenaltyParams& p) {
    if (X0 < -1e-12 || X0 > 1.0 + 1e-12)
        throw NumericsError("invert_level_lab: X0 outside [0,1]");
    X0 = std::clamp(X0, 0.0, 1.0);
    auto ok = [&](double z) {
        return u_weight * (1.0 - f(A, std::min(X0 + z, 1.0), p)) <= level;
    };
    if (ok(0.0)) return 0.0;
    double hi = 1.0 - X0;
    if (!ok(hi)) return hi;
    double lo = 0.0;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

// Smallest z >= 0 with f1(z) >= y, y in [0,1].
double f1_inv(double y, const PenaltyParams& p) {
    if (y <= p.e_lm1_m_lam) return 0.0;
    if (y >= 1.0) return 1.0;
    if (p.lambda > 0.0 && y < p.e_lm1)
        return 1.0 - p.e_lm1_m_lam / y;
    double lam_over_y = p.lambda == 0.0 ? 0.0 : p.lambda / y;
    return std::min(1.0, 1.0 - p.lambda + std::log(y) + lam_over_y);
}

// Smallest z >= 0 with f0(z) >= y, y in [0,1].
double f0_inv(double y, const PenaltyParams& p) {
    if (y <= p.e_lm1) return 0.0;
    return std::log(y) + 1.0 - p.lambda;
}

double invert_level_lab_analytic(double u_weight, double A, double X0,
                                 double level, const PenaltyParams& p) {
    X0 = std::clamp(X0, 0.0, 1.0);
    if (level >= u_weight * (1.0 - f(A, X0, p))) return 0.0;
    double y = 1.0 - level / u_weight;
    if (y > 1.0) return 1.0 - X0;
    // f(A,X) = max(f1(X), X >= A ? f0(X-A) : -inf); both pieces nondecreasing.
    double Xstar = std::min(f1_inv(y, p), A + f0_inv(y, p));
    Xstar = std::clamp(Xstar, X0, 1.0);
    return Xstar - X0;
}

double g_r(double z, const PenaltyParams& p) {
    check_unit(z, "g_r");
    z = std::clamp(z, 0.0, 1.0);
    if (z < p.lambda) return p.e_lm1 * (z + 1.0 - p.lambda);
    return std::exp(z - 1.0);
}

double g_c(double z, const PenaltyParams& p) {
    check_unit(z, "g_c");
    z = std::clamp(z, 0.0, 1.0);
    if (z < p.lambda) return p.e_lm1;
    return std::exp(z - 1.0);
}

double g_r_integral(double z, const PenaltyParams& p) {
    z = std::clamp(z, 0.0, 1.0);
    double lam = p.lambda;
    if (z <= lam) return p.e_lm1 * (0.5 * z * z + (1.0 - lam) * z);
    double at_lam = p.e_lm1 * (0.5 * lam * lam + (1.0 - lam) * lam);
    return at_lam + std::exp(z - 1.0) - p.e_lm1;
}

double g_c_integral(double z, const PenaltyParams& p) {
    z = std::clamp(z, 0.0, 1.0);
    double lam = p.lambda;
    if (z <= lam) return p.e_lm1 * z;
    return p.e_lm1 * lam + std::exp(z - 1.0) - p.e_lm1;
}

double r_lab(double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw NumericsError("r_lab: lambda outside [0,1]");
    if (lambda == 1.0) return 0.0; // analytic limit of the log term
    double e_lm1 = std::exp(lambda - 1.0);
    return 1.0 - e_lm1 -
           (e_lm1 - lambda) * std::log(1.0 - lambda * std::exp(1.0 - lambda)) -
           lambda * (1.0 - lambda);
}

double c_lab(double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw NumericsError("c_lab: lambda outside [0,1]");
    return 1.0 + lambda - std::exp(lambda - 1.0);
}

double r_paw(double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw NumericsError("r_paw: lambda outside [0,1]");
    return 1.0 - (1.0 - lambda + 0.5 * lambda * lambda) * std::exp(lambda - 1.0);
}

double c_paw(double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw NumericsError("c_paw: lambda outside [0,1]");
    return 1.0 - (1.0 - lambda) * std::exp(lambda - 1.0);
}

double map_lambda_equal_consistency(double lambda_lab) {
    if (lambda_lab < 0.0 || lambda_lab > 1.0)
        throw NumericsError("map_lambda_equal_consistency: lambda outside [0,1]");
    double z = lambda_lab - std::exp(lambda_lab - 1.0); // in [-1/e, 0]
    return std::clamp(1.0 + lambert_w(z), 0.0, 1.0);
}

namespace {
template <typename Fn>
double invert_increasing(Fn fn, double target, const char* who) {
    double lo = 0.0, hi = 1.0;
    if (target < fn(0.0) - 1e-12 || target > fn(1.0) + 1e-12)
        throw NumericsError(std::string(who) + ": target outside curve range");
    // The curves flatten quadratically at the endpoints; snap exact targets
    // there instead of letting bisection stall half a sqrt(ulp) away.
    if (target <= fn(0.0)) return 0.0;
    if (target >= fn(1.0)) return 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (fn(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}
} // namespace

double lambda_lab_for_consistency(double c_target) {
    return invert_increasing(c_lab, c_target, "lambda_lab_for_consistency");
}

double lambda_paw_for_consistency(double c_target) {
    return invert_increasing(c_paw, c_target, "lambda_paw_for_consistency");
}

} // namespace matchkit
