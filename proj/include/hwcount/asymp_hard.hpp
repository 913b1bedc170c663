#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hwcount/cauchy.hpp"
#include "hwcount/model.hpp"

namespace hwcount {

/// T_j(x) = sum_l omega_l t_l^j exp(-(t_l / b)(x - b rho^{2b})), l = 1..m.
template <class T>
T T_sum(int jorder, double x, const ModelParams& p, const std::vector<double>& t, const std::vector<T>& u);

/// ln E ~ C1 n + C2 ln n + C3 + C4 / sqrt(n) for radii rho (1 - t_l / n)^{1/(2b)}.
template <class T>
struct HardEdgeCoeffsT {
    T C1{}, C2{}, C3{}, C4{};
    std::vector<double> t;
    std::vector<T> u;
    std::string error_order = "n^(-3/5)";
    double err_est = 0.0;  // summed quadrature error estimates
};
using HardEdgeCoeffs = HardEdgeCoeffsT<double>;

/// Throws DomainError unless t is strictly decreasing with t_m >= 0.
void validate_hard_t(const std::vector<double>& t);

template <class T>
HardEdgeCoeffsT<T> coeffs_hard(const ModelParams& p, const std::vector<double>& t, const std::vector<T>& u,
                               double tol = 1e-12);

/// Cumulant expansion coefficients: mean b1 n + c1 ln n + d1 + e1 / sqrt(n) at
/// t_l, and covariance b11 n + c11 ln n + d11 + e11 / sqrt(n) for the pair
/// (t_l, t_k) with t_l >= t_k. Without t_k the pair is (t_l, t_l).
struct HardCumulantCoeffs {
    double t_l = 0.0, t_k = 0.0;
    double b1 = 0.0, c1 = 0.0, d1 = 0.0, e1 = 0.0;
    double b11 = 0.0, c11 = 0.0, d11 = 0.0, e11 = 0.0;
};

HardCumulantCoeffs cumulant_coeffs_hard(const ModelParams& p, double t_l, std::optional<double> t_k = std::nullopt,
                                        double tol = 1e-12);

/// Closed-form leading variance coefficient b11(t_l, t_k).
double b11_hard(const ModelParams& p, double t_l, double t_k);

/// Integrands of d1 and d11 after cancelling the 0/0 at x = b rho^{2b};
/// the *_raw variants are the uncancelled quotients, exposed for tests.
double d1_integrand(const ModelParams& p, double t, double x);
double d1_integrand_raw(const ModelParams& p, double t, double x);
double d11_integrand(const ModelParams& p, double tl, double tk, double x);
double d11_integrand_raw(const ModelParams& p, double tl, double tk, double x);

struct VariancePeak {
    double t_star = 0.0;      // closed form through W_{-1}(-1/(2 sqrt(e)))
    double b11_star = 0.0;
    double t_golden = 0.0;    // golden-section argmax of t -> b11(t, t)
    double b11_golden = 0.0;
};

VariancePeak variance_peak(const ModelParams& p);

/// Limiting correlation matrix of the normalized counts; t strictly
/// decreasing with t_m > 0.
std::vector<std::vector<double>> clt_covariance_hard(const ModelParams& p, const std::vector<double>& t);

/// d^j C_k / du^j at u = 0 (k = 1..4) by contour differentiation of the
/// complex-u coefficients.
struct CoeffDerivatives {
    double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
};
CoeffDerivatives coeff_derivatives_hard(const ModelParams& p, const std::vector<double>& t, const MultiIndex& j,
                                        double delta = 0.5, double tol = 1e-12);

}  // namespace hwcount
