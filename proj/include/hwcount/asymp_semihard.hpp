#pragma once

#include <optional>
#include <vector>

#include "hwcount/cauchy.hpp"
#include "hwcount/expansion.hpp"
#include "hwcount/model.hpp"

namespace hwcount {

template <class T>
struct SemiHardKernelsT {
    double y = 0.0;
    T g0{}, g1{}, g2{};
    T h0{}, h1{}, h2{};
    T h0_sub{};  // h0 - 1{y < 0} sum(u), computed without cancellation
};
using SemiHardKernels = SemiHardKernelsT<double>;

/// Throws DomainError unless s is strictly decreasing with s_m > 0.
void validate_semihard_s(const std::vector<double>& s);

template <class T>
SemiHardKernelsT<T> semihard_kernels(double y, const std::vector<double>& s, const std::vector<T>& u);

/// Radii rho (1 - sqrt(2) s_l / (rho^b sqrt(n)))^{1/(2b)}.
template <class T>
ExpansionCoeffsT<T> coeffs_semihard(const ModelParams& p, const std::vector<double>& s, const std::vector<T>& u,
                                    double tol = 1e-11);

/// Mean b1 n + c1 sqrt(n) + d1 + e1 / sqrt(n) at s_l and covariance
/// c11 sqrt(n) + d11 + e11 / sqrt(n) for the pair s_l >= s_k (s_k = s_l when
/// absent). With cross_check, every value is compared with the contour
/// derivative of coeffs_semihard and CrossCheckFailure is thrown on a gap
/// above max(1e-5, 1e-5 |value|).
struct SemiHardCumulantCoeffs {
    double s_l = 0.0, s_k = 0.0;
    double b1 = 0.0, c1 = 0.0, d1 = 0.0, e1 = 0.0;
    double c11 = 0.0, d11 = 0.0, e11 = 0.0;
    double max_gap = 0.0;  // largest closed-form vs contour difference (0 without cross_check)
};

SemiHardCumulantCoeffs cumulant_coeffs_semihard(const ModelParams& p, double s_l,
                                                std::optional<double> s_k = std::nullopt, double tol = 1e-11,
                                                bool cross_check = true);

/// Closed-form leading covariance coefficient c11(s_l, s_k).
double c11_semihard(const ModelParams& p, double s_l, double s_k, double tol = 1e-11);

std::vector<std::vector<double>> clt_covariance_semihard(const ModelParams& p, const std::vector<double>& s);

struct SemiHardDerivatives {
    double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
};
SemiHardDerivatives coeff_derivatives_semihard(const ModelParams& p, const std::vector<double>& s,
                                               const MultiIndex& j, double delta = 0.5, double tol = 1e-11);

}  // namespace hwcount
