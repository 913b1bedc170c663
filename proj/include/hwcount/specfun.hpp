#pragma once

#include <string>
#include <vector>

namespace hwcount {

/// Scaled complementary error function e^{y^2} erfc(y). Returns +inf when
/// the result overflows (y below about -26.6).
double erfcx(double y);

/// erfc(y + s) / erfc(y) for s >= 0, without underflow for |y| up to 1e3.
double erfc_ratio(double y, double s);

/// e^{-(y+s)^2} / erfc(y), evaluated in scaled form for y >= 0.
double gauss_over_erfc(double y, double s = 0.0);

/// ln Gamma*(a) where Gamma(a) = sqrt(2 pi) a^{a - 1/2} e^{-a} Gamma*(a).
double log_gamma_star(double a);

/// lambda - 1 - ln(lambda) given e = lambda - 1, accurate for small e.
double d_of_e(double e);

/// ln P(a, z) with P the regularized lower incomplete gamma function.
double log_gamma_p(double a, double z);

/// ln(gamma(a, z1) / gamma(a, z2)) for 0 <= z1 <= z2.
double gamma_ratio_log(double a, double z1, double z2);

/// Same ratio with z1 = z2 e^{ell}, ell <= 0. Passing ell directly keeps full
/// accuracy when z1 and z2 are relatively close.
double gamma_ratio_log_rel(double a, double z2, double ell);

/// eta = sign(lambda - 1) sqrt(2 (lambda - 1 - ln lambda)).
double eta_of_lambda(double lambda);

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct TemmeCoeff {
    int j = 0;
    double lambda = 1.0;
    double eta = 0.0;
    double value = 0.0;
    std::vector<Rational> singular_coeffs;  // multiplies (lambda-1)^{-k}, k = 1..2j+1
};

inline constexpr int kMaxTemmeOrder = 8;

/// Stirling coefficient gamma_j (gamma_0 = 1, gamma_1 = -1/12).
double stirling_gamma(int j);

/// Coefficient c_j of the uniform expansion, evaluated as phi_j - S(phi_j)
/// with tabulated singular parts; uses an exact eta-series near lambda = 1.
TemmeCoeff temme_coeff(int j, double lambda);

/// c_j evaluated through the derivative recursion with gamma_j, starting
/// from c_0 = 1/(lambda-1) - 1/eta. Independent of the tabulated path.
double temme_coeff_recursive(int j, double lambda);

/// N-term approximation of gamma(a, lambda a) / Gamma(a) away from the
/// transition, built from the singular parts S(phi_j).
double temme_gamma_ratio(double a, double lambda, int N);

/// Lower branch W_{-1} of the Lambert W function on [-1/e, 0).
double lambert_w_m1(double x);

}  // namespace hwcount
