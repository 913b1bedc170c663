#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hwcount/errors.hpp"
#include "hwcount/scalar.hpp"

namespace hwcount {

/// Mittag-Leffler ensemble with potential |z|^{2b} - (2 alpha / n) ln|z|,
/// restricted to the disk |z| <= rho.
struct ModelParams {
    double b = 1.0;
    double alpha = 0.0;
    double rho = 0.5;
    long n = 1;

    /// Throws DomainError unless b > 0, alpha > -1, n >= 1 and
    /// 0 < rho < b^{-1/(2b)}.
    void validate() const;

    double rho_2b() const { return std::pow(rho, 2.0 * b); }
    double rho_b() const { return std::pow(rho, b); }
    /// b rho^{2b}: fraction of the unconstrained mass inside the wall.
    double x0() const { return b * rho_2b(); }
    /// Mass swept onto the wall, 1 - b rho^{2b}.
    double c_rho() const { return 1.0 - x0(); }
};

enum class Regime { Physical, HardEdge, SemiHard, Bulk };

const char* regime_name(Regime r);

/// Merging radii and test charges. `shape` holds t (hard edge) or s
/// (semi-hard and bulk); `r` is the bulk base radius; `radii` holds
/// physical radii for Regime::Physical.
struct RadiiSpec {
    Regime regime = Regime::Physical;
    std::vector<double> shape;
    double r = 0.0;
    std::vector<double> radii;
    std::vector<double> u;

    static RadiiSpec hard(std::vector<double> t, std::vector<double> u);
    static RadiiSpec semihard(std::vector<double> s, std::vector<double> u);
    static RadiiSpec bulk(double r, std::vector<double> s, std::vector<double> u);
    static RadiiSpec physical(std::vector<double> radii, std::vector<double> u);

    std::size_t m() const;
    /// Structural checks that do not depend on n (ordering, signs, sizes).
    void validate(const ModelParams& p) const;
};

/// Radii together with log_ratio[l] = ln((r_l / rho)^{2b}), the latter
/// computed without forming 1 - t/n so that it keeps full relative accuracy.
struct RadiiSet {
    std::vector<double> radius;
    std::vector<double> log_ratio;
};

RadiiSet radii_set(const ModelParams& p, const RadiiSpec& spec);
RadiiSet radii_set_physical(const ModelParams& p, const std::vector<double>& radii);
std::vector<double> radii_from_spec(const ModelParams& p, const RadiiSpec& spec);

template <class T>
struct JumpWeightsT {
    std::vector<T> omega;  // omega[0..m-1] = omega_1..omega_m, omega[m] = 1
    T Omega{};
};
using JumpWeights = JumpWeightsT<double>;

/// omega_l = e^{u_l + ... + u_m} - e^{u_{l+1} + ... + u_m}, omega_{m+1} = 1.
/// Throws RangeError when an exponential overflows.
template <class T>
JumpWeightsT<T> jump_weights(const std::vector<T>& u) {
    using std::exp;
    const std::size_t m = u.size();
    JumpWeightsT<T> w;
    w.omega.assign(m + 1, T(0));
    w.omega[m] = T(1);
    T tail(0);  // u_{l+1} + ... + u_m
    for (std::size_t k = m; k-- > 0;) {
        const T e_tail = exp(tail);
        w.omega[k] = e_tail * expm1s(u[k]);
        tail += u[k];
        if (!all_finite(w.omega[k])) throw RangeError("jump weight overflow");
    }
    w.Omega = exp(tail);
    if (!all_finite(w.Omega)) throw RangeError("jump weight overflow");
    return w;
}

struct EquilibriumSummary {
    double c_rho = 0.0;
    double leading_linear = 0.0;
};

/// c_rho and the naive linear statistic b rho^{2b} sum(u), plus u_m c_rho
/// when the outermost hard-edge radius sits on the wall.
EquilibriumSummary equilibrium_summary(const ModelParams& p, const RadiiSpec& spec);

}  // namespace hwcount
