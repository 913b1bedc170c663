#include "hwcount/asymp_hard.hpp"

#include <cmath>
#include <numbers>

#include "hwcount/quad.hpp"
#include "hwcount/specfun.hpp"

namespace hwcount {

namespace {

// expm1(-tau d / b) / d, finite at d = 0.
double em_over(double tau, double d, double b) { return d == 0.0 ? -tau / b : std::expm1(-tau * d / b) / d; }

double log_wall_term(const ModelParams& p) {
    return std::log(p.b * p.rho_b() / (std::sqrt(2.0 * std::numbers::pi) * p.c_rho()));
}

void check_positive_t(double t, const char* what) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

void validate_hard_t(const std::vector<double>& t) {
    if (t.empty()) throw DomainError("at least one t is required");
    for (std::size_t l = 0; l < t.size(); ++l) {
        if (!std::isfinite(t[l])) throw DomainError("t must be finite");
        if (l > 0 && !(t[l] < t[l - 1])) throw DomainError("t must be strictly decreasing");
    }
    if (!(t.back() >= 0.0)) throw DomainError("t_m must be non-negative");
}

template <class T>
T T_sum(int jorder, double x, const ModelParams& p, const std::vector<double>& t, const std::vector<T>& u) {
    if (jorder < 0) throw DomainError("T_sum order must be non-negative");
    if (t.size() != u.size()) throw DomainError("t and u must have equal length");
    const auto w = jump_weights(u);
    const double x0 = p.x0();
    T acc(0);
    for (std::size_t l = 0; l < t.size(); ++l)
        acc += w.omega[l] * (std::pow(t[l], jorder) * std::exp(-(t[l] / p.b) * (x - x0)));
    return acc;
}

template double T_sum<double>(int, double, const ModelParams&, const std::vector<double>&, const std::vector<double>&);
template cplx T_sum<cplx>(int, double, const ModelParams&, const std::vector<double>&, const std::vector<cplx>&);

template <class T>
HardEdgeCoeffsT<T> coeffs_hard(const ModelParams& p, const std::vector<double>& t, const std::vector<T>& u,
                               double tol) {
    p.validate();
    validate_hard_t(t);
    if (t.size() != u.size()) throw DomainError("t and u must have equal length");
    const std::size_t m = t.size();
    const auto w = jump_weights(u);
    const double b = p.b;
    const double x0 = p.x0();
    T sum_u(0);
    for (const T& v : u) sum_u += v;

    HardEdgeCoeffsT<T> out;
    out.t = t;
    out.u = u;

    T T1_0(0), T2_0(0);
    for (std::size_t l = 0; l < m; ++l) {
        T1_0 += w.omega[l] * t[l];
        T2_0 += w.omega[l] * (t[l] * t[l]);
    }

    auto c1 = gauss_kronrod<T>(
        [&](double x) {
            T T0(0);
            for (std::size_t l = 0; l < m; ++l) T0 += w.omega[l] * std::exp(-(t[l] / b) * (x - x0));
            return log1ps(T0);
        },
        x0, 1.0, tol);
    out.C1 = x0 * sum_u + c1.value;

    const T ratio1 = T1_0 / w.Omega;
    out.C2 = -0.5 * x0 * ratio1;

    // f(x) + x0 T1(x0) / (Omega (x - x0)) with the pole cancelled through expm1.
    auto c3 = gauss_kronrod<T>(
        [&](double x) {
            const double d = x - x0;
            T T0(0), T1(0), T2(0), A(0), B(0);
            for (std::size_t l = 0; l < m; ++l) {
                const double e = std::exp(-(t[l] / b) * d);
                const double q = em_over(t[l], d, b);
                T0 += w.omega[l] * e;
                T1 += w.omega[l] * (t[l] * e);
                T2 += w.omega[l] * (t[l] * t[l] * e);
                A += w.omega[l] * (t[l] * q);
                B += w.omega[l] * q;
            }
            const T g = T(1) + T0;
            const T pole = (w.Omega * A - T1_0 * B) / (w.Omega * g);
            return -(p.alpha / b) * T1 / g - (x / (2.0 * b)) * T2 / g - x0 * pole;
        },
        x0, 1.0, tol);
    T T0_1(0);
    for (std::size_t l = 0; l < m; ++l) T0_1 += w.omega[l] * std::exp(-(t[l] / b) * (1.0 - x0));
    out.C3 = -0.5 * sum_u + 0.5 * log1ps(T0_1) + c3.value + x0 * ratio1 * log_wall_term(p);

    const double rho2b = p.rho_2b();
    out.C4 = std::sqrt(2.0) * universal_I() * b * p.rho_b() *
             (rho2b * T2_0 / w.Omega - ratio1 - rho2b * ratio1 * ratio1);
    out.err_est = c1.err_est + c3.err_est;
    return out;
}

template HardEdgeCoeffsT<double> coeffs_hard<double>(const ModelParams&, const std::vector<double>&,
                                                     const std::vector<double>&, double);
template HardEdgeCoeffsT<cplx> coeffs_hard<cplx>(const ModelParams&, const std::vector<double>&,
                                                 const std::vector<cplx>&, double);

double b11_hard(const ModelParams& p, double tl, double tk) {
    const double b = p.b;
    const double c = p.c_rho();
    // b (1 - e^{-tau c / b}) / tau, continuous at tau = 0.
    auto part = [&](double tau) { return tau == 0.0 ? c : -b * std::expm1(-tau * c / b) / tau; };
    return part(tl) - part(tl + tk);
}

double d1_integrand_raw(const ModelParams& p, double t, double x) {
    const double b = p.b, a = p.alpha, r2 = p.rho_2b(), d = x - p.x0();
    const double num = std::exp(-(t / b) * d) * (2.0 * b * (b - a) * r2 + x * (2.0 * a - b * r2 * t) + t * x * x) -
                       2.0 * b * b * r2;
    return t * num / (2.0 * b * d);
}

double d1_integrand(const ModelParams& p, double t, double x) {
    const double b = p.b, x0 = p.x0(), d = x - x0;
    const double e = std::exp(-(t / b) * d);
    return t * (e * (2.0 * p.alpha + t * x) + 2.0 * b * x0 * em_over(t, d, b)) / (2.0 * b);
}

double d11_integrand_raw(const ModelParams& p, double tl, double tk, double x) {
    const double b = p.b, a = p.alpha, r2 = p.rho_2b(), x0 = p.x0(), d = x - x0;
    const double el = std::exp(-(tl / b) * d);
    const double elk = std::exp(-((tl + tk) / b) * d);
    const double num = 2.0 * b * b * tk * r2 + tl * el * (2.0 * b * b * r2 + d * (2.0 * a + tl * x)) +
                       elk * ((2.0 * b * r2 * (a - b) - 2.0 * a * x) * (tl + tk) + x * (x0 - x) * (tl * tl + tk * tk));
    return num / (2.0 * b * d);
}

double d11_integrand(const ModelParams& p, double tl, double tk, double x) {
    const double b = p.b, a = p.alpha, x0 = p.x0(), d = x - x0;
    const double s = tl + tk;
    const double el = std::exp(-(tl / b) * d);
    const double elk = std::exp(-(s / b) * d);
    const double num_over_d = 2.0 * b * x0 * (tl * em_over(tl, d, b) - s * em_over(s, d, b)) +
                              tl * el * (2.0 * a + tl * x) - elk * (2.0 * a * s + x * (tl * tl + tk * tk));
    return num_over_d / (2.0 * b);
}

HardCumulantCoeffs cumulant_coeffs_hard(const ModelParams& p, double t_l, std::optional<double> t_k, double tol) {
    p.validate();
    check_positive_t(t_l, "t_l");
    const double tk = t_k.value_or(t_l);
    check_positive_t(tk, "t_k");
    if (tk > t_l) throw DomainError("pair coefficients need t_l >= t_k");

    const double b = p.b, c = p.c_rho(), x0 = p.x0(), r2 = p.rho_2b();
    const double wall = log_wall_term(p);
    const double kI = std::sqrt(2.0) * universal_I() * b * p.rho_b();
    HardCumulantCoeffs out;
    out.t_l = t_l;
    out.t_k = tk;

    const double decay_l = -std::expm1(-(t_l / b) * c);  // 1 - e^{-t_l c / b}
    out.b1 = x0 + b * decay_l / t_l;
    out.c1 = -0.5 * x0 * t_l;
    auto i1 = gauss_kronrod<double>([&](double x) { return d1_integrand(p, t_l, x); }, x0, 1.0, tol);
    out.d1 = -0.5 * decay_l + x0 * t_l * wall - i1.value;
    out.e1 = kI * t_l * (r2 * t_l - 1.0);

    out.b11 = b11_hard(p, t_l, tk);
    out.c11 = 0.5 * x0 * tk;
    auto i11 = gauss_kronrod<double>([&](double x) { return d11_integrand(p, t_l, tk, x); }, x0, 1.0, tol);
    out.d11 = 0.5 * std::exp(-(t_l / b) * c) * -std::expm1(-(tk / b) * c) - x0 * tk * wall - i11.value;
    out.e11 = kI * tk * (1.0 - r2 * (2.0 * t_l + tk));
    return out;
}

VariancePeak variance_peak(const ModelParams& p) {
    p.validate();
    const double W = lambert_w_m1(-0.5 / std::sqrt(std::numbers::e));
    const double c = p.c_rho();
    VariancePeak out;
    out.t_star = -(W + 0.5) * p.b / c;
    out.b11_star = (-2.0 * W - 1.0) / (4.0 * W * W) * c;

    // b11(t, t) = c (1 - e^{-s})^2 / (2 s) with s = t c / b is unimodal in s.
    auto f = [&](double t) { return b11_hard(p, t, t); };
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 1e-3 * p.b / c, hi = 10.0 * p.b / c;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-12 * (p.b / c)) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    out.t_golden = 0.5 * (lo + hi);
    out.b11_golden = f(out.t_golden);
    return out;
}

std::vector<std::vector<double>> clt_covariance_hard(const ModelParams& p, const std::vector<double>& t) {
    p.validate();
    validate_hard_t(t);
    if (!(t.back() > 0.0)) throw DomainError("the normal limit requires t_m > 0");
    const std::size_t m = t.size();
    std::vector<double> diag(m);
    for (std::size_t l = 0; l < m; ++l) diag[l] = b11_hard(p, t[l], t[l]);
    std::vector<std::vector<double>> sigma(m, std::vector<double>(m, 0.0));
    for (std::size_t l = 0; l < m; ++l) {
        sigma[l][l] = 1.0;
        for (std::size_t k = l + 1; k < m; ++k) {
            const double v = b11_hard(p, t[l], t[k]) / std::sqrt(diag[l] * diag[k]);
            sigma[l][k] = sigma[k][l] = v;
        }
    }
    return sigma;
}

CoeffDerivatives coeff_derivatives_hard(const ModelParams& p, const std::vector<double>& t, const MultiIndex& j,
                                        double delta, double tol) {
    if (j.size() != t.size()) throw DomainError("multi-index must have one entry per t");
    auto f = [&](const std::vector<cplx>& u) {
        auto c = coeffs_hard<cplx>(p, t, u, tol);
        return std::vector<cplx>{c.C1, c.C2, c.C3, c.C4};
    };
    const auto d = cauchy_derivatives(f, j, delta);
    return {d[0], d[1], d[2], d[3]};
}

}  // namespace hwcount
