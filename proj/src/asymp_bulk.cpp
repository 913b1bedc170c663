#include "hwcount/asymp_bulk.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hwcount/mgf_exact.hpp"
#include "hwcount/quad.hpp"

namespace hwcount {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

// Second-order polynomial factor of G2 (without the 1/18).
double g2_poly(double t, double s) {
    const double s2 = s * s, t2 = t * t;
    return 50 * t2 * t2 * t - 70 * t2 * t2 * s - t2 * t * (73 - 62 * s2) + t2 * s * (33 - 50 * s2) -
           t * (3 + 18 * s2 - 16 * s2 * s2) - s * (3 - 22 * s2 + 8 * s2 * s2);
}

}  // namespace

void validate_bulk_s(const std::vector<double>& s) {
    if (s.empty()) throw DomainError("at least one s is required");
    for (std::size_t l = 0; l < s.size(); ++l) {
        if (!std::isfinite(s[l])) throw DomainError("s must be finite");
        if (l > 0 && !(s[l] > s[l - 1])) throw DomainError("bulk s must be strictly increasing");
    }
}

template <class T>
BulkKernelsT<T> bulk_kernels(double t, const std::vector<double>& s, const std::vector<T>& u) {
    validate_bulk_s(s);
    if (s.size() != u.size()) throw DomainError("s and u must have equal length");
    const std::size_t m = s.size();
    const auto w = jump_weights(u);
    // Weights of H2: (e^{-u_l} - 1) e^{-(u_1 + ... + u_{l-1})}.
    std::vector<T> v(m);
    T head(0);
    for (std::size_t l = 0; l < m; ++l) {
        v[l] = expm1s(-u[l]) * std::exp(-head);
        head += u[l];
    }
    T a1(0), a2(0), q1(0), q2(0);
    for (std::size_t l = 0; l < m; ++l) {
        a1 += w.omega[l] * (0.5 * std::erfc(t - s[l]));
        a2 += v[l] * (0.5 * std::erfc(t + s[l]));
        const double gauss = std::exp(-(t - s[l]) * (t - s[l])) / kSqrt2Pi;
        q1 += w.omega[l] * (gauss * (1 - 2 * s[l] * s[l] + t * s[l] - 5 * t * t) / 3.0);
        q2 += w.omega[l] * (gauss / 18.0 * g2_poly(t, s[l]));
    }
    BulkKernelsT<T> k;
    k.t = t;
    k.H1 = T(1) + a1;
    k.H2 = T(1) + a2;
    if constexpr (!is_complex_v<T>) {
        if (!(k.H1 > 0.0) || !(k.H2 > 0.0))
            throw PositivityViolation("bulk kernel H1 or H2 is not positive at t = " + std::to_string(t));
    }
    k.lnH1 = log1ps(a1);
    k.lnH2 = log1ps(a2);
    k.G1 = q1 / k.H1;
    k.G2 = q2 / k.H1;
    return k;
}

template BulkKernelsT<double> bulk_kernels<double>(double, const std::vector<double>&, const std::vector<double>&);
template BulkKernelsT<cplx> bulk_kernels<cplx>(double, const std::vector<double>&, const std::vector<cplx>&);

template <class T>
ExpansionCoeffsT<T> coeffs_bulk(const ModelParams& p, double r, const std::vector<double>& s,
                                const std::vector<T>& u, double tol) {
    p.validate();
    if (!(r > 0.0 && r < p.rho)) throw DomainError("bulk base radius must lie in (0, rho)");
    validate_bulk_s(s);
    if (s.size() != u.size()) throw DomainError("s and u must have equal length");
    T sum_u(0);
    for (const T& v : u) sum_u += v;
    const double b = p.b;
    const double rb = std::pow(r, b);

    // Half-line integrals are written as line integrals vanishing on t < 0.
    auto line = [&](std::function<T(double)> f) {
        LineIntegrand<T> in;
        in.f = std::move(f);
        return integrate_line(in, tol, 10.0);
    };
    auto i2 = line([&](double t) {
        if (t < 0.0) return T(0);
        auto k = bulk_kernels(t, s, u);
        return k.lnH1 + k.lnH2;
    });
    auto i3a = line([&](double t) {
        if (t < 0.0) return T(0);
        auto k = bulk_kernels(t, s, u);
        return t * (k.lnH1 - k.lnH2);
    });
    auto i3b = line([&](double t) { return bulk_kernels(t, s, u).G1; });
    auto i4a = line([&](double t) {
        if (t < 0.0) return T(0);
        auto k = bulk_kernels(t, s, u);
        return t * t * (k.lnH1 + k.lnH2);
    });
    auto i4b = line([&](double t) {
        auto k = bulk_kernels(t, s, u);
        return 4.0 * t * k.G1 - k.G1 * k.G1 / kSqrt2 + k.G2;
    });

    ExpansionCoeffsT<T> out;
    out.error_order = "(ln n)^2/n";
    out.C1 = b * std::pow(r, 2.0 * b) * sum_u;
    out.C2 = kSqrt2 * b * rb * i2.value;
    out.C3 = -(0.5 + p.alpha) * sum_u + 4.0 * b * i3a.value + kSqrt2 * b * i3b.value;
    out.C4 = 6.0 * kSqrt2 * b / rb * i4a.value + b / rb * i4b.value;
    out.err_est = i2.err_est + i3a.err_est + i3b.err_est + i4a.err_est + i4b.err_est;
    return out;
}

template ExpansionCoeffsT<double> coeffs_bulk<double>(const ModelParams&, double, const std::vector<double>&,
                                                      const std::vector<double>&, double);
template ExpansionCoeffsT<cplx> coeffs_bulk<cplx>(const ModelParams&, double, const std::vector<double>&,
                                                  const std::vector<cplx>&, double);

BulkDerivatives coeff_derivatives_bulk(const ModelParams& p, double r, const std::vector<double>& s,
                                       const MultiIndex& j, double delta, double tol) {
    if (j.size() != s.size()) throw DomainError("multi-index must have one entry per s");
    auto f = [&](const std::vector<cplx>& u) {
        auto c = coeffs_bulk<cplx>(p, r, s, u, tol);
        return std::vector<cplx>{c.C1, c.C2, c.C3, c.C4};
    };
    const auto d = cauchy_derivatives(f, j, delta);
    return {d[0], d[1], d[2], d[3]};
}

double bulk_wall_sensitivity(const ModelParams& p, double r, const std::vector<double>& s,
                             const std::vector<double>& u, double shift) {
    const auto radii = radii_from_spec(p, RadiiSpec::bulk(r, s, u));
    ModelParams wider = p;
    wider.rho = p.rho + shift;
    wider.validate();
    const double a = log_mgf_exact(p, radii, u).log_mgf;
    const double c = log_mgf_exact(wider, radii, u).log_mgf;
    return std::abs(a - c);
}

}  // namespace hwcount
