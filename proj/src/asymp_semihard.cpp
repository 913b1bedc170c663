#include "hwcount/asymp_semihard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hwcount/quad.hpp"
#include "hwcount/specfun.hpp"

namespace hwcount {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// Per-radius primitives at y: R = erfc(y+s)/erfc(y), Rc = 1 - R and
// G = e^{-(y+s)^2}/erfc(y), all in scaled form.
struct Prim {
    double R, Rc, G;
};

Prim prim(double y, double s) {
    Prim q;
    q.R = erfc_ratio(y, s);
    if (y + s <= 0.0)
        q.Rc = (std::erfc(-y - s) - std::erfc(-y)) / std::erfc(y);
    else
        q.Rc = 1.0 - q.R;
    q.G = gauss_over_erfc(y, s);
    return q;
}

double magnitude(double x) { return std::abs(x); }
double magnitude(const cplx& z) { return std::abs(z); }

// Polynomial multiplying e^{-(y+s)^2}/erfc(y) in g2.
double p5_g2(double y, double s) {
    const double s2 = s * s, s4 = s2 * s2, y2 = y * y;
    return 50 * y2 * y2 * y + 70 * y2 * y2 * s + y2 * y * (62 * s2 - 73) + y2 * s * (50 * s2 - 33) -
           y * (3 + 18 * s2 - 16 * s4) + s * (3 - 22 * s2 + 8 * s4);
}

// Q(y) = 50 y^4 - 193 y^2 + 21.
double q4(double y) {
    const double y2 = y * y;
    return 50 * y2 * y2 - 193 * y2 + 21;
}

// Polynomial multiplying e^{-(y+s)^2}/erfc(y) in e1 and e11.
double p5_e(double y, double s) {
    const double s2 = s * s, s3 = s2 * s, y2 = y * y;
    return 2 * s3 * (25 * y2 - 11) + 2 * s2 * y * (31 * y2 - 33) + s * (70 * y2 * y2 - 57 * y2 + 3) +
           16 * s2 * s2 * y + 8 * s3 * s2 + y * q4(y);
}

// A(y, s) = s y + 2 s^2 + 5 y^2 - 1.
double a2(double y, double s) { return s * y + 2 * s * s + 5 * y * y - 1; }

void check_s(double s, const char* what) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError(std::string(what) + " must be positive");
}

template <class T>
QuadResult<T> integrate_scaled(const std::function<T(double)>& f, double rate, double tol) {
    // tol is taken relative to the integrand's peak, which grows polynomially
    // in s and sits out to about 6/rate on the right (degree-6 prefactors).
    double peak = 1.0;
    const double lo = -(rate + 3.0), hi = 3.0 + 6.0 / rate;
    for (int i = 0; i <= 32; ++i) peak = std::max(peak, magnitude(f(lo + i * (hi - lo) / 32.0)));
    tol *= peak;
    LineIntegrand<T> in;
    in.f = f;
    in.left = TailModel<T>::gaussian();
    in.right = TailModel<T>::exponential(rate);
    in.split = 0.0;
    return integrate_line(in, tol);
}

template <class T>
T integrate(const std::function<T(double)>& f, double rate, double tol) {
    return integrate_scaled(f, rate, tol).value;
}

}  // namespace

void validate_semihard_s(const std::vector<double>& s) {
    if (s.empty()) throw DomainError("at least one s is required");
    for (std::size_t l = 0; l < s.size(); ++l) {
        if (!std::isfinite(s[l])) throw DomainError("s must be finite");
        if (l > 0 && !(s[l] < s[l - 1])) throw DomainError("semi-hard s must be strictly decreasing");
    }
    if (!(s.back() > 0.0)) throw DomainError("semi-hard s_m must be positive");
}

template <class T>
SemiHardKernelsT<T> semihard_kernels(double y, const std::vector<double>& s, const std::vector<T>& u) {
    if (s.size() != u.size()) throw DomainError("s and u must have equal length");
    const auto w = jump_weights(u);
    T sum_u(0);
    for (const T& v : u) sum_u += v;
    const double G0 = gauss_over_erfc(y);
    const double y2 = y * y;
    const double c1 = kSqrt2 / (3.0 * kSqrtPi);

    T sp(0), sq(0), g1(0), g2(0);
    double mp = 0.0, mq = 0.0;
    for (std::size_t l = 0; l < s.size(); ++l) {
        const Prim q = prim(y, s[l]);
        const T& om = w.omega[l];
        sp += om * q.R;
        sq += om * q.Rc;
        mp += magnitude(om) * q.R;
        mq += magnitude(om) * q.Rc;
        const double a = a2(y, s[l]);
        g1 += om * (c1 * ((5 * y2 - 1) * G0 * q.R - a * q.G));
        const double one5 = 1 - 5 * y2;
        g2 += om * (p5_g2(y, s[l]) / (18 * kSqrtPi) * q.G + 2 * one5 * a / (9 * kPi) * G0 * q.G +
                    y * (3 + 73 * y2 - 50 * y2 * y2) / (18 * kSqrtPi) * G0 * q.R +
                    2 * one5 * one5 / (9 * kPi) * G0 * G0 * q.R);
    }
    SemiHardKernelsT<T> k;
    k.y = y;
    k.g0 = T(1) + sp;
    k.g1 = g1;
    k.g2 = g2;
    // g0 = Omega - sum w Rc; expand around whichever side is nearer.
    const T h0 = mp <= mq ? log1ps(sp) : sum_u + log1ps(-sq / w.Omega);
    k.h0 = h0;
    if (y < 0.0)
        k.h0_sub = mp <= mq ? h0 - sum_u : log1ps(-sq / w.Omega);
    else
        k.h0_sub = h0;
    k.h1 = g1 / k.g0;
    k.h2 = g2 / k.g0 - 0.5 * k.h1 * k.h1;
    return k;
}

template SemiHardKernelsT<double> semihard_kernels<double>(double, const std::vector<double>&,
                                                           const std::vector<double>&);
template SemiHardKernelsT<cplx> semihard_kernels<cplx>(double, const std::vector<double>&, const std::vector<cplx>&);

template <class T>
ExpansionCoeffsT<T> coeffs_semihard(const ModelParams& p, const std::vector<double>& s, const std::vector<T>& u,
                                    double tol) {
    p.validate();
    validate_semihard_s(s);
    if (s.size() != u.size()) throw DomainError("s and u must have equal length");
    T sum_u(0);
    for (const T& v : u) sum_u += v;
    const double b = p.b;
    const double rate = 2.0 * s.back();

    ExpansionCoeffsT<T> out;
    out.error_order = "(ln n)^4/n";
    out.C1 = p.x0() * sum_u;
    const std::function<T(double)> f2 = [&](double y) { return semihard_kernels(y, s, u).h0_sub; };
    const std::function<T(double)> f3 = [&](double y) {
        auto k = semihard_kernels(y, s, u);
        return 4.0 * y * k.h0_sub + kSqrt2 * k.h1;
    };
    const std::function<T(double)> f4 = [&](double y) {
        auto k = semihard_kernels(y, s, u);
        return 6.0 * kSqrt2 * y * y * k.h0_sub + 4.0 * y * k.h1 + kSqrt2 * k.h2;
    };
    auto i2 = integrate_scaled(f2, rate, tol);
    auto i3 = integrate_scaled(f3, rate, tol);
    auto i4 = integrate_scaled(f4, rate, tol);
    out.C2 = kSqrt2 * b * p.rho_b() * i2.value;
    out.C3 = -(0.5 + p.alpha) * sum_u + b * i3.value;
    out.C4 = b / p.rho_b() * i4.value;
    out.err_est = i2.err_est + i3.err_est + i4.err_est;
    return out;
}

template ExpansionCoeffsT<double> coeffs_semihard<double>(const ModelParams&, const std::vector<double>&,
                                                          const std::vector<double>&, double);
template ExpansionCoeffsT<cplx> coeffs_semihard<cplx>(const ModelParams&, const std::vector<double>&,
                                                      const std::vector<cplx>&, double);

double c11_semihard(const ModelParams& p, double sl, double sk, double tol) {
    check_s(sl, "s_l");
    check_s(sk, "s_k");
    const double v = integrate<double>(
        [&](double y) {
            const Prim ql = prim(y, sl), qk = prim(y, sk);
            return ql.R * qk.Rc;
        },
        2.0 * sk, tol);
    return kSqrt2 * p.b * p.rho_b() * v;
}

SemiHardCumulantCoeffs cumulant_coeffs_semihard(const ModelParams& p, double s_l, std::optional<double> s_k,
                                                double tol, bool cross_check) {
    p.validate();
    check_s(s_l, "s_l");
    const double sk = s_k.value_or(s_l);
    check_s(sk, "s_k");
    if (sk > s_l) throw DomainError("pair coefficients need s_l >= s_k");
    const double b = p.b, rb = p.rho_b();
    const double sl = s_l;

    SemiHardCumulantCoeffs out;
    out.s_l = sl;
    out.s_k = sk;
    out.b1 = p.x0();

    out.c1 = kSqrt2 * b * rb * integrate<double>(
                                   [&](double y) {
                                       const Prim q = prim(y, sl);
                                       return y < 0.0 ? -q.Rc : q.R;
                                   },
                                   2.0 * sl, tol);

    out.d1 = -(0.5 + p.alpha) + 2.0 * b * integrate<double>(
                                              [&](double y) {
                                                  const Prim q = prim(y, sl);
                                                  const double G0 = gauss_over_erfc(y);
                                                  const double y2 = y * y;
                                                  return 2.0 * y * (y < 0.0 ? -q.Rc : q.R) +
                                                         (5 * y2 - 1) / (3 * kSqrtPi) * G0 * q.R -
                                                         a2(y, sl) / (3 * kSqrtPi) * q.G;
                                              },
                                              2.0 * sl, tol);

    out.e1 = b / (rb * 9.0 * kSqrt2 * kPi) *
             integrate<double>(
                 [&](double y) {
                     const Prim q = prim(y, sl);
                     const double G0 = gauss_over_erfc(y);
                     const double y2 = y * y;
                     const double one5 = 1 - 5 * y2;
                     return 108 * kPi * y2 * (y < 0.0 ? -q.Rc : q.R) + kSqrtPi * p5_e(y, sl) * q.G -
                            kSqrtPi * y * q4(y) * G0 * q.R - 4 * (5 * y2 - 1) * a2(y, sl) * G0 * q.G +
                            4 * one5 * one5 * G0 * G0 * q.R;
                 },
                 2.0 * sl, tol);

    out.c11 = c11_semihard(p, sl, sk, tol);

    out.d11 = 2.0 * b / (3.0 * kSqrtPi) *
              integrate<double>(
                  [&](double y) {
                      const Prim ql = prim(y, sl), qk = prim(y, sk);
                      const double G0 = gauss_over_erfc(y);
                      const double y2 = y * y;
                      const double al = a2(y, sl);
                      return 6 * kSqrtPi * y * ql.R * qk.Rc - ql.G * al * qk.Rc +
                             (5 * y2 - 1) * ql.R * (G0 + qk.G - 2 * G0 * qk.R) + qk.G * ql.R * sk * (2 * sk + y);
                  },
                  2.0 * sk, tol);

    out.e11 = b / (rb * 9.0 * kSqrt2 * kPi) *
              integrate<double>(
                  [&](double y) {
                      const Prim ql = prim(y, sl), qk = prim(y, sk);
                      const double G0 = gauss_over_erfc(y);
                      const double y2 = y * y;
                      const double one5 = 1 - 5 * y2;
                      const double Q = q4(y);
                      const double al = a2(y, sl);
                      const double pk = 62 * sk * y2 * y + (50 * sk * sk - 57) * y2 + 2 * sk * (8 * sk * sk - 33) * y +
                                        8 * sk * sk * sk * sk - 22 * sk * sk + 70 * y2 * y2 + 3;
                      const double t1 = -kSqrtPi * y * Q * ql.R * (G0 + qk.G) - kSqrtPi * sk * pk * ql.R * qk.G -
                                        kSqrtPi * p5_e(y, sl) * ql.G * qk.R -
                                        4 * al * ql.G * ((5 * y2 - 1) * G0 + (sk * (2 * sk + y) + 5 * y2 - 1) * qk.G);
                      const double t2 = kSqrtPi * p5_e(y, sl) * ql.G;
                      const double t3 = 2 * (4 * (5 * y2 - 1) * al * G0 * ql.G * qk.R + kSqrtPi * y * Q * G0 * ql.R * qk.R +
                                             2 * one5 * one5 * ql.R * G0 * (G0 + 2 * qk.G) +
                                             4 * sk * (5 * y2 - 1) * (2 * sk + y) * G0 * qk.G * ql.R);
                      const double t4 = -12 * one5 * one5 * G0 * G0 * ql.R * qk.R;
                      // The +-108 pi y^2 R_l R_k and 108 pi y^2 R_l pieces combine to R_l Rc_k.
                      return 108 * kPi * y2 * ql.R * qk.Rc + t1 + t2 + t3 + t4;
                  },
                  2.0 * sk, tol);

    if (cross_check) {
        const bool pair = sk < sl;
        const std::vector<double> s1{sl};
        const auto d1 = coeff_derivatives_semihard(p, s1, {1}, 0.5, tol);
        const auto d2 = pair ? coeff_derivatives_semihard(p, {sl, sk}, {1, 1}, 0.5, tol)
                             : coeff_derivatives_semihard(p, s1, {2}, 0.5, tol);
        const std::pair<double, double> checks[] = {{out.b1, d1.C1},  {out.c1, d1.C2},  {out.d1, d1.C3},
                                                    {out.e1, d1.C4},  {out.c11, d2.C2}, {out.d11, d2.C3},
                                                    {out.e11, d2.C4}, {0.0, d2.C1}};
        const char* names[] = {"b1", "c1", "d1", "e1", "c11", "d11", "e11", "b11"};
        for (std::size_t i = 0; i < std::size(checks); ++i) {
            const double gap = std::abs(checks[i].first - checks[i].second);
            out.max_gap = std::max(out.max_gap, gap);
            if (gap > std::max(1e-5, 1e-5 * std::abs(checks[i].first)))
                throw CrossCheckFailure(std::string("semi-hard ") + names[i] + " closed form " +
                                        std::to_string(checks[i].first) + " vs contour derivative " +
                                        std::to_string(checks[i].second));
        }
    }
    return out;
}

std::vector<std::vector<double>> clt_covariance_semihard(const ModelParams& p, const std::vector<double>& s) {
    p.validate();
    validate_semihard_s(s);
    const std::size_t m = s.size();
    std::vector<double> diag(m);
    for (std::size_t l = 0; l < m; ++l) diag[l] = c11_semihard(p, s[l], s[l]);
    std::vector<std::vector<double>> sigma(m, std::vector<double>(m, 0.0));
    for (std::size_t l = 0; l < m; ++l) {
        sigma[l][l] = 1.0;
        for (std::size_t k = l + 1; k < m; ++k) {
            const double v = c11_semihard(p, s[l], s[k]) / std::sqrt(diag[l] * diag[k]);
            sigma[l][k] = sigma[k][l] = v;
        }
    }
    return sigma;
}

SemiHardDerivatives coeff_derivatives_semihard(const ModelParams& p, const std::vector<double>& s,
                                               const MultiIndex& j, double delta, double tol) {
    if (j.size() != s.size()) throw DomainError("multi-index must have one entry per s");
    auto f = [&](const std::vector<cplx>& u) {
        auto c = coeffs_semihard<cplx>(p, s, u, tol);
        return std::vector<cplx>{c.C1, c.C2, c.C3, c.C4};
    };
    const auto d = cauchy_derivatives(f, j, delta);
    return {d[0], d[1], d[2], d[3]};
}

}  // namespace hwcount
