#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hwcount/errors.hpp"
#include "hwcount/scalar.hpp"

namespace hwcount {

/// Mixed partial derivative selection at the origin, one order per variable.
using MultiIndex = std::vector<int>;

struct DiffMethod {
    enum class Kind { Cauchy, CentralDiff };
    Kind kind = Kind::Cauchy;
    double delta = 0.5;  // contour radius
    int K = 0;           // points per circle; 0 picks max(16, 8 max j)
    double h = 0.05;     // coarsest central-difference step
    int max_shrinks = 4;
    double abs_tol = 1e-6;  // agreement threshold max(abs_tol, rel_tol |value|)
    double rel_tol = 1e-8;

    static DiffMethod cauchy(double delta = 0.5, int K = 0) {
        DiffMethod m;
        m.delta = delta;
        m.K = K;
        return m;
    }
    static DiffMethod central(double h = 0.05) {
        DiffMethod m;
        m.kind = Kind::CentralDiff;
        m.h = h;
        return m;
    }
};

struct DerivativeResult {
    double value = 0.0;        // from the requested method
    double cross_check = 0.0;  // from the other method
    double delta = 0.0;        // contour radius finally used
};

namespace detail {

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

inline void check_index(const MultiIndex& j) {
    int total = 0;
    for (int v : j) {
        if (v < 0) throw DomainError("derivative orders must be non-negative");
        total += v;
    }
    if (total < 1) throw DomainError("derivative multi-index must have |j| >= 1");
}

// Visits every point of a tensor grid with extents ext, passing the index vector.
template <class Visit>
void for_each_grid(const std::vector<int>& ext, Visit&& visit) {
    std::vector<int> idx(ext.size(), 0);
    for (;;) {
        visit(idx);
        std::size_t d = 0;
        for (; d < ext.size(); ++d) {
            if (++idx[d] < ext[d]) break;
            idx[d] = 0;
        }
        if (d == ext.size()) return;
    }
}

}  // namespace detail

/// Trapezoid rule for the multivariate Cauchy integral on circles |z_i| = delta,
/// applied to several functions at once: f maps complex u (one entry per
/// variable) to a vector of values analytic near 0.
template <class F>
std::vector<double> cauchy_derivatives(F&& f, const MultiIndex& j, double delta, int K = 0) {
    detail::check_index(j);
    if (!(delta > 0.0)) throw DomainError("contour radius must be positive");
    int jmax = 0;
    for (int v : j) jmax = std::max(jmax, v);
    if (K == 0) K = std::max(16, 8 * jmax);
    if (K < 8 * jmax) throw DomainError("contour needs K >= 8 max(j)");
    std::vector<int> ext(j.size());
    for (std::size_t d = 0; d < j.size(); ++d) ext[d] = j[d] == 0 ? 1 : K;
    std::vector<CompensatedSum<cplx>> sums;
    std::vector<cplx> z(j.size());
    double points = 1.0;
    for (int e : ext) points *= e;
    detail::for_each_grid(ext, [&](const std::vector<int>& idx) {
        double phase = 0.0;
        for (std::size_t d = 0; d < j.size(); ++d) {
            if (j[d] == 0) {
                z[d] = 0.0;
                continue;
            }
            const double theta = 2.0 * std::numbers::pi * idx[d] / K;
            z[d] = std::polar(delta, theta);
            phase -= j[d] * theta;
        }
        const std::vector<cplx> vals = f(z);
        if (sums.empty()) sums.resize(vals.size());
        const cplx rot = std::polar(1.0, phase);
        for (std::size_t i = 0; i < vals.size(); ++i) sums[i].add(vals[i] * rot);
    });
    double scale = 1.0 / points;
    for (int v : j) scale *= detail::factorial(v) / std::pow(delta, v);
    std::vector<double> out(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) out[i] = sums[i].value().real() * scale;
    return out;
}

/// Single-function form of cauchy_derivatives.
template <class F>
double cauchy_derivative(F&& f, const MultiIndex& j, double delta, int K = 0) {
    auto wrapped = [&](const std::vector<cplx>& z) { return std::vector<cplx>{f(z)}; };
    return cauchy_derivatives(wrapped, j, delta, K)[0];
}

/// Tensor-product central differences with Richardson extrapolation over
/// steps h, h/2, h/4, h/8. g maps real u to a real value.
template <class G>
double central_difference(G&& g, const MultiIndex& j, double h, int levels = 4) {
    detail::check_index(j);
    if (!(h > 0.0)) throw DomainError("difference step must be positive");
    auto stencil = [&](double step) {
        std::vector<int> ext(j.size());
        for (std::size_t d = 0; d < j.size(); ++d) ext[d] = j[d] + 1;
        std::vector<double> u(j.size());
        CompensatedSum<double> sum;
        detail::for_each_grid(ext, [&](const std::vector<int>& idx) {
            double w = 1.0;
            for (std::size_t d = 0; d < j.size(); ++d) {
                const int k = idx[d];
                u[d] = (0.5 * j[d] - k) * step;
                // (-1)^k binom(j, k)
                w *= ((k % 2) ? -1.0 : 1.0) * detail::factorial(j[d]) /
                     (detail::factorial(k) * detail::factorial(j[d] - k));
            }
            sum.add(w * g(u));
        });
        double total = 0;
        for (int v : j) total += v;
        return sum.value() / std::pow(step, total);
    };
    std::vector<double> row(levels);
    for (int l = 0; l < levels; ++l) row[l] = stencil(h / std::pow(2.0, l));
    double factor = 4.0;
    for (int k = 1; k < levels; ++k) {
        for (int l = 0; l + k < levels; ++l) row[l] = (factor * row[l + 1] - row[l]) / (factor - 1.0);
        factor *= 4.0;
    }
    return row[0];
}

/// Derivative at the origin by the requested method, cross-checked by the
/// other one. On disagreement the contour radius is halved and both retried.
/// fc: complex evaluation (contour); fr: real evaluation (differences).
template <class FC, class FR>
DerivativeResult checked_derivative(FC&& fc, FR&& fr, const MultiIndex& j, const DiffMethod& m) {
    DerivativeResult out;
    double delta = m.delta;
    const double h = m.h;
    double last_gap = 0.0;
    for (int attempt = 0; attempt <= m.max_shrinks; ++attempt) {
        const double cauchy = cauchy_derivative(fc, j, delta, m.K);
        const double diff = central_difference(fr, j, h);
        const bool primary_cauchy = m.kind == DiffMethod::Kind::Cauchy;
        out.value = primary_cauchy ? cauchy : diff;
        out.cross_check = primary_cauchy ? diff : cauchy;
        out.delta = delta;
        last_gap = std::abs(cauchy - diff);
        if (last_gap <= std::max(m.abs_tol, m.rel_tol * std::abs(out.value))) return out;
        delta *= 0.5;
    }
    throw MethodDisagreement("contour and finite-difference derivatives differ by " + std::to_string(last_gap));
}

}  // namespace hwcount
