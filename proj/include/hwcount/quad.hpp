#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "hwcount/errors.hpp"
#include "hwcount/scalar.hpp"

namespace hwcount {

template <class V>
struct QuadResult {
    V value{};
    double err_est = 0.0;
    long evals = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }

template <class V, class F>
void gk15(F& f, double a, double b, V& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const V fc = f(c);
    V resk = fc * kWgk[7];
    V resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const V f1 = f(c - dx);
        const V f2 = f(c + dx);
        resk += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) resg += (f1 + f2) * kWg[j / 2];
    }
    result = resk * h;
    err = magnitude((resk - resg) * h);
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 quadrature on [a, b] to absolute
/// tolerance tol. The error estimate is |K15 - G7| summed over panels.
/// Throws NoConvergence when max_panels is exceeded.
template <class V, class F>
QuadResult<V> gauss_kronrod(F&& f, double a, double b, double tol, int max_panels = 4000) {
    struct Panel {
        double a, b;
        V value;
        double err;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    QuadResult<V> out;
    if (a == b) return out;
    std::priority_queue<Panel> heap;
    auto eval = [&](double lo, double hi) {
        Panel p{lo, hi, V{}, 0.0};
        detail::gk15<V>(f, lo, hi, p.value, p.err);
        out.evals += 15;
        return p;
    };
    heap.push(eval(a, b));
    double total_err = heap.top().err;
    int panels = 1;
    while (total_err > tol) {
        if (panels >= max_panels) {
            std::ostringstream msg;
            msg << "Gauss-Kronrod on [" << a << ", " << b << "] stopped at error " << total_err << " > " << tol;
            throw NoConvergence(msg.str());
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NoConvergence("Gauss-Kronrod panel collapsed near " + std::to_string(mid));
        }
        Panel left = eval(worst.a, mid);
        Panel right = eval(mid, worst.b);
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++panels;
        // Resum periodically to keep rounding in total_err from drifting.
        if (panels % 64 == 0) {
            auto copy = heap;
            double e = 0.0;
            while (!copy.empty()) {
                e += copy.top().err;
                copy.pop();
            }
            total_err = e;
        }
    }
    // Deterministic ordered summation by left endpoint.
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    CompensatedSum<V> sum;
    double err = 0.0;
    for (const auto& p : all) {
        sum.add(p.value);
        err += p.err;
    }
    out.value = sum.value();
    out.err_est = err;
    return out;
}

/// Integral over [a, b] whose integrand has a removable singularity at a:
/// adaptive quadrature on [a + h, b] plus two-point Gauss on [a, a + h].
/// Neither rule evaluates f at a itself.
template <class V, class F>
QuadResult<V> integrate_removable_left(F&& f, double a, double b, double tol, double h_frac = 1e-4) {
    const double h = (b - a) * h_frac;
    auto main = gauss_kronrod<V>(f, a + h, b, 0.5 * tol);
    const double c = a + 0.5 * h;
    const double d = 0.5 * h / std::sqrt(3.0);
    const V end = (f(c - d) + f(c + d)) * (0.5 * h);
    // Two-point Gauss error is O(h^5 f''''), far below tol for the smooth
    // integrands used here; the midpoint/Gauss gap is a safe upper bound.
    const double end_err = detail::magnitude(end - f(c) * h);
    main.value += end;
    main.err_est += end_err;
    main.evals += 3;
    return main;
}

/// Tail model for one side of a line integral.
/// Gaussian: |f| decays at least like e^{-y^2} beyond L.
/// Exponential: |f| decays at least like e^{-rate |y|} beyond L.
/// Analytic: `analytic(L)` returns {tail integral from L outward, bound}.
template <class V>
struct TailModel {
    enum class Kind { Gaussian, Exponential, Analytic };
    Kind kind = Kind::Gaussian;
    double rate = 1.0;
    std::function<std::pair<V, double>(double)> analytic;

    static TailModel gaussian() { return {}; }
    static TailModel exponential(double rate) {
        TailModel t;
        t.kind = Kind::Exponential;
        t.rate = rate;
        return t;
    }
    static TailModel with_analytic(std::function<std::pair<V, double>(double)> fn) {
        TailModel t;
        t.kind = Kind::Analytic;
        t.analytic = std::move(fn);
        return t;
    }
};

/// Integrand over the real line. `f` must already include any counterterm
/// subtraction; integration is split at `split` so that step counterterms
/// are handled panel by panel.
template <class V>
struct LineIntegrand {
    std::function<V(double)> f;
    TailModel<V> left = TailModel<V>::gaussian();
    TailModel<V> right = TailModel<V>::gaussian();
    double split = 0.0;
};

namespace detail {

template <class V>
std::pair<V, double> tail_estimate(const LineIntegrand<V>& in, const TailModel<V>& t, double L, double sign) {
    if (t.kind == TailModel<V>::Kind::Analytic) return t.analytic(L);
    const double y = sign * L;
    const double fl = magnitude(in.f(y));
    // Safety factor 2 covers polynomial prefactors over the first decay length.
    if (t.kind == TailModel<V>::Kind::Gaussian) return {V{}, 2.0 * fl / (2.0 * L)};
    return {V{}, 2.0 * fl / t.rate};
}

}  // namespace detail

/// Adaptive quadrature over [-L, L] with L grown (from window_hint, by 1.5x)
/// until both declared tail bounds fall below tol/4, plus analytic tails.
template <class V>
QuadResult<V> integrate_line(const LineIntegrand<V>& in, double tol, double window_hint = 40.0) {
    if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    double L = std::max(window_hint, std::abs(in.split) + 1.0);
    std::pair<V, double> lt, rt;
    for (;;) {
        lt = detail::tail_estimate(in, in.left, L, -1.0);
        rt = detail::tail_estimate(in, in.right, L, 1.0);
        if (lt.second < 0.25 * tol && rt.second < 0.25 * tol) break;
        L *= 1.5;
        if (L > 1e5) throw NoConvergence("integrand tails do not decay within |y| < 1e5");
    }
    auto f = [&](double y) { return in.f(y); };
    auto left = gauss_kronrod<V>(f, -L, in.split, 0.25 * tol);
    auto right = gauss_kronrod<V>(f, in.split, L, 0.25 * tol);
    QuadResult<V> out;
    CompensatedSum<V> s;
    s.add(left.value);
    s.add(right.value);
    s.add(lt.first);
    s.add(rt.first);
    out.value = s.value();
    out.err_est = left.err_est + right.err_est + lt.second + rt.second;
    out.evals = left.evals + right.evals;
    return out;
}

/// Universal constants appearing in the edge expansions.
struct UniversalConstants {
    double I = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double I3 = 0.0;
    double I4 = 0.0;
    double tol = 0.0;  // largest absolute error estimate among the five
};

/// Integrands of the five constants (counterterms included), exposed for tests.
double constant_integrand(int which, double y);

/// Evaluates I, I1, ..., I4 to absolute tolerance tol (>= 1e-12).
UniversalConstants universal_constants(double tol = 1e-12);

/// Cached high-accuracy value of I.
double universal_I();

}  // namespace hwcount
