#include "hwcount/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "hwcount/errors.hpp"

namespace hwcount {

namespace {

#include "temme_tables.inc"

static_assert(kTemmeMaxOrder == kMaxTemmeOrder);

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kLn2Pi = 1.83787706640934548356;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this |eta| the tabulated Taylor series of c_j is used.
constexpr double kEtaSeriesCut = 2.0;
// Incomplete gamma switches to the uniform expansion for large a near the
// transition z ~ a.
constexpr double kTemmeMinA = 1e5;
constexpr double kTemmeMaxE = 0.1;
constexpr long kMaxIter = 10'000'000;

double exp_square(double y) {
    const double hi = y * y;
    const double lo = std::fma(y, y, -hi);
    return std::exp(hi) * (1.0 + lo);
}

// Laplace continued fraction, accurate for y >= 10.
double erfcx_cf(double y) {
    double f = y;
    for (int k = 60; k >= 1; --k) f = y + 0.5 * k / f;
    return kInvSqrtPi / f;
}

double expm1mx(double x) {
    if (std::abs(x) >= 0.5) return std::expm1(x) - x;
    double term = x * x / 2.0;
    double sum = term;
    for (int k = 3; k < 40; ++k) {
        term *= x / k;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double horner(const double* c, int len, double x) {
    double acc = 0.0;
    for (int i = len - 1; i >= 0; --i) acc = acc * x + c[i];
    return acc;
}

double double_factorial_odd(int j) {
    double out = 1.0;
    for (int k = 1; k < 2 * j; k += 2) out *= k;
    return out;
}

double eta_from_e(double e) {
    if (std::abs(e) < 1e-3) {
        // eta = e sqrt(q(e)), q(e) = 2 (e - ln(1+e)) / e^2
        double q = 0.0;
        for (int m = 10; m >= 0; --m) q = q * e + 2.0 * ((m % 2) ? -1.0 : 1.0) / (m + 2);
        return e * std::sqrt(q);
    }
    const double d = d_of_e(e);
    return std::copysign(std::sqrt(2.0 * d), e);
}

double singular_part(int j, double x) {
    double acc = 0.0;
    for (int k = 2 * j + 1; k >= 1; --k) {
        const double c = static_cast<double>(kSingularCoeffs[j][k - 1][0]) /
                         static_cast<double>(kSingularCoeffs[j][k - 1][1]);
        acc = (acc + c) * x;
    }
    return acc;
}

double phi(int j, double eta) {
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;
    return sign * double_factorial_odd(j) / std::pow(eta, 2 * j + 1);
}

double c_tabulated(int j, double lambda, double eta) {
    if (std::abs(eta) < kEtaSeriesCut) return horner(kRegularEtaSeries[j], kTemmeEtaTerms, eta);
    return phi(j, eta) - singular_part(j, 1.0 / (lambda - 1.0));
}

// ln P = (scaled ? -a D(lambda) : 0) + L
struct LogP {
    bool scaled;
    double L;
};

LogP log_p_series(double a, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (long k = 1; k < kMaxIter; ++k) {
        term *= z / (a + static_cast<double>(k));
        sum += term;
        if (term <= 1e-17 * sum) return {true, -0.5 * std::log(2.0 * kPi * a) - log_gamma_star(a) + std::log(sum)};
    }
    throw NoConvergence("incomplete gamma series");
}

LogP log_p_cf(double a, double z, double e) {
    constexpr double tiny = 1e-300;
    double bb = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / bb;
    double h = d;
    for (long i = 1; i < kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        bb += 2.0;
        d = an * d + bb;
        if (std::abs(d) < tiny) d = tiny;
        c = bb + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= 1e-16) {
            const double pref = -a * d_of_e(e) + 0.5 * std::log(a / (2.0 * kPi)) - log_gamma_star(a);
            const double q = std::exp(pref) * h;
            return {false, std::log1p(-q)};
        }
    }
    throw NoConvergence("incomplete gamma continued fraction");
}

LogP log_p_temme(double a, double e) {
    const double eta = eta_from_e(e);
    const double s = eta * std::sqrt(0.5 * a);
    const double inv_a = 1.0 / a;
    double sum = 0.0;
    for (int j = kTemmeMaxOrder; j >= 0; --j)
        sum = sum * inv_a + horner(kRegularEtaSeries[j], kTemmeEtaTerms, eta);
    const double r = sum / std::sqrt(2.0 * kPi * a);
    if (eta < 0.0) return {true, std::log(0.5 * erfcx(-s) - r)};
    const double q = std::exp(-a * d_of_e(e)) * (0.5 * erfcx(s) + r);
    return {false, std::log1p(-q)};
}

LogP log_p_parts(double a, double z) {
    const double e = (z - a) / a;
    if (a > kTemmeMinA && std::abs(e) <= kTemmeMaxE) return log_p_temme(a, e);
    if (z < a + 1.0) return log_p_series(a, z);
    return log_p_cf(a, z, e);
}

double full_value(const LogP& p, double a, double z) {
    return p.scaled ? -a * d_of_e((z - a) / a) + p.L : p.L;
}

void check_a(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("incomplete gamma requires finite a > 0");
}

// Power series of c_j in eta built at runtime from the derivative recursion,
// in extended precision. Independent of the tabulated coefficients except
// for gamma_j.
struct RecursiveSeries {
    static constexpr int K = 130;
    std::array<std::vector<long double>, kTemmeMaxOrder + 1> c;
    std::array<std::vector<long double>, kTemmeMaxOrder + 1> poly;  // -S(phi_j) in powers of x

    RecursiveSeries() {
        using LD = long double;
        const int n = K + 2;
        // lambda - 1 = sum_k b_k eta^k. From e e' = eta (1 + e):
        // (m+1) b_m = b_{m-1} - sum_{i=2}^{m-1} (m-i+1) b_i b_{m-i+1}.
        std::vector<LD> bcoef(n + 1, 0);
        bcoef[1] = 1;
        for (int m = 2; m <= n; ++m) {
            LD acc = bcoef[m - 1];
            for (int i = 2; i <= m - 1; ++i) acc -= LD(m - i + 1) * bcoef[i] * bcoef[m - i + 1];
            bcoef[m] = acc / LD(m + 1);
        }
        std::vector<LD> B(n), inv(n);
        for (int i = 0; i < n; ++i) B[i] = bcoef[i + 1];
        inv[0] = 1;
        for (int k = 1; k < n; ++k) {
            LD acc = 0;
            for (int i = 1; i <= k; ++i) acc += B[i] * inv[k - i];
            inv[k] = -acc;
        }
        // c_0 = (1/eta) (1/B - 1); x = 1/(lambda-1) = (1/eta)(1/B).
        std::vector<LD> cur(n - 1);
        for (int k = 0; k < n - 1; ++k) cur[k] = inv[k + 1];
        c[0] = cur;
        for (int j = 1; j <= kTemmeMaxOrder; ++j) {
            const LD gj = stirling_gamma(j);
            std::vector<LD> next(cur.size() - 2);
            for (std::size_t m = 0; m < next.size(); ++m) next[m] = (m + 2) * cur[m + 2] + gj * inv[m + 1];
            cur = std::move(next);
            c[j] = cur;
        }
        // Polynomial part: P_0 = x, P_j = D P_{j-1} + gamma_j x with
        // D x^k = -k (x^{k+1} + x^{k+2}).
        poly[0] = {0, 1};
        for (int j = 1; j <= kTemmeMaxOrder; ++j) {
            const auto& prev = poly[j - 1];
            std::vector<LD> next(prev.size() + 2, 0);
            for (std::size_t k = 1; k < prev.size(); ++k) {
                next[k + 1] -= LD(k) * prev[k];
                next[k + 2] -= LD(k) * prev[k];
            }
            next[1] += LD(stirling_gamma(j));
            poly[j] = std::move(next);
        }
    }
};

const RecursiveSeries& recursive_series() {
    static const RecursiveSeries rs;
    return rs;
}

}  // namespace

double erfcx(double y) {
    if (std::isnan(y)) return y;
    if (y >= 10.0) return erfcx_cf(y);
    if (y >= 0.0) return exp_square(y) * std::erfc(y);
    if (y < -26.6) return kInf;
    return 2.0 * exp_square(y) - erfcx(-y);
}

double erfc_ratio(double y, double s) {
    if (!(s >= 0.0)) throw DomainError("erfc_ratio requires s >= 0");
    if (s == 0.0) return 1.0;
    const double ys = y + s;
    if (y >= 0.0) return erfcx(ys) / erfcx(y) * std::exp(-s * (2.0 * y + s));
    if (ys <= 0.0) return std::erfc(ys) / std::erfc(y);
    return erfcx(ys) * std::exp(-ys * ys) / std::erfc(y);
}

double gauss_over_erfc(double y, double s) {
    if (y >= 0.0) return std::exp(-s * (2.0 * y + s)) / erfcx(y);
    const double ys = y + s;
    return std::exp(-ys * ys) / std::erfc(y);
}

double log_gamma_star(double a) {
    check_a(a);
    if (a >= 10.0) {
        static constexpr double bern[] = {1.0 / 6,  -1.0 / 30, 1.0 / 42,     -1.0 / 30,
                                          5.0 / 66, -691.0 / 2730, 7.0 / 6};
        const double inv = 1.0 / a;
        const double inv2 = inv * inv;
        double pw = inv;
        double sum = 0.0;
        for (int k = 1; k <= 7; ++k) {
            sum += bern[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * pw;
            pw *= inv2;
        }
        return sum;
    }
    return std::lgamma(a) - (a - 0.5) * std::log(a) + a - 0.5 * kLn2Pi;
}

double d_of_e(double e) {
    if (std::abs(e) < 0.25) {
        double pw = e * e;
        double sum = 0.0;
        for (int k = 2; k < 60; ++k) {
            const double t = ((k % 2) ? -pw : pw) / k;
            sum += t;
            if (std::abs(t) <= 1e-17 * sum) break;
            pw *= e;
        }
        return sum;
    }
    return e - std::log1p(e);
}

double log_gamma_p(double a, double z) {
    check_a(a);
    if (!(z >= 0.0)) throw DomainError("incomplete gamma requires z >= 0");
    if (z == 0.0) return -kInf;
    if (std::isinf(z)) return 0.0;
    return std::min(0.0, full_value(log_p_parts(a, z), a, z));
}

double gamma_ratio_log_rel(double a, double z2, double ell) {
    check_a(a);
    if (!(z2 > 0.0) || !std::isfinite(z2)) throw DomainError("gamma ratio requires finite z2 > 0");
    if (std::isnan(ell) || ell > 0.0) throw RangeError("gamma ratio requires z1 <= z2");
    if (ell == 0.0) return 0.0;
    const double z1 = z2 * std::exp(ell);
    if (z1 == 0.0) return -kInf;
    const LogP p1 = log_p_parts(a, z1);
    const LogP p2 = log_p_parts(a, z2);
    double out;
    if (p1.scaled && p2.scaled) {
        const double e2 = (z2 - a) / a;
        const double dd = e2 * std::expm1(ell) + expm1mx(ell);
        out = -a * dd + (p1.L - p2.L);
    } else {
        out = full_value(p1, a, z1) - full_value(p2, a, z2);
    }
    return std::min(0.0, out);
}

double gamma_ratio_log(double a, double z1, double z2) {
    check_a(a);
    if (!(z1 >= 0.0)) throw DomainError("gamma ratio requires z1 >= 0");
    if (!(z2 >= z1)) throw RangeError("gamma ratio requires z1 <= z2");
    if (z1 == z2) return 0.0;
    if (z1 == 0.0) return -kInf;
    return gamma_ratio_log_rel(a, z2, std::log(z1 / z2));
}

double eta_of_lambda(double lambda) {
    if (!(lambda > 0.0) || std::isinf(lambda)) throw DomainError("eta requires finite lambda > 0");
    return eta_from_e(lambda - 1.0);
}

double stirling_gamma(int j) {
    if (j < 0 || j > kTemmeMaxOrder) throw UnsupportedOrder("Stirling coefficient order " + std::to_string(j));
    return kStirlingGamma[j];
}

TemmeCoeff temme_coeff(int j, double lambda) {
    if (j < 0 || j > kTemmeMaxOrder) throw UnsupportedOrder("c_j tables cover j <= 8, got " + std::to_string(j));
    TemmeCoeff c;
    c.j = j;
    c.lambda = lambda;
    c.eta = eta_of_lambda(lambda);
    for (int k = 0; k < 2 * j + 1; ++k) c.singular_coeffs.push_back({kSingularCoeffs[j][k][0], kSingularCoeffs[j][k][1]});
    c.value = c_tabulated(j, lambda, c.eta);
    return c;
}

double temme_coeff_recursive(int j, double lambda) {
    if (j < 0 || j > kTemmeMaxOrder) throw UnsupportedOrder("c_j recursion covers j <= 8, got " + std::to_string(j));
    const double eta = eta_of_lambda(lambda);
    const auto& rs = recursive_series();
    if (std::abs(eta) < 2.25) {
        const auto& c = rs.c[j];
        long double acc = 0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * eta + c[i];
        return static_cast<double>(acc);
    }
    const long double x = 1.0L / (static_cast<long double>(lambda) - 1.0L);
    const auto& p = rs.poly[j];
    long double acc = 0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
    return static_cast<double>(phi(j, eta) + acc);
}

double temme_gamma_ratio(double a, double lambda, int N) {
    if (!(a >= 10.0)) throw DomainError("temme_gamma_ratio requires a >= 10");
    if (!(lambda > 0.0)) throw DomainError("temme_gamma_ratio requires lambda > 0");
    if (N > 6) throw UnsupportedOrder("temme_gamma_ratio supports N <= 6");
    if (N < 1) throw DomainError("temme_gamma_ratio requires N >= 1");
    const double e = lambda - 1.0;
    if (std::abs(e) < 1.0 / std::sqrt(a)) throw DomainError("lambda inside the transition window |lambda-1| < 1/sqrt(a)");
    const double x = 1.0 / e;
    double sum = 0.0;
    for (int j = N - 1; j >= 0; --j) sum = sum / a + singular_part(j, x);
    const double pref = std::exp(-a * d_of_e(e)) / std::sqrt(2.0 * kPi * a);
    return (lambda > 1.0 ? 1.0 : 0.0) + pref * sum;
}

double lambert_w_m1(double x) {
    constexpr double em1 = 0.36787944117144232160;
    if (!(x >= -em1 && x < 0.0)) throw DomainError("W_{-1} requires x in [-1/e, 0)");
    const double p2 = 2.0 * std::fma(2.71828182845904523536, x, 1.0);
    if (p2 <= 0.0) return -1.0;
    double w;
    if (x < -0.25) {
        const double p = -std::sqrt(p2);
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
    } else {
        const double l1 = std::log(-x);
        const double l2 = std::log(-l1);
        w = l1 - l2 + l2 / l1;
    }
    if (p2 < 1e-16) return std::min(w, -1.0);
    for (int it = 0; it < 50; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0) break;
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 4e-16 * std::abs(w)) break;
    }
    return std::min(w, -1.0);
}

}  // namespace hwcount
