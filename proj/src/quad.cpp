#include "hwcount/quad.hpp"

#include <array>
#include <cmath>

#include "hwcount/specfun.hpp"

namespace hwcount {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kAsymptoticFrom = 12.0;
constexpr double kExcessFrom = 4.0;
constexpr int kTerms = 22;

// Expansion of each integrand for large y as sum_k c[k] y^{p - 2k}, counterterm
// included. Built from sqrt(pi) y erfcx(y) ~ sum_k (-1)^k (2k-1)!! / (2 y^2)^k.
struct Asymptotic {
    std::array<std::array<double, kTerms>, 5> c{};
    std::array<int, 5> p{2, 1, 4, 2, 4};

    Asymptotic() {
        std::array<double, kTerms> s{}, A{}, B{};
        s[0] = 1.0;
        for (int k = 1; k < kTerms; ++k) s[k] = -s[k - 1] * (2.0 * k - 1.0) / 2.0;
        // A = 1/s, so that e^{-y^2} / (sqrt(pi) erfc(y)) ~ y A(1/y^2).
        A[0] = 1.0;
        for (int k = 1; k < kTerms; ++k) {
            double acc = 0.0;
            for (int i = 1; i <= k; ++i) acc += s[i] * A[k - i];
            A[k] = -acc;
        }
        for (int k = 0; k < kTerms; ++k)
            for (int i = 0; i <= k; ++i) B[k] += A[i] * A[k - i];
        c[0] = A;  // y^2 A - y^2 - 1/2
        c[0][0] -= 1.0;
        c[0][1] -= 0.5;
        c[1] = A;  // y A - y - y / (2 (1 + y^2))
        c[1][0] -= 1.0;
        for (int k = 1; k < kTerms; ++k) c[1][k] -= ((k % 2) ? 0.5 : -0.5);
        c[2] = A;  // y^4 A - y^4 - y^2/2 + 1/2
        c[2][0] -= 1.0;
        c[2][1] -= 0.5;
        c[2][2] += 0.5;
        c[3] = B;  // y^2 B - y^2 - 1
        c[3][0] -= 1.0;
        c[3][1] -= 1.0;
        c[4] = B;  // y^4 B - y^4 - y^2 + 3/4
        c[4][0] -= 1.0;
        c[4][1] -= 1.0;
        c[4][2] += 0.75;
    }

    double value(int which, double y) const {
        const double w = 1.0 / (y * y);
        double acc = 0.0;
        for (int k = kTerms - 1; k >= 0; --k) acc = acc * w + c[which][k];
        return acc * std::pow(y, p[which]);
    }

    std::pair<double, double> tail(int which, double L) const {
        double sum = 0.0;
        double last = 0.0;
        for (int k = 0; k < kTerms; ++k) {
            if (c[which][k] == 0.0) continue;
            const int e = 2 * k - p[which] - 1;  // integral of y^{p-2k} from L is L^{-e} / e
            if (e <= 0) continue;
            last = c[which][k] * std::pow(L, -e) / e;
            sum += last;
        }
        return {sum, std::abs(last) + 1e-16 * std::abs(sum)};
    }
};

// K(y) = e^{-y^2} / (sqrt(pi) erfc(y)) - y from the Laplace continued fraction,
// free of the cancellation in the direct difference.
double mills_excess(double y) {
    double f = y;
    for (int k = 400; k >= 2; --k) f = y + 0.5 * k / f;
    return 0.5 / f;
}

const Asymptotic& asymptotic() {
    static const Asymptotic a;
    return a;
}

}  // namespace

double constant_integrand(int which, double y) {
    if (which < 0 || which > 4) throw DomainError("constant index must be 0..4");
    if (y >= kAsymptoticFrom) return asymptotic().value(which, y);
    if (y >= kExcessFrom) {
        const double K = mills_excess(y);
        const double y2 = y * y;
        const double sq = 2.0 * y * K + K * K - 1.0;  // g^2 - y^2 - 1
        switch (which) {
            case 0: return y * K - 0.5;
            case 1: return K - y / (2.0 * (1.0 + y2));
            case 2: return y2 * (y * K - 0.5) + 0.5;
            case 3: return sq;
            default: return y2 * sq + 0.75;
        }
    }
    const double g = gauss_over_erfc(y) * kInvSqrtPi;
    const bool pos = y > 0.0;
    const double y2 = y * y;
    switch (which) {
        case 0: return y * g - (pos ? y2 + 0.5 : 0.0);
        case 1: return g - (pos ? y + y / (2.0 * (1.0 + y2)) : 0.0);
        case 2: return y2 * y * g - (pos ? y2 * y2 + 0.5 * y2 - 0.5 : 0.0);
        case 3: return g * g - (pos ? y2 + 1.0 : 0.0);
        default: {
            const double yg = y * g;
            return yg * yg - (pos ? y2 * y2 + y2 - 0.75 : 0.0);
        }
    }
}

UniversalConstants universal_constants(double tol) {
    if (!(tol >= 1e-12)) throw DomainError("universal_constants requires tol >= 1e-12");
    UniversalConstants out;
    std::array<double, 5> v{};
    for (int which = 0; which < 5; ++which) {
        LineIntegrand<double> in;
        in.f = [which](double y) { return constant_integrand(which, y); };
        in.left = TailModel<double>::gaussian();
        in.right = TailModel<double>::with_analytic([which](double L) {
            if (L < kAsymptoticFrom) return std::pair<double, double>{0.0, INFINITY};
            return asymptotic().tail(which, L);
        });
        auto r = integrate_line(in, tol, kAsymptoticFrom);
        v[which] = r.value;
        out.tol = std::max(out.tol, r.err_est);
    }
    out.I = v[0];
    out.I1 = v[1];
    out.I2 = v[2];
    out.I3 = v[3];
    out.I4 = v[4];
    return out;
}

double universal_I() {
    static const double value = universal_constants(1e-12).I;
    return value;
}

}  // namespace hwcount
