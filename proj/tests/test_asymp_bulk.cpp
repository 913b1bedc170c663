#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hwcount/asymp_bulk.hpp"
#include "hwcount/mgf_exact.hpp"

using namespace hwcount;

namespace {

ModelParams params(double b, double alpha, double rho, long n = 100) {
    ModelParams p;
    p.b = b;
    p.alpha = alpha;
    p.rho = rho;
    p.n = n;
    return p;
}

// Frozen from tests/oracles/semihard_oracle.py.
struct CoeffRow {
    double b, alpha, rho, r;
    std::vector<double> s, u;
    double C1, C2, C3, C4;
};

const std::vector<CoeffRow> kCoeffs = {
    {1.0, 0.0, 0.7, 0.4, {0.3}, {0.5}, 0.08, 0.11303132591056034, 0.016854098235126194, -0.0150385090443038},
    {1.5, 0.3, 0.6, 0.45, {-0.5, 0.2, 1.0}, {0.4, -0.3, 0.7}, 0.10935, 0.35519658128710974,
     0.069396893643670044, -0.2224806837546375},
};

}  // namespace

TEST_CASE("bulk kernels at u = 0 and in the far field") {
    for (double t : {-12.0, -1.0, 0.0, 0.7, 9.0}) {
        auto k = bulk_kernels<double>(t, {-0.4, 0.6}, {0.0, 0.0});
        CHECK(k.H1 == 1.0);
        CHECK(k.H2 == 1.0);
        CHECK(k.G1 == 0.0);
        CHECK(k.G2 == 0.0);
    }
    auto k = bulk_kernels<double>(12.0, {0.3}, {1.5});
    CHECK(std::abs(k.H1 - 1.0) < 1e-50);
    CHECK(std::abs(k.lnH1) < 1e-50);
    CHECK(std::abs(k.G1) < 1e-50);
    // t -> -infinity: H1 -> e^{u}, H2 -> e^{-u}.
    auto l = bulk_kernels<double>(-12.0, {0.3}, {1.5});
    CHECK(std::abs(l.H1 - std::exp(1.5)) < 1e-13);
    CHECK(std::abs(l.H2 - std::exp(-1.5)) < 1e-13);
}

TEST_CASE("single-jump kernels against direct formulas") {
    const double s = 0.4, u = -0.9, t = 0.35;
    auto k = bulk_kernels<double>(t, {s}, {u});
    CHECK(std::abs(k.H1 - (1.0 + std::expm1(u) * std::erfc(t - s) / 2.0)) < 1e-15);
    CHECK(std::abs(k.H2 - (1.0 + std::expm1(-u) * std::erfc(t + s) / 2.0)) < 1e-15);
    const double g = std::exp(-(t - s) * (t - s)) / std::sqrt(2.0 * M_PI);
    CHECK(std::abs(k.G1 - std::expm1(u) * g * (1 - 2 * s * s + t * s - 5 * t * t) / 3.0 / k.H1) < 1e-15);
}

TEST_CASE("H1 and H2 stay positive for real u") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> ut(-40.0, 40.0), uu(-4.0, 4.0), us(-3.0, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> s(1 + trial % 3), u(s.size());
        for (auto& v : s) v = us(gen);
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) continue;
        for (auto& v : u) v = uu(gen);
        auto k = bulk_kernels<double>(ut(gen), s, u);
        CHECK(k.H1 > 0.0);
        CHECK(k.H2 > 0.0);
    }
}

TEST_CASE("coeffs_bulk matches the oracle") {
    for (const auto& row : kCoeffs) {
        auto c = coeffs_bulk<double>(params(row.b, row.alpha, row.rho), row.r, row.s, row.u, 1e-12);
        CHECK(std::abs(c.C1 - row.C1) < 1e-15);
        CHECK(std::abs(c.C2 - row.C2) < 1e-10);
        CHECK(std::abs(c.C3 - row.C3) < 1e-10);
        CHECK(std::abs(c.C4 - row.C4) < 1e-10);
        CHECK(c.error_order == "(ln n)^2/n");
    }
}

TEST_CASE("linear coefficient and u = 0") {
    auto c = coeffs_bulk<double>(params(1.0, 0.0, 0.7), 0.5, {0.2}, {1.0});
    CHECK(std::abs(c.C1 - 0.25) < 1e-15);
    auto z = coeffs_bulk<double>(params(1.3, 0.2, 0.6), 0.3, {-0.2, 0.9}, {0.0, 0.0});
    CHECK(z.C1 == 0.0);
    CHECK(z.C2 == 0.0);
    CHECK(z.C3 == 0.0);
    CHECK(z.C4 == 0.0);
}

TEST_CASE("bulk first cumulant follows the mean density") {
    // The mean count grows by n b r_l^{2b}; expanding the radius gives sqrt(2) b r^b s.
    auto p = params(1.4, 0.3, 0.65);
    const double r = 0.45, s = 0.7;
    auto d = coeff_derivatives_bulk(p, r, {s}, {1});
    CHECK(std::abs(d.C1 - p.b * std::pow(r, 2 * p.b)) < 1e-12);
    CHECK(std::abs(d.C2 - std::sqrt(2.0) * p.b * std::pow(r, p.b) * s) < 1e-9);
}

TEST_CASE("residual against the exact MGF is small and shrinking") {
    auto p = params(1.0, 0.0, 0.7);
    const std::vector<double> s{0.3}, u{0.5};
    auto c = coeffs_bulk<double>(p, 0.4, s, u, 1e-12);
    double prev = 1.0;
    for (long n : {500L, 2000L, 8000L}) {
        p.n = n;
        const double exact = log_mgf_exact(p, radii_set(p, RadiiSpec::bulk(0.4, s, u)), u).log_mgf;
        const double sn = std::sqrt(double(n));
        const double res = std::abs(exact - (c.C1 * n + c.C2 * sn + c.C3 + c.C4 / sn));
        CHECK(res < prev / 3.0);
        prev = res;
    }
}

TEST_CASE("bulk statistics do not feel the wall") {
    auto p = params(1.0, 0.0, 0.7, 200);
    const double d200 = bulk_wall_sensitivity(p, 0.4, {0.3}, {0.5});
    p.n = 400;
    const double d400 = bulk_wall_sensitivity(p, 0.4, {0.3}, {0.5});
    CHECK(d200 < 1e-7);
    CHECK(d400 <= d200);
}

TEST_CASE("invalid bulk inputs") {
    auto p = params(1.0, 0.0, 0.7);
    CHECK_THROWS_AS(coeffs_bulk<double>(p, 0.8, {0.3}, {0.5}), DomainError);
    CHECK_THROWS_AS(coeffs_bulk<double>(p, 0.0, {0.3}, {0.5}), DomainError);
    CHECK_THROWS_AS(coeffs_bulk<double>(p, 0.4, {0.3, 0.3}, {0.5, 0.1}), DomainError);
    CHECK_THROWS_AS(coeffs_bulk<double>(p, 0.4, {0.3, 0.1}, {0.5, 0.1}), DomainError);
    CHECK_THROWS_AS(coeffs_bulk<double>(p, 0.4, {0.3}, {0.5, 0.1}), DomainError);
    CHECK_THROWS_AS(coeffs_bulk<double>(p, 0.4, {}, {}), DomainError);
    CHECK_THROWS_AS(bulk_kernels<double>(0.0, {0.3}, {}), DomainError);
    CHECK_THROWS_AS(bulk_kernels<double>(0.0, {0.3, -0.3}, {0.1, 0.1}), DomainError);
    CHECK_THROWS_AS(coeff_derivatives_bulk(p, 0.4, {0.3}, {1, 1}), DomainError);
}
