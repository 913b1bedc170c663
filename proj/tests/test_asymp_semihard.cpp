#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hwcount/asymp_semihard.hpp"

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
    double b, alpha, rho;
    std::vector<double> s, u;
    double C1, C2, C3, C4;
};

const std::vector<CoeffRow> kCoeffs = {
    {1.0, 0.0, 0.7, {0.8}, {0.5}, 0.245, -0.19537153235173496, -0.27664442269358331, -0.016890703197786651},
    {1.0, 0.0, 0.6, {0.8, 0.3}, {0.3, -0.2}, 0.036, -0.28741466974969017, 0.00074960988895050312,
     0.0032891462885821255},
    {1.5, 0.4, 0.6, {1.2, 0.7, 0.25}, {0.4, -0.6, 0.9}, 0.2268, 1.5682850874085385, -1.0323806445304656,
     -0.047564410849043146},
};

// u-derivatives of (C2, C3, C4) at u = 0 for b = 1, alpha = 0, rho = 0.7.
const double kSingle[3] = {-0.52687334270146315, -0.41760119990228648, 0.0065862746128179434};
const double kPair[3] = {0.20384560290499278, -0.28928791258009474, -0.030221596326767364};
const double kEqual[3] = {0.53529796369825052, -0.54328012161452559, -0.16307873477699141};

}  // namespace

TEST_CASE("kernels at u = 0") {
    for (double y : {-20.0, -1.0, 0.0, 0.4, 7.0, 35.0}) {
        auto k = semihard_kernels<double>(y, {1.1, 0.2}, {0.0, 0.0});
        CHECK(k.g0 == 1.0);
        CHECK(k.g1 == 0.0);
        CHECK(k.g2 == 0.0);
        CHECK(k.h0 == 0.0);
        CHECK(k.h0_sub == 0.0);
    }
}

TEST_CASE("single-jump g0 against direct erfc ratios") {
    const double s = 0.65, u = -0.8;
    for (double y : {-3.0, -0.5, 0.0, 1.2, 4.0}) {
        const double direct = 1.0 + std::expm1(u) * std::erfc(y + s) / std::erfc(y);
        auto k = semihard_kernels<double>(y, {s}, {u});
        CHECK(std::abs(k.g0 - direct) < 1e-14);
        CHECK(std::abs(k.h0 - std::log(direct)) < 1e-14);
    }
}

TEST_CASE("kernels decay in both directions") {
    const std::vector<double> s{1.4, 0.8}, u{0.7, -1.1};
    auto far_left = semihard_kernels<double>(-30.0, s, u);
    auto far_right = semihard_kernels<double>(30.0, s, u);
    CHECK(std::abs(far_left.h0 - (u[0] + u[1])) < 1e-13);
    CHECK(std::abs(far_left.h0_sub) < 1e-30);
    CHECK(std::abs(far_left.h1) < 1e-30);
    CHECK(std::abs(far_left.h2) < 1e-30);
    // Exponential decay at rate 2 s_min on the right.
    CHECK(std::abs(far_right.g0 - 1.0) < 1e-18);
    CHECK(std::abs(far_right.h1) < 1e-15);
    CHECK(std::abs(far_right.h2) < 1e-12);
}

TEST_CASE("g0 stays positive for real u") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> uy(-50.0, 50.0), uu(-3.0, 3.0), us(0.05, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> s(1 + trial % 3), u(s.size());
        for (auto& v : s) v = us(gen);
        std::sort(s.begin(), s.end(), std::greater<>());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) continue;
        for (auto& v : u) v = uu(gen);
        auto k = semihard_kernels<double>(uy(gen), s, u);
        CHECK(k.g0 > 0.0);
        CHECK(std::isfinite(k.h0_sub));
        CHECK(std::isfinite(k.h1));
        CHECK(std::isfinite(k.h2));
    }
}

TEST_CASE("coeffs_semihard matches the oracle") {
    for (const auto& row : kCoeffs) {
        auto c = coeffs_semihard<double>(params(row.b, row.alpha, row.rho), row.s, row.u);
        CHECK(std::abs(c.C1 - row.C1) < 1e-15);
        CHECK(std::abs(c.C2 - row.C2) < 1e-10);
        CHECK(std::abs(c.C3 - row.C3) < 1e-10);
        CHECK(std::abs(c.C4 - row.C4) < 1e-10);
        CHECK(c.error_order == "(ln n)^4/n");
    }
}

TEST_CASE("coefficients vanish at u = 0") {
    auto c = coeffs_semihard<double>(params(1.2, 0.3, 0.5), {0.9, 0.4}, {0.0, 0.0});
    CHECK(c.C1 == 0.0);
    CHECK(std::abs(c.C2) < 1e-14);
    CHECK(std::abs(c.C3) < 1e-14);
    CHECK(std::abs(c.C4) < 1e-14);
}

TEST_CASE("complex evaluation agrees with real evaluation on the real axis") {
    auto p = params(1.0, 0.0, 0.7);
    auto r = coeffs_semihard<double>(p, {0.8, 0.3}, {0.4, -0.2});
    auto z = coeffs_semihard<cplx>(p, {0.8, 0.3}, {cplx(0.4, 0.0), cplx(-0.2, 0.0)});
    CHECK(std::abs(z.C2 - r.C2) < 1e-12);
    CHECK(std::abs(z.C3 - r.C3) < 1e-12);
    CHECK(std::abs(z.C4 - r.C4) < 1e-12);
}

TEST_CASE("cumulant coefficients match the oracle") {
    auto p = params(1.0, 0.0, 0.7);
    auto a = cumulant_coeffs_semihard(p, 0.8, 0.3, 1e-12, false);
    CHECK(std::abs(a.b1 - 0.49) < 1e-15);
    CHECK(std::abs(a.c1 - kSingle[0]) < 1e-10);
    CHECK(std::abs(a.d1 - kSingle[1]) < 1e-10);
    CHECK(std::abs(a.e1 - kSingle[2]) < 1e-10);
    CHECK(std::abs(a.c11 - kPair[0]) < 1e-10);
    CHECK(std::abs(a.d11 - kPair[1]) < 1e-10);
    CHECK(std::abs(a.e11 - kPair[2]) < 1e-10);
    CHECK(a.max_gap == 0.0);
    auto e = cumulant_coeffs_semihard(p, 0.8, std::nullopt, 1e-12, false);
    CHECK(e.s_k == 0.8);
    CHECK(std::abs(e.c11 - kEqual[0]) < 1e-10);
    CHECK(std::abs(e.d11 - kEqual[1]) < 1e-10);
    CHECK(std::abs(e.e11 - kEqual[2]) < 1e-10);
    CHECK(std::abs(c11_semihard(p, 0.8, 0.3) - kPair[0]) < 1e-10);
}

TEST_CASE("closed forms pass the contour cross-check") {
    auto p = params(1.3, 0.4, 0.62);
    auto c = cumulant_coeffs_semihard(p, 1.1, 0.5);
    CHECK(c.max_gap < 1e-8);
    auto d = coeff_derivatives_semihard(p, {1.1}, {1});
    CHECK(std::abs(d.C1 - c.b1) < 1e-12);
    CHECK(std::abs(d.C2 - c.c1) < 1e-8);
    CHECK(std::abs(d.C3 - c.d1) < 1e-8);
    CHECK(std::abs(d.C4 - c.e1) < 1e-8);
}

TEST_CASE("leading covariance structure") {
    auto p = params(1.0, 0.5, 0.7);
    const double lead = std::sqrt(2.0) * p.b * std::pow(p.rho, p.b);
    for (double s : {0.1, 0.4, 1.0, 2.5, 6.0}) CHECK(c11_semihard(p, s, s) > 0.0);
    // Far from the wall the variance saturates and the mean shift becomes linear in s.
    CHECK(std::abs(c11_semihard(p, 9.0, 9.0) - c11_semihard(p, 12.0, 12.0)) < 1e-12);
    auto far = cumulant_coeffs_semihard(p, 9.0, std::nullopt, 1e-11, false);
    CHECK(std::abs(far.c1 + lead * 9.0) < 1e-10);
    CHECK(std::abs(c11_semihard(p, 6.0, 0.5)) <= std::sqrt(c11_semihard(p, 6.0, 6.0) * c11_semihard(p, 0.5, 0.5)));
}

TEST_CASE("normal-limit covariance") {
    auto p = params(1.0, 0.0, 0.7);
    auto one = clt_covariance_semihard(p, {1.3});
    CHECK(one[0][0] == 1.0);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> us(0.05, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> s(1 + trial % 4);
        for (auto& v : s) v = us(gen);
        std::sort(s.begin(), s.end(), std::greater<>());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        auto c = clt_covariance_semihard(p, s);
        Eigen::MatrixXd M(s.size(), s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t k = 0; k < s.size(); ++k) {
                M(i, k) = c[i][k];
                CHECK(std::abs(c[i][k]) <= 1.0);
            }
        CHECK(M.isApprox(M.transpose()));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("invalid semi-hard inputs") {
    auto p = params(1.0, 0.0, 0.7);
    CHECK_THROWS_AS(coeffs_semihard<double>(p, {0.3, 0.8}, {0.1, 0.1}), DomainError);
    CHECK_THROWS_AS(coeffs_semihard<double>(p, {0.8, 0.8}, {0.1, 0.1}), DomainError);
    CHECK_THROWS_AS(coeffs_semihard<double>(p, {0.8, 0.0}, {0.1, 0.1}), DomainError);
    CHECK_THROWS_AS(coeffs_semihard<double>(p, {}, {}), DomainError);
    CHECK_THROWS_AS(coeffs_semihard<double>(p, {0.8}, {0.1, 0.2}), DomainError);
    CHECK_THROWS_AS(cumulant_coeffs_semihard(p, 0.3, 0.8), DomainError);
    CHECK_THROWS_AS(cumulant_coeffs_semihard(p, -0.3), DomainError);
    CHECK_THROWS_AS(c11_semihard(p, 0.8, std::nan("")), DomainError);
    CHECK_THROWS_AS(coeff_derivatives_semihard(p, {0.8}, {1, 1}), DomainError);
    p.rho = 1.2;
    CHECK_THROWS_AS(coeffs_semihard<double>(p, {0.8}, {0.1}), DomainError);
}
