// Acceptance runner: one PASS/FAIL line per criterion. Exits 0 once every
// criterion has been evaluated; with --strict it exits 1 if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hwcount/asymp_bulk.hpp"
#include "hwcount/asymp_hard.hpp"
#include "hwcount/asymp_semihard.hpp"
#include "hwcount/ensemble_sim.hpp"
#include "hwcount/mgf_exact.hpp"
#include "hwcount/quad.hpp"
#include "hwcount/specfun.hpp"

using namespace hwcount;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

ModelParams params(double b, double alpha, double rho, long n = 1) {
    ModelParams p;
    p.b = b;
    p.alpha = alpha;
    p.rho = rho;
    p.n = n;
    return p;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

const std::vector<long> kGrid = {1000, 4000, 16000, 64000, 256000};

// R(n) = ln E_exact - (C1 n + C2 g(n) + C3 + C4 / sqrt(n)).
std::vector<double> residuals(const ModelParams& base, const RadiiSpec& spec, const ExpansionCoeffs& c,
                              bool log_gauge) {
    std::vector<double> out;
    for (long n : kGrid) {
        ModelParams p = base;
        p.n = n;
        const double nd = static_cast<double>(n);
        const double exact = log_mgf_exact(p, radii_set(p, spec), spec.u).log_mgf;
        const double gauge = log_gauge ? std::log(nd) : std::sqrt(nd);
        out.push_back(exact - (c.C1 * nd + c.C2 * gauge + c.C3 + c.C4 / std::sqrt(nd)));
    }
    return out;
}

// Fitted K(n) = |R(n)| n / (ln n)^power and the max/min spread.
std::pair<std::vector<double>, double> fit_k(const std::vector<double>& R, int power) {
    std::vector<double> K;
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
        const double n = static_cast<double>(kGrid[i]);
        K.push_back(std::abs(R[i]) * n / std::pow(std::log(n), power));
    }
    const auto [lo, hi] = std::minmax_element(K.begin(), K.end());
    return {K, *hi / *lo};
}

std::string join(const std::vector<double>& v, const char* f = "%.3g") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(f, v[i]);
    return s;
}

Outcome universal() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto k = universal_constants();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double dI = std::abs(k.I + 0.81367);
    const double d1 = std::abs(k.I1 - 0.5 * std::log(2.0 * std::sqrt(M_PI)));
    const double d3 = std::abs(k.I3 - k.I);
    const double d4 = std::abs(k.I4 - (k.I2 - k.I));
    return {dI <= 5e-5 && d1 <= 1e-10 && d3 <= 1e-7 && d4 <= 1e-7 && secs < 5.0,
            fmt("I=%.10f |I+0.81367|=%.2e |I1-ln(2sqrt(pi))/2|=%.2e |I3-I|=%.2e |I4-(I2-I)|=%.2e %.2fs", k.I, dI, d1, d3,
                d4, secs)};
}

Outcome temme() {
    const auto t0 = std::chrono::steady_clock::now();
    // P(1e4, 9e3) to 16 digits; P(1e4, 1.1e4) rounds to 1.
    const double lower = 2.073299202433928e-25;
    const double e09 = rel_err(temme_gamma_ratio(1e4, 0.9, 3), lower);
    const double e11 = rel_err(temme_gamma_ratio(1e4, 1.1, 3), 1.0);
    double worst = 0.0;
    for (int j = 0; j <= 4; ++j)
        for (int i = 0; i < 50; ++i) {
            const double lam = 0.2 + 4.8 * i / 49.0;
            worst = std::max(worst, std::abs(temme_coeff(j, lam).value - temme_coeff_recursive(j, lam)));
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {e09 <= 1e-9 && e11 <= 1e-9 && worst <= 1e-12 && secs < 5.0,
            fmt("rel err lambda=0.9: %.2e, lambda=1.1: %.2e; max |c_j - c_j^rec| = %.2e; %.2fs", e09, e11, worst, secs)};
}

double lower_gamma_integer(int k, double x) {
    double term = 1.0, sum = 0.0;
    for (int i = 0; i < k; ++i) {
        sum += term;
        term *= x / (i + 1);
    }
    return k == 1 ? -std::expm1(-x) : 1.0 - std::exp(-x) * sum;
}

Outcome degenerate() {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int nonzero = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double b = 0.3 + 2.7 * U(gen);
        const double alpha = -0.9 + 2.9 * U(gen);
        const double rho = (0.1 + 0.85 * U(gen)) * std::pow(b, -1.0 / (2.0 * b));
        const long n = 1 + static_cast<long>(2000 * U(gen));
        std::vector<double> radii(1 + trial % 4);
        for (auto& r : radii) r = rho * (0.05 + 0.95 * U(gen));
        std::sort(radii.begin(), radii.end());
        if (trial % 5 == 0) radii.back() = rho;
        const double v = log_mgf_exact(params(b, alpha, rho, n), radii, std::vector<double>(radii.size(), 0.0)).log_mgf;
        if (v != 0.0) ++nonzero;
    }

    double shift = 0.0;
    for (long n : {50L, 1000L, 5000L}) {
        auto p = params(1.3, 0.4, 0.65, n);
        const std::vector<double> u{0.4, -0.2, 0.3};
        const double with = log_mgf_exact(p, radii_set(p, RadiiSpec::hard({3.0, 1.0, 0.0}, u)), u).log_mgf;
        const double without = log_mgf_exact(p, radii_set(p, RadiiSpec::hard({3.0, 1.0}, {0.4, -0.2})), {0.4, -0.2}).log_mgf;
        shift = std::max(shift, std::abs(with - (static_cast<double>(n) * u[2] + without)));
    }

    // n = 1 with integer a = (1 + alpha) / b, where the lower gamma function is elementary.
    double single = 0.0;
    for (auto [b, alpha] : {std::pair{1.0, 0.0}, std::pair{1.0, 1.0}, std::pair{0.5, 0.0}, std::pair{2.0, 1.0}}) {
        const int a = static_cast<int>(std::lround((1.0 + alpha) / b));
        const double rho = 0.9 * std::pow(b, -1.0 / (2.0 * b));
        for (double r : {0.3 * rho, 0.7 * rho, rho})
            for (double u : {-2.0, -0.3, 0.5, 1.7}) {
                const double P = lower_gamma_integer(a, std::pow(r, 2 * b)) / lower_gamma_integer(a, std::pow(rho, 2 * b));
                const double want = std::log1p(std::expm1(u) * P);
                single = std::max(single, std::abs(log_mgf_exact(params(b, alpha, rho, 1), {r}, {u}).log_mgf - want));
            }
    }
    return {nonzero == 0 && shift <= 1e-10 && single <= 1e-12,
            fmt("non-zero at u=0: %d/100; shift identity gap %.2e; n=1 closed-form gap %.2e", nonzero, shift, single)};
}

Outcome hard_expansion() {
    const auto t0 = std::chrono::steady_clock::now();
    auto p = params(1.0, 0.0, 0.7);
    const auto spec = RadiiSpec::hard({2.0}, {0.5});
    const auto h = coeffs_hard<double>(p, spec.shape, spec.u);
    ExpansionCoeffs c;
    c.C1 = h.C1;
    c.C2 = h.C2;
    c.C3 = h.C3;
    c.C4 = h.C4;
    const auto R = residuals(p, spec, c, true);
    bool decreasing = true;
    for (std::size_t i = 1; i < R.size(); ++i) decreasing = decreasing && std::abs(R[i]) < std::abs(R[i - 1]);
    const double bound = std::abs(R.front()) * std::pow(256.0, -0.55);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<double> absR;
    for (double r : R) absR.push_back(std::abs(r));
    return {decreasing && std::abs(R.back()) <= bound && secs < 60.0,
            fmt("|R| = %s; strictly decreasing: %s; |R(2.56e5)| = %.3e vs bound %.3e; %.1fs", join(absR).c_str(),
                decreasing ? "yes" : "no", std::abs(R.back()), bound, secs)};
}

Outcome semihard_expansion() {
    const auto t0 = std::chrono::steady_clock::now();
    auto p = params(1.0, 0.0, 0.7);
    const auto spec = RadiiSpec::semihard({0.8}, {0.5});
    const auto c = coeffs_semihard<double>(p, spec.shape, spec.u);
    const auto R = residuals(p, spec, c, false);
    const auto [K, spread] = fit_k(R, 4);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {spread <= 3.0 && secs < 60.0,
            fmt("R = %s; K = |R| n/(ln n)^4 = %s; spread %.2f (limit 3); %.1fs", join(R).c_str(), join(K).c_str(), spread,
                secs)};
}

Outcome bulk_expansion() {
    const auto t0 = std::chrono::steady_clock::now();
    auto p = params(1.0, 0.0, 0.7);
    const double r = 0.4;
    const auto spec = RadiiSpec::bulk(r, {0.3}, {0.5});
    const auto c = coeffs_bulk<double>(p, r, spec.shape, spec.u);
    const auto R = residuals(p, spec, c, false);
    const auto [K, spread] = fit_k(R, 2);

    // Moving the wall from rho to rho + 0.05 must be invisible up to
    // exponentially small terms, shrinking sharply from n = 200 to 400.
    double d[2], floor[2];
    for (int i = 0; i < 2; ++i) {
        p.n = i == 0 ? 200 : 400;
        d[i] = bulk_wall_sensitivity(p, r, spec.shape, spec.u);
        floor[i] = 64.0 * 2.2e-16 * std::abs(log_mgf_exact(p, radii_set(p, spec), spec.u).log_mgf);
    }
    const bool wall = d[0] <= 1e-6 && (d[1] <= 0.01 * d[0] || d[1] <= floor[1]);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {spread <= 3.0 && wall && secs < 60.0,
            fmt("R = %s; K = |R| n/(ln n)^2 = %s; spread %.2f (limit 3); wall shift d(200) = %.2e, d(400) = %.2e "
                "(%s); %.1fs",
                join(R).c_str(), join(K).c_str(), spread, d[0], d[1], wall ? "insensitive" : "sensitive", secs)};
}

Outcome cumulant_consistency() {
    double worst_hard = 0.0, worst_semi = 0.0;
    bool ok = true;
    auto check = [&](double got, double want, double floor, double& worst) {
        const double lim = std::max(floor, floor * std::abs(want));
        worst = std::max(worst, std::abs(got - want) / lim);
        ok = ok && std::abs(got - want) <= lim;
    };
    for (auto p : {params(1.0, 0.0, 0.7), params(1.5, 0.4, 0.6)}) {
        for (auto [tl, tk] : {std::pair{2.0, 2.0}, std::pair{3.0, 1.0}, std::pair{0.7, 0.2}}) {
            const auto one = cumulant_coeffs_hard(p, tl);
            const auto d1 = coeff_derivatives_hard(p, {tl}, {1});
            for (auto [g, w] : {std::pair{d1.C1, one.b1}, {d1.C2, one.c1}, {d1.C3, one.d1}, {d1.C4, one.e1}})
                check(g, w, 1e-6, worst_hard);
            const auto pair = cumulant_coeffs_hard(p, tl, tk);
            const auto d11 = tl == tk ? coeff_derivatives_hard(p, {tl}, {2}) : coeff_derivatives_hard(p, {tl, tk}, {1, 1});
            for (auto [g, w] : {std::pair{d11.C1, pair.b11}, {d11.C2, pair.c11}, {d11.C3, pair.d11}, {d11.C4, pair.e11}})
                check(g, w, 1e-6, worst_hard);
        }
        for (auto [sl, sk] : {std::pair{0.8, 0.8}, std::pair{1.1, 0.5}, std::pair{2.5, 0.3}}) {
            const auto c = cumulant_coeffs_semihard(p, sl, sk, 1e-11, false);
            const auto d1 = coeff_derivatives_semihard(p, {sl}, {1});
            for (auto [g, w] : {std::pair{d1.C1, c.b1}, {d1.C2, c.c1}, {d1.C3, c.d1}, {d1.C4, c.e1}})
                check(g, w, 1e-5, worst_semi);
            const auto d11 =
                sl == sk ? coeff_derivatives_semihard(p, {sl}, {2}) : coeff_derivatives_semihard(p, {sl, sk}, {1, 1});
            for (auto [g, w] : {std::pair{d11.C1, 0.0}, {d11.C2, c.c11}, {d11.C3, c.d11}, {d11.C4, c.e11}})
                check(g, w, 1e-5, worst_semi);
        }
    }
    return {ok, fmt("largest gap / tolerance: hard %.2e, semi-hard %.2e (pass at <= 1)", worst_hard,
                    worst_semi)};
}

Outcome variance_peak_check() {
    auto p = params(1.0, 0.0, 0.7);
    const auto v = variance_peak(p);
    const double c = p.c_rho();
    const double ts = v.t_star * c / p.b, bs = v.b11_star / c;
    const double gap = std::abs(v.t_golden - v.t_star);
    return {std::abs(ts - 1.2564) <= 1e-4 && std::abs(bs - 0.20363) <= 1e-4 && gap <= 1e-6,
            fmt("t* (1-b rho^2b)/b = %.6f, b11*/(1-b rho^2b) = %.6f, |t_golden - t*| = %.2e", ts, bs, gap)};
}

Outcome monte_carlo() {
    const auto t0 = std::chrono::steady_clock::now();
    const double b = 1.0;
    auto p = params(b, 0.0, 0.8 * std::pow(b, -1.0 / (2.0 * b)), 4096);
    const auto c = cumulant_coeffs_hard(p, 2.0);
    const double n = static_cast<double>(p.n), ln = std::log(n), sq = std::sqrt(n);
    const double mean = c.b1 * n + c.c1 * ln + c.d1 + c.e1 / sq;
    const double var = c.b11 * n + c.c11 * ln + c.d11 + c.e11 / sq;
    const auto batch = sample_batch(p, radii_set(p, RadiiSpec::hard({2.0}, {0.0})), 2000, 42);
    const auto e = empirical_cumulants(batch, {mean}, {std::sqrt(var)});
    const double zm = (e.mean[0] - mean) / e.se_mean[0], zv = (e.var[0] - var) / e.se_var[0];
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::abs(zm) <= 3.0 && std::abs(zv) <= 3.0 && e.ks[0] < e.ks_critical && secs < 600.0,
            fmt("mean %.3f vs %.3f (z=%.2f); var %.3f vs %.3f (z=%.2f); KS %.4f vs crit %.4f; %.1fs", e.mean[0], mean,
                zm, e.var[0], var, zv, e.ks[0], e.ks_critical, secs)};
}

Outcome determinism() {
    const std::vector<std::vector<std::string>> commands = {
        {"constants"},
        {"peak", "--rho", "0.7"},
        {"coeffs", "--regime", "hard", "--rho", "0.7", "--t", "2,0.5", "--u", "0.5,-0.3"},
        {"exact", "--rho", "0.7", "--n", "20000", "--regime", "semihard", "--s", "1.2,0.4", "--u", "0.3,0.2"},
        {"cumulants", "--regime", "bulk", "--rho", "0.7", "--r", "0.4", "--n", "3000", "--s", "0.3,0.8"},
        {"compare", "--regime", "hard", "--rho", "0.7", "--t", "2", "--u", "0.5", "--n-grid", "1000,4000,16000"},
        {"sample", "--regime", "hard", "--rho", "0.8", "--n", "4096", "--t", "2", "--replicates", "500", "--seed", "9"},
    };
    const std::regex runtime(R"((\n  "runtime_ms": [^\n]*)|(\r\nruntime_ms,[^\r]*))");
    int identical = 0, total = 0;
    for (const auto& base : commands)
        for (const char* output : {"json", "csv"}) {
            std::string ref;
            bool same = true;
            for (const char* threads : {"1", "3", "8"}) {
                auto args = base;
                args.insert(args.end(), {"--output", output, "--threads", threads});
                std::ostringstream out, err;
                if (cli::cli_main(args, out, err) != 0) same = false;
                const std::string text = std::regex_replace(out.str(), runtime, "");
                if (ref.empty()) ref = text;
                same = same && text == ref && !text.empty();
            }
            ++total;
            identical += same;
        }
    return {identical == total,
            fmt("%d/%d command/format pairs byte-identical across thread caps 1, 3, 8", identical, total)};
}

}  // namespace

int main(int argc, char** argv) {
    const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"universal constants", universal},
        {"Temme kernel", temme},
        {"degenerate exactness", degenerate},
        {"hard-edge expansion", hard_expansion},
        {"semi-hard expansion", semihard_expansion},
        {"bulk expansion", bulk_expansion},
        {"cumulant coefficient consistency", cumulant_consistency},
        {"variance peak", variance_peak_check},
        {"Monte Carlo", monte_carlo},
        {"determinism", determinism},
    };
    int passed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        passed += o.pass;
        std::printf("criterion %2zu %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/%zu criteria pass\n", passed, criteria.size());
    return strict && passed != static_cast<int>(criteria.size()) ? 1 : 0;
}
