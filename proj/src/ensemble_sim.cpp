#include "hwcount/ensemble_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hwcount/mgf_exact.hpp"
#include "hwcount/parallel.hpp"
#include "hwcount/specfun.hpp"

namespace hwcount {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Invert ln F(y) = ln_u on (0, y_max] in v = ln y, where F(y) = P(a, y) / P(a, y_max).
double invert_modulus(double a, double y_max, double ln_u) {
    const double v_max = std::log(y_max);
    const double lg = std::lgamma(a);
    auto g = [&](double v) { return gamma_ratio_log(a, std::min(std::exp(v), y_max), y_max) - ln_u; };
    // d ln F / dv = y^a e^{-y} / gamma(a, y).
    auto dg = [&](double v) {
        const double y = std::exp(v);
        return std::exp(a * v - y - lg - log_gamma_p(a, y));
    };
    double hi = v_max, lo = v_max + ln_u / a - 1.0;
    while (g(lo) > 0.0) lo -= 2.0 * (v_max - lo) + 1.0;
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
    }
    double v = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        const double step = g(v) / dg(v);
        double next = v - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        (g(next) > 0.0 ? hi : lo) = next;
        if (std::abs(next - v) < 1e-12 * std::max(1.0, std::abs(v))) return next;
        v = next;
    }
    return v;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double jackknife_se(const std::vector<double>& theta) {
    const double N = static_cast<double>(theta.size());
    double mean = 0.0;
    for (double t : theta) mean += t;
    mean /= N;
    double ss = 0.0;
    for (double t : theta) ss += (t - mean) * (t - mean);
    return std::sqrt((N - 1.0) / N * ss);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kW0;
            k[1] += kW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

double uniform_draw(std::uint64_t seed, std::uint64_t replicate, std::uint64_t j) {
    const auto out = philox4x32({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32),
                                 static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32)},
                                {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const std::uint64_t x = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> sample_moduli(const ModelParams& p, std::uint64_t seed, std::uint64_t replicate) {
    p.validate();
    const double nd = static_cast<double>(p.n);
    const double y_max = nd * p.rho_2b();
    std::vector<double> out(static_cast<std::size_t>(p.n));
    for (long j = 1; j <= p.n; ++j) {
        const double a = (static_cast<double>(j) + p.alpha) / p.b;
        const double v = invert_modulus(a, y_max, std::log(uniform_draw(seed, replicate, j)));
        // r = rho (y / y_max)^{1/(2b)}
        out[j - 1] = std::min(p.rho, p.rho * std::exp((v - std::log(y_max)) / (2.0 * p.b)));
    }
    return out;
}

std::vector<long> count_statistics(const std::vector<double>& moduli, const std::vector<double>& radii) {
    std::vector<double> sorted = moduli;
    std::sort(sorted.begin(), sorted.end());
    std::vector<long> counts;
    counts.reserve(radii.size());
    for (double r : radii) counts.push_back(std::lower_bound(sorted.begin(), sorted.end(), r) - sorted.begin());
    return counts;
}

SampleBatch sample_batch(const ModelParams& p, const RadiiSet& radii, long replicates, std::uint64_t seed) {
    p.validate();
    if (replicates < 1) throw DomainError("at least one replicate is required");
    const ExactKernel kernel(p, radii);
    const std::size_t m = kernel.m();
    SampleBatch batch;
    batch.replicates = replicates;
    batch.m = m;
    batch.seed = seed;
    batch.params_echo = p;
    batch.radii = radii.radius;
    batch.counts.assign(static_cast<std::size_t>(replicates) * m, 0);

    constexpr long kChunk = 16;
    const auto n_chunks = static_cast<std::size_t>((replicates + kChunk - 1) / kChunk);
    parallel_chunks(n_chunks, [&](std::size_t c) {
        const long first = static_cast<long>(c) * kChunk;
        const long end = std::min(replicates, first + kChunk);
        for (long rep = first; rep < end; ++rep) {
            long* row = &batch.counts[static_cast<std::size_t>(rep) * m];
            for (long j = 1; j <= p.n; ++j) {
                const double U = uniform_draw(seed, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(j));
                for (std::size_t l = 0; l < m; ++l)
                    if (U < kernel.P(j, l)) ++row[l];
            }
        }
    });
    return batch;
}

SampleBatch sample_batch(const ModelParams& p, const std::vector<double>& radii, long replicates,
                         std::uint64_t seed) {
    validate_radii(p, radii, false);
    return sample_batch(p, radii_set_physical(p, radii), replicates, seed);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw InsufficientReplicates("KS statistic needs at least one observation");
    std::sort(sample.begin(), sample.end());
    const double N = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = cdf(sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / N - F, F - static_cast<double>(i) / N});
    }
    return d;
}

double ks_critical_1pct(long N) {
    const double s = std::sqrt(static_cast<double>(N));
    return 1.6276 / (s + 0.12 + 0.11 / s);
}

EmpiricalCumulants empirical_cumulants(const SampleBatch& batch, const std::vector<double>& centering,
                                       const std::vector<double>& scale) {
    const long R = batch.replicates;
    if (R < 2) throw InsufficientReplicates("empirical cumulants need at least two replicates");
    const std::size_t m = batch.m;
    if (centering.size() != scale.size() || (!centering.empty() && centering.size() != m))
        throw DomainError("centering and scale need one entry per radius");
    const double N = static_cast<double>(R);

    EmpiricalCumulants out;
    out.replicates = R;
    out.mean.assign(m, 0.0);
    for (long i = 0; i < R; ++i)
        for (std::size_t l = 0; l < m; ++l) out.mean[l] += static_cast<double>(batch.count(i, l));
    for (auto& v : out.mean) v /= N;

    // Centered data and their cross sums.
    std::vector<double> x(static_cast<std::size_t>(R) * m);
    for (long i = 0; i < R; ++i)
        for (std::size_t l = 0; l < m; ++l)
            x[static_cast<std::size_t>(i) * m + l] = static_cast<double>(batch.count(i, l)) - out.mean[l];
    auto X = [&](long i, std::size_t l) { return x[static_cast<std::size_t>(i) * m + l]; };
    std::vector<std::vector<double>> S(m, std::vector<double>(m, 0.0));
    for (long i = 0; i < R; ++i)
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t c = a; c < m; ++c) S[a][c] += X(i, a) * X(i, c);

    out.cov.assign(m, std::vector<double>(m, 0.0));
    out.se_cov.assign(m, std::vector<double>(m, std::numeric_limits<double>::quiet_NaN()));
    out.var.assign(m, 0.0);
    out.se_var.assign(m, std::numeric_limits<double>::quiet_NaN());
    out.se_mean.assign(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t c = a; c < m; ++c) {
            out.cov[a][c] = out.cov[c][a] = S[a][c] / (N - 1.0);
            if (R < 3) continue;
            // Leave-one-out covariances from the centered sums (the column sums vanish).
            std::vector<double> theta(static_cast<std::size_t>(R));
            for (long i = 0; i < R; ++i) {
                const double ma = -X(i, a) / (N - 1.0), mc = -X(i, c) / (N - 1.0);
                theta[i] = (S[a][c] - X(i, a) * X(i, c) - (N - 1.0) * ma * mc) / (N - 2.0);
            }
            out.se_cov[a][c] = out.se_cov[c][a] = jackknife_se(theta);
        }
        out.var[a] = out.cov[a][a];
        out.se_var[a] = out.se_cov[a][a];
        // The jackknife error of the mean is the usual s / sqrt(N).
        out.se_mean[a] = std::sqrt(out.var[a] / N);
    }

    out.ks_critical = ks_critical_1pct(R);
    if (!centering.empty()) {
        out.normalized.assign(static_cast<std::size_t>(R), std::vector<double>(m));
        out.ks.assign(m, 0.0);
        for (std::size_t l = 0; l < m; ++l) {
            if (!(scale[l] > 0.0)) throw DomainError("normalization scale must be positive");
            std::vector<double> col(static_cast<std::size_t>(R));
            for (long i = 0; i < R; ++i) {
                col[i] = (static_cast<double>(batch.count(i, l)) - centering[l]) / scale[l];
                out.normalized[i][l] = col[i];
            }
            out.ks[l] = ks_statistic(std::move(col), normal_cdf);
        }
    }
    return out;
}

}  // namespace hwcount
