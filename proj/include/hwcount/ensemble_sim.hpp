#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "hwcount/model.hpp"

namespace hwcount {

/// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Uniform draw in (0, 1) for particle j of a replicate: the counter is
/// (j, replicate) and the key is the seed, so draws do not depend on the
/// order in which replicates are processed.
double uniform_draw(std::uint64_t seed, std::uint64_t replicate, std::uint64_t j);

/// Moduli |z_1|, ..., |z_n| of one replicate. Particle j has distribution
/// function P(a_j, n r^{2b}) / P(a_j, n rho^{2b}) on [0, rho], inverted in
/// y = n r^{2b} by bisection followed by Newton.
std::vector<double> sample_moduli(const ModelParams& p, std::uint64_t seed, std::uint64_t replicate = 0);

/// counts[l] = #{j : moduli[j] < radii[l]}.
std::vector<long> count_statistics(const std::vector<double>& moduli, const std::vector<double>& radii);

struct SampleBatch {
    std::vector<long> counts;  // replicates x m, row-major
    long replicates = 0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    ModelParams params_echo;
    std::vector<double> radii;

    long count(long replicate, std::size_t l) const { return counts[static_cast<std::size_t>(replicate) * m + l]; }
};

/// Disk counts for `replicates` independent configurations. Uses the same
/// uniforms as sample_moduli and compares them with the per-particle
/// inclusion probabilities, which yields the counts without inverting the
/// distribution functions. Bitwise independent of the thread cap.
SampleBatch sample_batch(const ModelParams& p, const RadiiSet& radii, long replicates, std::uint64_t seed);
SampleBatch sample_batch(const ModelParams& p, const std::vector<double>& radii, long replicates,
                         std::uint64_t seed);

/// Kolmogorov-Smirnov distance between the sample and a continuous cdf.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Asymptotic 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(long N);

struct EmpiricalCumulants {
    long replicates = 0;
    std::vector<double> mean, var;
    std::vector<std::vector<double>> cov;
    std::vector<double> se_mean, se_var;  // jackknife; se_var is NaN for two replicates
    std::vector<std::vector<double>> se_cov;
    std::vector<std::vector<double>> normalized;  // replicates x m, empty without centering
    std::vector<double> ks;                       // KS distance of each normalized column to N(0, 1)
    double ks_critical = 0.0;
};

/// Unbiased sample moments with jackknife standard errors. With centering
/// and scale (one entry per radius), also the normalized counts
/// (N_l - centering_l) / scale_l and their KS distance to a standard normal.
/// Throws InsufficientReplicates below two replicates.
EmpiricalCumulants empirical_cumulants(const SampleBatch& batch, const std::vector<double>& centering = {},
                                       const std::vector<double>& scale = {});

}  // namespace hwcount
