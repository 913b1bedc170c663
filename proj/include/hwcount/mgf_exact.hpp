#pragma once

#include <optional>
#include <vector>

#include "hwcount/cauchy.hpp"
#include "hwcount/model.hpp"

namespace hwcount {

struct ExactMgfResult {
    double log_mgf = 0.0;
    std::optional<std::vector<double>> per_term_logs;  // kept only for n <= 1e4
    ModelParams params_echo;
    std::vector<double> radii;
};

/// Per-particle inclusion probabilities P[j][l] = gamma(a_j, n r_l^{2b}) /
/// gamma(a_j, n rho^{2b}) with a_j = (j + alpha) / b, together with their
/// complements Q = 1 - P, both to full relative accuracy.
class ExactKernel {
public:
    ExactKernel(const ModelParams& p, const RadiiSet& radii);

    long n() const { return n_; }
    std::size_t m() const { return m_; }
    double P(long j, std::size_t l) const { return P_[idx(j, l)]; }
    double Q(long j, std::size_t l) const { return Q_[idx(j, l)]; }

    /// ln E[exp(sum_l u_l N(r_l))] for real or complex u, summed in ascending j
    /// with fixed chunks and compensated accumulation.
    template <class T>
    T log_mgf(const std::vector<T>& u, std::vector<T>* per_term = nullptr) const;

private:
    std::size_t idx(long j, std::size_t l) const { return static_cast<std::size_t>(j - 1) * m_ + l; }
    long n_;
    std::size_t m_;
    std::vector<double> P_;
    std::vector<double> Q_;
};

extern template double ExactKernel::log_mgf<double>(const std::vector<double>&, std::vector<double>*) const;
extern template cplx ExactKernel::log_mgf<cplx>(const std::vector<cplx>&, std::vector<cplx>*) const;

/// Checks radii increasing (strictly unless strict = false) in (0, rho];
/// throws DomainError otherwise.
void validate_radii(const ModelParams& p, const std::vector<double>& radii, bool strict = true);

ExactMgfResult log_mgf_exact(const ModelParams& p, const std::vector<double>& radii, const std::vector<double>& u);
/// Variant taking precomputed log-ratios, used for merging radii where
/// 1 - r/rho is below double resolution.
ExactMgfResult log_mgf_exact(const ModelParams& p, const RadiiSet& radii, const std::vector<double>& u);

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;
};

MeanVar mean_var_exact(const ModelParams& p, double r);

/// Joint cumulant of (N(r_1), ..., N(r_m)) for multi-index j, cross-checked
/// between contour and finite-difference differentiation. Repeated radii are
/// allowed here, so that kappa_(1,1)(r, r) is the variance of N(r).
DerivativeResult cumulant_exact_checked(const ModelParams& p, const RadiiSet& radii, const MultiIndex& j,
                                        const DiffMethod& method = {});
double cumulants_exact(const ModelParams& p, const std::vector<double>& radii, const MultiIndex& j,
                       const DiffMethod& method = {});

}  // namespace hwcount
