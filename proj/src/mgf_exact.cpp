#include "hwcount/mgf_exact.hpp"

#include <cmath>
#include <string>

#include "hwcount/parallel.hpp"
#include "hwcount/specfun.hpp"

namespace hwcount {

namespace {

constexpr long kChunk = 4096;
constexpr long kPerTermLimit = 10000;

std::size_t chunk_count(long n) { return static_cast<std::size_t>((n + kChunk - 1) / kChunk); }

double magnitude(double x) { return std::abs(x); }
double magnitude(const cplx& z) { return std::abs(z); }

}  // namespace

ExactKernel::ExactKernel(const ModelParams& p, const RadiiSet& radii)
    : n_(p.n), m_(radii.log_ratio.size()) {
    p.validate();
    if (m_ == 0) throw DomainError("at least one radius is required");
    for (std::size_t l = 0; l < m_; ++l) {
        if (!(radii.log_ratio[l] <= 0.0)) throw DomainError("radii must not exceed the wall");
        if (l > 0 && !(radii.log_ratio[l] >= radii.log_ratio[l - 1]))
            throw DomainError("radii must be increasing");
    }
    const std::size_t total = static_cast<std::size_t>(n_) * m_;
    P_.assign(total, 0.0);
    Q_.assign(total, 0.0);
    const double z2 = static_cast<double>(n_) * p.rho_2b();
    parallel_chunks(chunk_count(n_), [&](std::size_t c) {
        const long lo = static_cast<long>(c) * kChunk + 1;
        const long hi = std::min(n_, lo + kChunk - 1);
        for (long j = lo; j <= hi; ++j) {
            const double a = (static_cast<double>(j) + p.alpha) / p.b;
            for (std::size_t l = 0; l < m_; ++l) {
                const double ell = radii.log_ratio[l];
                const double L = ell == 0.0 ? 0.0 : gamma_ratio_log_rel(a, z2, ell);
                P_[idx(j, l)] = std::exp(L);
                Q_[idx(j, l)] = -std::expm1(L);
            }
        }
    });
}

template <class T>
T ExactKernel::log_mgf(const std::vector<T>& u, std::vector<T>* per_term) const {
    if (u.size() != m_) throw DomainError("u must have one entry per radius");
    const auto w = jump_weights(u);
    T total_u(0);
    for (const T& v : u) total_u += v;
    if (per_term) per_term->assign(static_cast<std::size_t>(n_), T(0));

    const std::size_t chunks = chunk_count(n_);
    std::vector<T> partial(chunks, T(0));
    parallel_chunks(chunks, [&](std::size_t c) {
        const long lo = static_cast<long>(c) * kChunk + 1;
        const long hi = std::min(n_, lo + kChunk - 1);
        CompensatedSum<T> acc;
        for (long j = lo; j <= hi; ++j) {
            T sp(0), sq(0);
            double mp = 0.0, mq = 0.0;
            for (std::size_t l = 0; l < m_; ++l) {
                const double P = P_[idx(j, l)];
                const double Q = Q_[idx(j, l)];
                sp += w.omega[l] * P;
                sq += w.omega[l] * Q;
                mp += magnitude(w.omega[l]) * P;
                mq += magnitude(w.omega[l]) * Q;
            }
            // 1 + sum w P = Omega - sum w Q; expand around whichever side is nearer.
            const T term = mp <= mq ? log1ps(sp) : total_u + log1ps(-sq / w.Omega);
            if (per_term) (*per_term)[static_cast<std::size_t>(j - 1)] = term;
            acc.add(term);
        }
        partial[c] = acc.value();
    });
    CompensatedSum<T> sum;
    for (const T& v : partial) sum.add(v);
    return sum.value();
}

template double ExactKernel::log_mgf<double>(const std::vector<double>&, std::vector<double>*) const;
template cplx ExactKernel::log_mgf<cplx>(const std::vector<cplx>&, std::vector<cplx>*) const;

void validate_radii(const ModelParams& p, const std::vector<double>& radii, bool strict) {
    if (radii.empty()) throw DomainError("at least one radius is required");
    for (std::size_t l = 0; l < radii.size(); ++l) {
        if (!(radii[l] > 0.0 && radii[l] <= p.rho))
            throw DomainError("radius " + std::to_string(radii[l]) + " outside (0, rho]");
        if (l > 0 && !(strict ? radii[l] > radii[l - 1] : radii[l] >= radii[l - 1]))
            throw DomainError(strict ? "radii must be strictly increasing" : "radii must be increasing");
    }
}

ExactMgfResult log_mgf_exact(const ModelParams& p, const std::vector<double>& radii, const std::vector<double>& u) {
    p.validate();
    validate_radii(p, radii);
    return log_mgf_exact(p, radii_set_physical(p, radii), u);
}

ExactMgfResult log_mgf_exact(const ModelParams& p, const RadiiSet& radii, const std::vector<double>& u) {
    ExactKernel kernel(p, radii);
    ExactMgfResult out;
    out.params_echo = p;
    out.radii = radii.radius;
    bool zero = true;
    for (double v : u) zero = zero && v == 0.0;
    if (u.size() != kernel.m()) throw DomainError("u must have one entry per radius");
    if (zero) {
        if (p.n <= kPerTermLimit) out.per_term_logs = std::vector<double>(static_cast<std::size_t>(p.n), 0.0);
        return out;
    }
    if (p.n <= kPerTermLimit) {
        std::vector<double> terms;
        out.log_mgf = kernel.log_mgf(u, &terms);
        out.per_term_logs = std::move(terms);
    } else {
        out.log_mgf = kernel.log_mgf(u);
    }
    return out;
}

MeanVar mean_var_exact(const ModelParams& p, double r) {
    p.validate();
    validate_radii(p, {r});
    ExactKernel kernel(p, radii_set_physical(p, {r}));
    CompensatedSum<double> mean, var;
    for (long j = 1; j <= p.n; ++j) {
        mean.add(kernel.P(j, 0));
        var.add(kernel.P(j, 0) * kernel.Q(j, 0));
    }
    return {mean.value(), var.value()};
}

DerivativeResult cumulant_exact_checked(const ModelParams& p, const RadiiSet& radii, const MultiIndex& j,
                                        const DiffMethod& method) {
    ExactKernel kernel(p, radii);
    if (j.size() != kernel.m()) throw DomainError("multi-index must have one entry per radius");
    auto fc = [&](const std::vector<cplx>& u) { return kernel.log_mgf(u); };
    auto fr = [&](const std::vector<double>& u) { return kernel.log_mgf(u); };
    return checked_derivative(fc, fr, j, method);
}

double cumulants_exact(const ModelParams& p, const std::vector<double>& radii, const MultiIndex& j,
                       const DiffMethod& method) {
    p.validate();
    validate_radii(p, radii, false);
    RadiiSet set;
    set.radius = radii;
    for (double r : radii) set.log_ratio.push_back(2.0 * p.b * std::log(r / p.rho));
    return cumulant_exact_checked(p, set, j, method).value;
}

}  // namespace hwcount
