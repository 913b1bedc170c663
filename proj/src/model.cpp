#include "hwcount/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace hwcount {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

void require_monotone(const std::vector<double>& v, bool increasing, const char* what) {
    for (std::size_t k = 1; k < v.size(); ++k) {
        const bool ok = increasing ? v[k] > v[k - 1] : v[k] < v[k - 1];
        if (!ok)
            throw DomainError(std::string(what) + (increasing ? " must be strictly increasing"
                                                              : " must be strictly decreasing"));
    }
}

}  // namespace

void ModelParams::validate() const {
    if (!(std::isfinite(b) && b > 0.0)) throw DomainError("b must be positive, got " + fmt(b));
    if (!(std::isfinite(alpha) && alpha > -1.0))
        throw DomainError("alpha must exceed -1, got " + fmt(alpha));
    if (n < 1) throw DomainError("n must be at least 1");
    const double rmax = std::pow(b, -1.0 / (2.0 * b));
    if (!(std::isfinite(rho) && rho > 0.0 && rho < rmax))
        throw DomainError("rho must lie in (0, b^(-1/(2b))) = (0, " + fmt(rmax) + "), got " + fmt(rho));
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Physical: return "none";
        case Regime::HardEdge: return "hard";
        case Regime::SemiHard: return "semihard";
        case Regime::Bulk: return "bulk";
    }
    return "?";
}

RadiiSpec RadiiSpec::hard(std::vector<double> t, std::vector<double> u) {
    RadiiSpec s;
    s.regime = Regime::HardEdge;
    s.shape = std::move(t);
    s.u = std::move(u);
    return s;
}

RadiiSpec RadiiSpec::semihard(std::vector<double> sv, std::vector<double> u) {
    RadiiSpec s;
    s.regime = Regime::SemiHard;
    s.shape = std::move(sv);
    s.u = std::move(u);
    return s;
}

RadiiSpec RadiiSpec::bulk(double r, std::vector<double> sv, std::vector<double> u) {
    RadiiSpec s;
    s.regime = Regime::Bulk;
    s.r = r;
    s.shape = std::move(sv);
    s.u = std::move(u);
    return s;
}

RadiiSpec RadiiSpec::physical(std::vector<double> radii, std::vector<double> u) {
    RadiiSpec s;
    s.regime = Regime::Physical;
    s.radii = std::move(radii);
    s.u = std::move(u);
    return s;
}

std::size_t RadiiSpec::m() const { return regime == Regime::Physical ? radii.size() : shape.size(); }

void RadiiSpec::validate(const ModelParams& p) const {
    const std::size_t mm = m();
    if (mm == 0) throw DomainError("at least one radius is required");
    if (u.size() != mm)
        throw DomainError("u has " + std::to_string(u.size()) + " entries, expected " + std::to_string(mm));
    require_finite(u, "u");
    switch (regime) {
        case Regime::HardEdge:
            require_finite(shape, "t");
            require_monotone(shape, false, "t");
            if (shape.back() < 0.0) throw DomainError("t_m must be non-negative");
            break;
        case Regime::SemiHard:
            require_finite(shape, "s");
            require_monotone(shape, false, "s");
            if (!(shape.back() > 0.0)) throw DomainError("s_m must be positive");
            break;
        case Regime::Bulk:
            require_finite(shape, "s");
            require_monotone(shape, true, "s");
            if (!(r > 0.0 && r < p.rho)) throw DomainError("bulk radius r must lie in (0, rho)");
            break;
        case Regime::Physical:
            require_finite(radii, "radii");
            require_monotone(radii, true, "radii");
            if (!(radii.front() > 0.0 && radii.back() <= p.rho))
                throw DomainError("radii must lie in (0, rho]");
            break;
    }
}

RadiiSet radii_set_physical(const ModelParams& p, const std::vector<double>& radii) {
    p.validate();
    RadiiSpec s = RadiiSpec::physical(radii, std::vector<double>(radii.size(), 0.0));
    s.validate(p);
    RadiiSet out;
    out.radius = radii;
    for (double r : radii) out.log_ratio.push_back(2.0 * p.b * std::log(r / p.rho));
    return out;
}

RadiiSet radii_set(const ModelParams& p, const RadiiSpec& spec) {
    p.validate();
    spec.validate(p);
    if (spec.regime == Regime::Physical) return radii_set_physical(p, spec.radii);

    const double n = static_cast<double>(p.n);
    const double sqn = std::sqrt(n);
    RadiiSet out;
    for (double x : spec.shape) {
        double lr = 0.0;
        switch (spec.regime) {
            case Regime::HardEdge:
                if (!(x < n)) throw DomainError("hard-edge t_1 must be below n");
                lr = std::log1p(-x / n);
                break;
            case Regime::SemiHard: {
                const double d = std::sqrt(2.0) * x / (p.rho_b() * sqn);
                if (!(d < 1.0)) throw DomainError("semi-hard requires sqrt(2) s_1 < rho^b sqrt(n)");
                lr = std::log1p(-d);
                break;
            }
            case Regime::Bulk: {
                const double d = std::sqrt(2.0) * x / (std::pow(spec.r, p.b) * sqn);
                if (!(d > -1.0)) throw DomainError("bulk radius collapses to zero at this n");
                lr = 2.0 * p.b * std::log(spec.r / p.rho) + std::log1p(d);
                if (!(lr < 0.0)) throw DomainError("bulk radius reaches the wall at this n");
                break;
            }
            case Regime::Physical: break;
        }
        const double r = p.rho * std::exp(lr / (2.0 * p.b));
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("radius formula produced a non-positive value");
        out.radius.push_back(std::min(r, p.rho));
        out.log_ratio.push_back(lr);
    }
    for (std::size_t k = 1; k < out.radius.size(); ++k)
        if (!(out.log_ratio[k] > out.log_ratio[k - 1]))
            throw DomainError("radii are not strictly increasing at this n");
    return out;
}

std::vector<double> radii_from_spec(const ModelParams& p, const RadiiSpec& spec) {
    return radii_set(p, spec).radius;
}

EquilibriumSummary equilibrium_summary(const ModelParams& p, const RadiiSpec& spec) {
    p.validate();
    spec.validate(p);
    EquilibriumSummary e;
    e.c_rho = p.c_rho();
    const double su = std::accumulate(spec.u.begin(), spec.u.end(), 0.0);
    e.leading_linear = p.x0() * su;
    if (spec.regime == Regime::HardEdge && spec.shape.back() == 0.0) e.leading_linear += spec.u.back() * e.c_rho;
    return e;
}

}  // namespace hwcount
