#pragma once

#include <vector>

#include "hwcount/cauchy.hpp"
#include "hwcount/expansion.hpp"
#include "hwcount/model.hpp"

namespace hwcount {

template <class T>
struct BulkKernelsT {
    double t = 0.0;
    T H1{}, H2{}, G1{}, G2{};
    T lnH1{}, lnH2{};  // ln H1, ln H2 computed as log1p of the sums
};
using BulkKernels = BulkKernelsT<double>;

/// Throws DomainError unless s is strictly increasing.
void validate_bulk_s(const std::vector<double>& s);

/// Throws PositivityViolation if H1 or H2 is not positive for real u.
template <class T>
BulkKernelsT<T> bulk_kernels(double t, const std::vector<double>& s, const std::vector<T>& u);

/// Radii r (1 + sqrt(2) s_l / (r^b sqrt(n)))^{1/(2b)} with 0 < r < rho.
template <class T>
ExpansionCoeffsT<T> coeffs_bulk(const ModelParams& p, double r, const std::vector<double>& s,
                                const std::vector<T>& u, double tol = 1e-11);

/// Cumulant coefficients d^j C_k / du^j at u = 0 by contour differentiation.
struct BulkDerivatives {
    double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
};
BulkDerivatives coeff_derivatives_bulk(const ModelParams& p, double r, const std::vector<double>& s,
                                       const MultiIndex& j, double delta = 0.5, double tol = 1e-11);

/// |ln E_n(wall rho) - ln E_n(wall rho + shift)| for the bulk radii at p.n.
double bulk_wall_sensitivity(const ModelParams& p, double r, const std::vector<double>& s,
                             const std::vector<double>& u, double shift = 0.05);

}  // namespace hwcount
