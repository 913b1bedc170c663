#pragma once

#include <string>

namespace hwcount {

/// ln E ~ C1 n + C2 sqrt(n) + C3 + C4 / sqrt(n) (semi-hard and bulk regimes).
template <class T>
struct ExpansionCoeffsT {
    T C1{}, C2{}, C3{}, C4{};
    std::string error_order;
    double err_est = 0.0;  // summed quadrature error estimates
};
using ExpansionCoeffs = ExpansionCoeffsT<double>;

}  // namespace hwcount
