#pragma once

// Small numeric helpers that work for both real and complex scalars, so the
// coefficient code can be evaluated at complex test charges for contour
// differentiation.

#include <cmath>
#include <complex>
#include <type_traits>

namespace hwcount {

using cplx = std::complex<double>;

template <class T>
inline constexpr bool is_complex_v = false;
template <class R>
inline constexpr bool is_complex_v<std::complex<R>> = true;

inline double real_part(double x) { return x; }
inline double real_part(const cplx& z) { return z.real(); }

inline bool all_finite(double x) { return std::isfinite(x); }
inline bool all_finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline double expm1s(double x) { return std::expm1(x); }
inline cplx expm1s(const cplx& z) {
    const double x = z.real();
    const double y = z.imag();
    if (y == 0.0) return {std::expm1(x), 0.0};
    const double sh = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * sh * sh, std::exp(x) * std::sin(y)};
}

inline double log1ps(double x) { return std::log1p(x); }
inline cplx log1ps(const cplx& z) {
    const double x = z.real();
    const double y = z.imag();
    if (y == 0.0 && x > -1.0) return {std::log1p(x), 0.0};
    return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

// Neumaier compensated accumulator.
template <class T>
class CompensatedSum {
public:
    void add(const T& v) {
        if constexpr (is_complex_v<T>) {
            re_.add(v.real());
            im_.add(v.imag());
        } else {
            const T t = sum_ + v;
            if (std::abs(sum_) >= std::abs(v))
                comp_ += (sum_ - t) + v;
            else
                comp_ += (v - t) + sum_;
            sum_ = t;
        }
    }
    T value() const {
        if constexpr (is_complex_v<T>)
            return T(re_.value(), im_.value());
        else
            return sum_ + comp_;
    }

private:
    struct Empty {
        void add(double) {}
        double value() const { return 0.0; }
    };
    using Part = std::conditional_t<is_complex_v<T>, CompensatedSum<double>, Empty>;
    T sum_{};
    T comp_{};
    Part re_{};
    Part im_{};
};

}  // namespace hwcount
