#pragma once

#include "eese/errors.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace eese {

/// Principal branch W0 of the Lambert W function: the w >= -1 solving w*exp(w) = x.
///
/// Arguments down to -1/e - 1e-12 are accepted and clamped onto the branch
/// point. Anything below that, or a non-finite argument, raises std::domain_error.
double lambert_w0(double x);

/// Root of a monotone function by bisection.
///
/// Requires f(lo) and f(hi) to differ in sign (a zero at either end is
/// returned directly). The result is the midpoint of a bracket no wider than tol.
template <class F>
double bisect(F&& f, double lo, double hi, double tol)
{
    if (!(lo < hi)) throw std::invalid_argument("bisect: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("bisect: need tol > 0");

    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (std::signbit(f_lo) == std::signbit(f_hi) || std::isnan(f_lo) || std::isnan(f_hi))
        throw bracket_error("bisect: no sign change on [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");

    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break; // bracket at floating-point resolution
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

/// Dense complex matrix, row-major.
class ComplexMatrix {
public:
    using value_type = std::complex<double>;

    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<value_type> entries);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<value_type>& entries() const noexcept { return data_; }

    double frobenius_norm_sq() const;
    ComplexMatrix conjugate_transpose() const;

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(value_type s, ComplexMatrix m);

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<value_type> data_;
};

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations, ascending.
/// Only the upper triangle and diagonal real parts are trusted.
std::vector<double> hermitian_eigenvalues(ComplexMatrix a);

/// Eigen-channel power gains of h: squared singular values, sorted descending,
/// min(rows, cols) of them. Gains below 1e-12 of the largest are set to 0.
std::vector<double> svd_gains(const ComplexMatrix& h);

} // namespace eese
