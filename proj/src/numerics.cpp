#include "eese/numerics.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace eese {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;
constexpr double kInvELow = -1.2428753672788363e-17; // 1/e - kInvE
constexpr double kBranchSlack = 1e-12;
constexpr int kMaxIterations = 50;

// x + 1/e, accurate near the branch point (x + kInvE is exact there).
double branch_offset(double x)
{
    return (x + kInvE) + kInvELow;
}

// Puiseux series of W0 about -1/e in p = sqrt(2 (e x + 1)).
double branch_series(double p)
{
    constexpr double c[] = {-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0, -221.0 / 8505.0};
    double w = c[6];
    for (int k = 5; k >= 0; --k) w = w * p + c[k];
    return w;
}

double initial_guess(double x)
{
    if (x < -0.25) return branch_series(std::sqrt(2.0 * std::numbers::e * std::max(0.0, branch_offset(x))));
    const double l = std::log1p(x);
    return l * (1.0 - std::log1p(l) / (2.0 + l));
}

} // namespace

double lambert_w0(double x)
{
    if (!std::isfinite(x)) throw std::domain_error("lambert_w0: argument must be finite");
    const double offset = branch_offset(x);
    if (offset <= 0.0) {
        if (offset < -kBranchSlack) throw std::domain_error("lambert_w0: argument below -1/e");
        return -1.0;
    }
    if (x == 0.0) return 0.0;

    // Close to the branch point w e^w is too flat for iteration to resolve w;
    // the truncated series is accurate to p^7 < 1e-21 there.
    const double p = std::sqrt(2.0 * std::numbers::e * offset);
    if (p < 1e-3) return branch_series(p);

    double w = initial_guess(x);
    const double eps = std::numeric_limits<double>::epsilon();

    if (x > 20.0) {
        // Newton on w + ln(w) = ln(x); avoids overflow of exp(w) for huge x.
        const double log_x = std::log(x);
        for (int i = 0; i < kMaxIterations; ++i) {
            const double step = (w + std::log(w) - log_x) / (1.0 + 1.0 / w);
            w -= step;
            if (std::abs(step) <= 4.0 * eps * w) break;
        }
        return w;
    }

    for (int i = 0; i < kMaxIterations; ++i) {
        const double ew = std::exp(w);
        const double residual = w * ew - x;
        if (residual == 0.0) break;
        const double wp1 = w + 1.0;
        if (wp1 <= 0.0) {
            w = -1.0 + std::sqrt(eps);
            continue;
        }
        // Halley step.
        const double step = residual / (ew * wp1 - (w + 2.0) * residual / (2.0 * wp1));
        const double next = std::max(w - step, -1.0);
        const bool done = std::abs(next - w) <= 4.0 * eps * (1.0 + std::abs(next));
        w = next;
        if (done) break;
    }
    return w;
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : ComplexMatrix(rows, cols, std::vector<value_type>(rows * cols))
{
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<value_type> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries))
{
    if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("ComplexMatrix: empty shape");
    if (data_.size() != rows_ * cols_)
        throw std::invalid_argument("ComplexMatrix: entry count does not match shape");
    for (const auto& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n)
{
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double ComplexMatrix::frobenius_norm_sq() const
{
    double acc = 0.0;
    for (const auto& z : data_) acc += std::norm(z);
    return acc;
}

ComplexMatrix ComplexMatrix::conjugate_transpose() const
{
    ComplexMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
    return t;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols_ != b.rows_) throw std::invalid_argument("ComplexMatrix: shape mismatch in product");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const auto aik = a(i, k);
            for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

ComplexMatrix operator*(ComplexMatrix::value_type s, ComplexMatrix m)
{
    for (auto& z : m.data_) z *= s;
    return m;
}

std::vector<double> hermitian_eigenvalues(ComplexMatrix a)
{
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");

    // Rebuild from the upper triangle so the input is exactly Hermitian.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) a(j, i) = std::conj(a(i, j));
    }

    const double scale = a.frobenius_norm_sq();
    const double eps = std::numeric_limits<double>::epsilon();
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off <= eps * eps * scale) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const std::complex<double> z = a(p, q);
                const double r = std::abs(z);
                if (r == 0.0) continue;

                // J = diag(1, conj(phase)) * [[c, s], [-s, c]] zeroes a(p, q) under J^H a J.
                const std::complex<double> phase = z / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * r);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::hypot(t, 1.0);
                const double s = t * c;

                const std::complex<double> j_pp = c;
                const std::complex<double> j_pq = s;
                const std::complex<double> j_qp = -s * std::conj(phase);
                const std::complex<double> j_qq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const auto akp = a(k, p);
                    const auto akq = a(k, q);
                    a(k, p) = akp * j_pp + akq * j_qp;
                    a(k, q) = akp * j_pq + akq * j_qq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const auto apk = a(p, k);
                    const auto aqk = a(q, k);
                    a(p, k) = std::conj(j_pp) * apk + std::conj(j_qp) * aqk;
                    a(q, k) = std::conj(j_pq) * apk + std::conj(j_qq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * r;
                a(q, q) = aqq + t * r;
            }
        }
    }

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
    std::sort(eig.begin(), eig.end());
    return eig;
}

std::vector<double> svd_gains(const ComplexMatrix& h)
{
    const ComplexMatrix hh = h.conjugate_transpose();
    // Gram matrix of the smaller side: its eigenvalues are the squared singular values.
    const ComplexMatrix gram = h.cols() <= h.rows() ? hh * h : h * hh;

    std::vector<double> gains = hermitian_eigenvalues(gram);
    std::reverse(gains.begin(), gains.end());

    const double largest = std::max(gains.front(), 0.0);
    for (auto& g : gains)
        if (g < 1e-12 * largest || g < 0.0) g = 0.0;
    return gains;
}

} // namespace eese
