#pragma once

// Self-contained dense complex linear algebra and circle quadrature.
// Matrix sizes in this project stay at a few hundred, so plain
// triple-loop kernels at double precision are entirely adequate.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "schottky/errors.hpp"

namespace schottky {

using Complex = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int size() const { return n_; }

    Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    const std::vector<Complex>& data() const { return a_; }

private:
    int n_ = 0;
    std::vector<Complex> a_;
};

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.size();
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

inline Complex trace(const ComplexMatrix& a) {
    Complex t = 0.0;
    for (int i = 0; i < a.size(); ++i) t += a(i, i);
    return t;
}

// LU factorization with partial pivoting. Kept around after factor() so
// that one factorization can serve a determinant and many solves.
class LuFactorization {
public:
    explicit LuFactorization(ComplexMatrix m) : lu_(std::move(m)) {
        const int n = lu_.size();
        piv_.resize(n);
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::abs(lu_(k, k));
            for (int i = k + 1; i < n; ++i) {
                const double v = std::abs(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            piv_[k] = p;
            if (p != k) {
                for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                ++swaps_;
            }
            const Complex pivot = lu_(k, k);
            if (pivot == 0.0) {
                singular_ = true;
                continue;
            }
            for (int i = k + 1; i < n; ++i) {
                const Complex l = lu_(i, k) / pivot;
                lu_(i, k) = l;
                if (l == 0.0) continue;
                for (int j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
            }
        }
    }

    bool singular() const { return singular_; }

    // Product of pivots (exact for diagonal/triangular inputs); may
    // overflow to inf for wildly scaled matrices -- see log_determinant.
    Complex determinant() const {
        if (singular_) return 0.0;
        Complex det = (swaps_ % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i < lu_.size(); ++i) det *= lu_(i, i);
        return det;
    }

    // log|det| + i arg(det), accumulated pivot by pivot so it stays finite
    // when the determinant itself leaves double range.
    Complex log_determinant() const {
        double lg = 0.0;
        double arg = (swaps_ % 2 == 0) ? 0.0 : std::acos(-1.0);
        for (int i = 0; i < lu_.size(); ++i) {
            const Complex p = lu_(i, i);
            lg += std::log(std::abs(p));
            arg += std::arg(p);
        }
        return {lg, arg};
    }

    // Solve LU x = b in place (b is overwritten with x).
    void solve_in_place(std::vector<Complex>& b) const {
        const int n = lu_.size();
        for (int k = 0; k < n; ++k)
            if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
        for (int i = 1; i < n; ++i) {
            Complex s = b[i];
            for (int j = 0; j < i; ++j) s -= lu_(i, j) * b[j];
            b[i] = s;
        }
        for (int i = n - 1; i >= 0; --i) {
            Complex s = b[i];
            for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * b[j];
            b[i] = s / lu_(i, i);
        }
    }

private:
    ComplexMatrix lu_;
    std::vector<int> piv_;
    int swaps_ = 0;
    bool singular_ = false;
};

struct DeterminantResult {
    Complex value;       // valid only when !overflowed
    Complex log_value;   // log|det| + i arg(det), always valid (unless det == 0)
    bool overflowed = false;
};

inline DeterminantResult lu_determinant(const ComplexMatrix& a) {
    LuFactorization lu(a);
    DeterminantResult r;
    r.value = lu.determinant();
    r.log_value = lu.log_determinant();
    const double lg = r.log_value.real();
    r.overflowed = !lu.singular() && (lg > 700.0 || lg < -700.0 || !std::isfinite(std::abs(r.value)));
    return r;
}

struct EigenvalueResult {
    double value = 0.0;
    double residual = 0.0;   // ||A v - lambda v|| / ||v||
    int iterations = 0;
    std::vector<Complex> vector;
};

// Dominant eigenvalue by power iteration with a Rayleigh quotient.
// Intended for matrices whose leading eigenvalue is simple, real and
// positive (transfer operators at real s); throws ConvergenceError with
// the achieved residual otherwise.
inline EigenvalueResult leading_eigenvalue(const ComplexMatrix& a, double tol = 1e-13,
                                           int max_iterations = 100000) {
    const int n = a.size();
    std::vector<Complex> v(n, Complex(1.0, 0.0));
    std::vector<Complex> w(n);
    double norm_v = std::sqrt(static_cast<double>(n));
    for (auto& x : v) x /= norm_v;

    Complex lambda = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iterations; ++it) {
        for (int i = 0; i < n; ++i) {
            Complex s = 0.0;
            for (int j = 0; j < n; ++j) s += a(i, j) * v[j];
            w[i] = s;
        }
        Complex num = 0.0;
        double den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += std::conj(v[i]) * w[i];
            den += std::norm(v[i]);
        }
        lambda = num / den;
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) r2 += std::norm(w[i] - lambda * v[i]);
        residual = std::sqrt(r2 / den);
        double norm_w = 0.0;
        for (int i = 0; i < n; ++i) norm_w += std::norm(w[i]);
        norm_w = std::sqrt(norm_w);
        if (norm_w == 0.0) throw ConvergenceError("power iteration collapsed to the zero vector");
        for (int i = 0; i < n; ++i) v[i] = w[i] / norm_w;
        if (residual <= tol * std::max(1.0, std::abs(lambda))) break;
    }
    if (residual > tol * std::max(1.0, std::abs(lambda)))
        throw ConvergenceError("power iteration did not converge; residual " + std::to_string(residual));
    if (std::abs(lambda.imag()) > 1e-8 * std::max(1.0, std::abs(lambda)))
        throw ConvergenceError("dominant eigenvalue is not real; imag " + std::to_string(lambda.imag()));

    EigenvalueResult r;
    r.value = lambda.real();
    r.residual = residual;
    r.iterations = it + 1;
    r.vector = std::move(v);
    return r;
}

struct TaylorResult {
    std::vector<Complex> coefficients;  // c_0 .. c_M
    double aliasing_ratio = 0.0;        // |c_M| / max_m |c_m|
    bool aliased = false;               // ratio > 1e-8
};

// Taylor coefficients of a holomorphic f from K equispaced samples on the
// circle |w| = tau:  c_m = tau^{-m} (1/K) sum_k f(tau e^{2 pi i k/K}) e^{-2 pi i k m/K}.
inline TaylorResult taylor_coefficients(const std::vector<Complex>& samples, double tau, int degree) {
    const int k_count = static_cast<int>(samples.size());
    if (k_count < 2 * degree + 2)
        throw std::invalid_argument("taylor_coefficients: need K >= 2M+2 samples");
    if (!(tau > 0.0)) throw std::invalid_argument("taylor_coefficients: tau must be positive");

    std::vector<Complex> roots(k_count);
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int j = 0; j < k_count; ++j) {
        const double t = -two_pi * j / k_count;
        roots[j] = Complex(std::cos(t), std::sin(t));
    }

    TaylorResult r;
    r.coefficients.resize(degree + 1);
    double tau_pow = 1.0;
    for (int m = 0; m <= degree; ++m) {
        Complex s = 0.0;
        for (int k = 0; k < k_count; ++k)
            s += samples[k] * roots[static_cast<std::size_t>(k) * m % k_count];
        r.coefficients[m] = s / (static_cast<double>(k_count) * tau_pow);
        tau_pow *= tau;
    }
    double peak = 0.0;
    for (const auto& c : r.coefficients) peak = std::max(peak, std::abs(c));
    if (peak > 0.0) r.aliasing_ratio = std::abs(r.coefficients[degree]) / peak;
    r.aliased = r.aliasing_ratio > 1e-8;
    return r;
}

}  // namespace schottky
