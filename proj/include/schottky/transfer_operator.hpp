#pragma once

// Finite Taylor-basis discretization of the twisted transfer operator
//
//   (L_{s,theta} f)(z) = sum_{i != j+r} [(S_i^{-1})'(z)]^s chi_theta(S_i) f(S_i^{-1} z),
//   z in D_j,
//
// acting on holomorphic functions over the disk union. Basis functions on
// disk i are the monomials ((z - c_i)/r_i)^n for n <= M; block (i, j)
// holds the Taylor coefficients on D_j of each weighted, composed basis
// monomial, extracted by circle sampling at radius tau * r_j. The complex
// power uses the branch positive on the real axis, tracked by argument
// continuation along the sample circle (zero winding is asserted: the
// squared denominator is zero-free on the closed disk for Schottky data).
//
// det(I - A) then approximates L_Gamma(s, theta) with an error decaying
// exponentially in M; trace(A^n) matches the periodic-orbit sums assembled
// from cyclically admissible words.

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/linalg.hpp"
#include "schottky/schottky_group.hpp"
#include "schottky/word_store.hpp"
#include "schottky/words.hpp"

namespace schottky {

struct TransferParams {
    int truncation = 16;         // M, Taylor degree per disk
    double radius_factor = 0.75; // tau, sampling circle radius as fraction of disk radius

    void validate() const {
        if (truncation < 4) throw std::invalid_argument("transfer truncation must be >= 4");
        if (!(radius_factor > 0.0 && radius_factor < 1.0))
            throw std::invalid_argument("transfer radius factor must lie in (0,1)");
    }
};

class OperatorMatrix {
public:
    OperatorMatrix(std::uint64_t fingerprint, Complex s, Character theta, int truncation, int rank,
                   ComplexMatrix matrix, double max_aliasing)
        : fingerprint_(fingerprint),
          s_(s),
          theta_(std::move(theta)),
          truncation_(truncation),
          rank_(rank),
          matrix_(std::move(matrix)),
          max_aliasing_(max_aliasing) {}

    std::uint64_t fingerprint() const { return fingerprint_; }
    Complex s() const { return s_; }
    const Character& theta() const { return theta_; }
    int truncation() const { return truncation_; }
    int rank() const { return rank_; }
    int dimension() const { return matrix_.size(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    double max_aliasing() const { return max_aliasing_; }

    // entry of block (source disk i, target disk j): coefficient m on D_j
    // of the image of basis monomial n on D_i
    Complex block_entry(int source, int target, int m, int n) const {
        const int b = truncation_ + 1;
        return matrix_(target * b + m, source * b + n);
    }

private:
    std::uint64_t fingerprint_;
    Complex s_;
    Character theta_;
    int truncation_;
    int rank_;
    ComplexMatrix matrix_;
    double max_aliasing_;
};

namespace detail {

// Samples of log[(S_i^{-1})'(z)] = -log[(c z + d)^2] on the circle around
// disk j, with the argument unwrapped along the circle and anchored at the
// k = 0 sample, which lies on the real axis where the derivative is
// positive. Throws if the argument winds around zero.
inline std::vector<Complex> log_derivative_samples(const MoebiusMap& inv,
                                                   const std::vector<Complex>& z) {
    const std::size_t k_count = z.size();
    std::vector<Complex> logs(k_count);
    const double pi = std::acos(-1.0);
    double arg_prev = 0.0;
    Complex h_prev;
    for (std::size_t k = 0; k < k_count; ++k) {
        const Complex denom = inv.c * z[k] + inv.d;
        const Complex h = denom * denom;
        double arg;
        if (k == 0) {
            arg = std::arg(h);  // real positive anchor; ~0 by construction
            if (std::abs(arg) > 1e-9)
                throw InvalidGroupError("branch anchor is not positive real");
        } else {
            const double step = std::arg(h / h_prev);
            if (std::abs(step) > 0.5 * pi)
                throw InvalidGroupError("branch tracking step too large on sample circle");
            arg = arg_prev + step;
        }
        logs[k] = Complex(std::log(std::abs(h)), arg);
        arg_prev = arg;
        h_prev = h;
    }
    const double closure = arg_prev + std::arg((inv.c * z[0] + inv.d) * (inv.c * z[0] + inv.d) / h_prev);
    if (std::abs(closure) > 1e-6)
        throw InvalidGroupError("derivative argument winds around zero on sample circle");
    // weight = exp(-s * logs[k]); derivative in s multiplies by -logs[k]
    return logs;
}

}  // namespace detail

// Assembles A(s, theta, M), optionally together with dA/ds (sharing the
// sampling pass). The s-derivative enters through the weight factor only:
// d/ds exp(-s log h) = -log h * exp(-s log h).
inline std::pair<OperatorMatrix, ComplexMatrix> assemble_with_derivative(
    const SchottkyGroup& g, Complex s, const Character& theta, const TransferParams& params,
    bool want_derivative) {
    params.validate();
    if (theta.rank() != g.rank())
        throw std::invalid_argument("character rank does not match group rank");
    const int m_deg = params.truncation;
    const int b = m_deg + 1;
    const int n_sym = g.alphabet_size();
    const int dim = n_sym * b;
    const int k_count = 4 * b;
    const double two_pi = 2.0 * std::acos(-1.0);

    ComplexMatrix a(dim);
    ComplexMatrix da(want_derivative ? dim : 0);
    double max_alias = 0.0;

    std::vector<Complex> z(k_count), logs, weight(k_count), dweight(k_count), u(k_count),
        upow(k_count), samples(k_count), dsamples(k_count);

    for (int j = 0; j < n_sym; ++j) {  // target disk
        const Disk& dj = g.disk(j);
        const double tau = params.radius_factor;
        for (int k = 0; k < k_count; ++k) {
            const double t = two_pi * k / k_count;
            z[k] = dj.center + tau * dj.radius * Complex(std::cos(t), std::sin(t));
        }
        for (int i = 0; i < n_sym; ++i) {  // source disk / generator
            if (i == g.inverse_index(j)) continue;
            const MoebiusMap inv = g.generator(i).inverse();
            const Complex chi = character_letter_value(theta, i);
            logs = detail::log_derivative_samples(inv, z);
            const Disk& di = g.disk(i);
            for (int k = 0; k < k_count; ++k) {
                weight[k] = std::exp(-s * logs[k]) * chi;
                if (want_derivative) dweight[k] = -logs[k] * weight[k];
                u[k] = (evaluate(inv, z[k]).image - di.center) / di.radius;
                upow[k] = 1.0;
            }
            for (int n = 0; n <= m_deg; ++n) {
                for (int k = 0; k < k_count; ++k) samples[k] = weight[k] * upow[k];
                const TaylorResult tr = taylor_coefficients(samples, tau, m_deg);
                max_alias = std::max(max_alias, tr.aliasing_ratio);
                for (int m = 0; m <= m_deg; ++m) a(j * b + m, i * b + n) = tr.coefficients[m];
                if (want_derivative) {
                    for (int k = 0; k < k_count; ++k) dsamples[k] = dweight[k] * upow[k];
                    const TaylorResult dtr = taylor_coefficients(dsamples, tau, m_deg);
                    for (int m = 0; m <= m_deg; ++m) da(j * b + m, i * b + n) = dtr.coefficients[m];
                }
                for (int k = 0; k < k_count; ++k) upow[k] *= u[k];
            }
        }
    }
    return {OperatorMatrix(g.fingerprint(), s, theta, m_deg, g.rank(), std::move(a), max_alias),
            std::move(da)};
}

inline OperatorMatrix assemble(const SchottkyGroup& g, Complex s, const Character& theta,
                               const TransferParams& params = {}) {
    return assemble_with_derivative(g, s, theta, params, false).first;
}

inline ComplexMatrix identity_minus(const ComplexMatrix& a) {
    ComplexMatrix m(a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) m(i, j) = ((i == j) ? 1.0 : 0.0) - a(i, j);
    return m;
}

// det(I - A(s, theta, M)); approximates L_Gamma(s, theta).
inline Complex fredholm_determinant(const SchottkyGroup& g, Complex s, const Character& theta,
                                    const TransferParams& params = {}) {
    const OperatorMatrix op = assemble(g, s, theta, params);
    return lu_determinant(identity_minus(op.matrix())).value;
}

struct DeterminantAndLogDerivative {
    Complex determinant;
    Complex log_derivative;  // L'(s)/L(s) = -trace((I-A)^{-1} A')
};

// One assembly pass yields both the determinant and its logarithmic
// s-derivative via d log det(I - A) = -trace((I - A)^{-1} A').
inline DeterminantAndLogDerivative determinant_and_log_derivative(const SchottkyGroup& g, Complex s,
                                                                  const Character& theta,
                                                                  const TransferParams& params = {}) {
    auto [op, da] = assemble_with_derivative(g, s, theta, params, true);
    const int dim = op.dimension();
    LuFactorization lu(identity_minus(op.matrix()));
    DeterminantAndLogDerivative out;
    out.determinant = lu.determinant();
    Complex tr = 0.0;
    std::vector<Complex> col(dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) col[i] = da(i, j);
        lu.solve_in_place(col);
        tr += col[j];
    }
    out.log_derivative = -tr;
    return out;
}

// Periodic-orbit trace of the n-th operator power:
//   t_n(s, theta) = sum over cyclically admissible words w of length n of
//                   chi_theta(w) e^{-s ell(w)} / (1 - e^{-ell(w)}).
inline Complex trace_power(WordStore& store, Complex s, const Character& theta, int n) {
    const WordTable& t = store.table(n);
    Complex sum = 0.0;
    for (std::size_t row = 0; row < t.count(); ++row) {
        const double ell = t.length(row);
        sum += character_abelianized(theta, t.abelianization(row)) * std::exp(-s * ell) /
               (1.0 - std::exp(-ell));
    }
    return sum;
}

struct TraceSeries {
    std::vector<Complex> traces;   // t_1 .. t_{n_max}
    Complex log_determinant;       // -sum t_n / n
    double tail_bound = 0.0;       // empirical bound on the dropped tail
    bool tail_warning = false;     // bound above 1e-6 (or not estimable)

    Complex determinant() const { return std::exp(log_determinant); }
};

// log det(I - L) via the orbit series, truncated at n_max. The tail is
// estimated from the measured decay ratio of the absolute trace sums
// (no a-priori trace-norm constant is usable here), with a safety factor
// of 3; treat the result as an L-value only where the bound is small.
inline TraceSeries orbit_log_det(WordStore& store, Complex s, const Character& theta, int n_max) {
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    TraceSeries out;
    std::vector<double> abs_traces;
    for (int n = 1; n <= n_max; ++n) {
        const WordTable& t = store.table(n);
        Complex sum = 0.0;
        double abs_sum = 0.0;
        for (std::size_t row = 0; row < t.count(); ++row) {
            const double ell = t.length(row);
            const double mag = std::exp(-s.real() * ell) / (1.0 - std::exp(-ell));
            sum += character_abelianized(theta, t.abelianization(row)) *
                   std::exp(Complex(0.0, -s.imag() * ell)) * mag;
            abs_sum += mag;
        }
        out.traces.push_back(sum);
        abs_traces.push_back(abs_sum);
        out.log_determinant -= sum / static_cast<double>(n);
    }
    if (n_max >= 2 && abs_traces[n_max - 2] > 0.0) {
        const double q = abs_traces[n_max - 1] / abs_traces[n_max - 2];
        if (q < 0.95) {
            out.tail_bound = 3.0 * abs_traces[n_max - 1] * q / ((1.0 - q) * (n_max + 1));
        } else {
            out.tail_bound = std::numeric_limits<double>::infinity();
        }
    } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
    }
    out.tail_warning = !(out.tail_bound <= 1e-6);
    return out;
}

}  // namespace schottky
