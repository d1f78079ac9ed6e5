#pragma once

// Spectral quantities read off the Fredholm determinant: the Hausdorff
// dimension delta (largest real zero / leading eigenvalue 1), truncated
// Euler products, certified zero counting and location by the argument
// principle, the Artin-Takagi factorization check, and the finite-cover
// gap experiments over the characters of (Z/NZ)^r.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/linalg.hpp"
#include "schottky/schottky_group.hpp"
#include "schottky/transfer_operator.hpp"
#include "schottky/word_store.hpp"
#include "schottky/words.hpp"

namespace schottky {

struct Box {
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;

    static Box centered(Complex c, double half_width) {
        return {c.real() - half_width, c.real() + half_width, c.imag() - half_width,
                c.imag() + half_width};
    }
    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    double diameter() const { return std::hypot(width(), height()); }
    Complex center() const { return {(re_lo + re_hi) / 2.0, (im_lo + im_hi) / 2.0}; }
    bool contains(Complex z, double slack = 0.0) const {
        return z.real() >= re_lo - slack && z.real() <= re_hi + slack &&
               z.imag() >= im_lo - slack && z.imag() <= im_hi + slack;
    }
    Box expanded(double margin) const {
        return {re_lo - margin, re_hi + margin, im_lo - margin, im_hi + margin};
    }
    std::string describe() const {
        return "[" + format_real(re_lo) + "," + format_real(re_hi) + "]x[" + format_real(im_lo) +
               "," + format_real(im_hi) + "]";
    }
};

// ---------------------------------------------------------------------------
// Hausdorff dimension

struct DeltaResult {
    double delta = 0.0;           // bisection on leading eigenvalue == 1
    double eigenvalue_residual = 0.0;  // |lambda(delta) - 1|
    double determinant_zero = 0.0;     // real zero of det(I - A) near delta
    int bisection_steps = 0;
};

namespace detail {

inline double transfer_leading_eigenvalue(const SchottkyGroup& g, double s,
                                          const TransferParams& params) {
    const OperatorMatrix op = assemble(g, s, Character::trivial(g.rank()), params);
    return leading_eigenvalue(op.matrix()).value;
}

}  // namespace detail

// delta in (0,1) with leading eigenvalue of L_delta equal to 1, located by
// bisection (the eigenvalue is strictly decreasing in real s), then
// cross-checked against the real zero of the Fredholm determinant via a
// few Newton steps on log det.
inline DeltaResult hausdorff_dimension(const SchottkyGroup& g, double tol = 1e-12,
                                       const TransferParams& params = {}) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    double lo = 1e-4, hi = 0.999;
    double f_lo = detail::transfer_leading_eigenvalue(g, lo, params);
    double f_hi = detail::transfer_leading_eigenvalue(g, hi, params);
    if (!(f_lo > 1.0 && f_hi < 1.0))
        throw ConvergenceError("leading eigenvalue does not bracket 1 on (0,1): lambda(" +
                               format_real(lo) + ")=" + format_real(f_lo) + ", lambda(" +
                               format_real(hi) + ")=" + format_real(f_hi));
    DeltaResult out;
    while (hi - lo > 0.25 * tol && out.bisection_steps < 200) {
        const double mid = 0.5 * (lo + hi);
        const double lambda = detail::transfer_leading_eigenvalue(g, mid, params);
        (lambda > 1.0 ? lo : hi) = mid;
        ++out.bisection_steps;
    }
    out.delta = 0.5 * (lo + hi);
    out.eigenvalue_residual = std::abs(detail::transfer_leading_eigenvalue(g, out.delta, params) - 1.0);

    // determinant cross-check: Newton on the simple real zero
    const Character triv = Character::trivial(g.rank());
    double s = out.delta;
    for (int it = 0; it < 12; ++it) {
        const auto dl = determinant_and_log_derivative(g, s, triv, params);
        if (std::abs(dl.determinant) < 1e-300) break;
        const double step = -1.0 / dl.log_derivative.real();
        s += step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(s))) break;
    }
    out.determinant_zero = s;
    return out;
}

// ---------------------------------------------------------------------------
// Euler product

struct EulerResult {
    Complex value = 1.0;
    double tail_bound = 0.0;       // empirical bound on |true - truncated|
    bool divergence_warning = false;
    std::size_t classes_used = 0;
};

// Truncated Euler product over primitive conjugacy classes (necklace
// representatives of cyclically admissible words) of word length <= L_max,
// with the k-product cut once factors are within 1e-16 of 1. The class
// tail is estimated from the measured geometric decay of the per-length
// class sums, with a safety factor of 3.
inline EulerResult euler_product_truncated(WordStore& store, Complex s, int L_max,
                                           const Character& theta) {
    if (L_max < 0) throw std::invalid_argument("L_max must be >= 0");
    EulerResult out;
    if (L_max == 0) {
        out.tail_bound = std::numeric_limits<double>::infinity();
        out.divergence_warning = true;
        return out;
    }
    const double ell_min = store.group().min_generator_length();
    std::vector<double> class_sums;  // sum over primitive classes of e^{-Re s * ell}
    for (int n = 1; n <= L_max; ++n) {
        const WordTable& table = store.table(n);
        const auto rows = primitive_necklace_rows(table);
        double class_sum = 0.0;
        for (std::size_t row : rows) {
            const double ell = table.length(row);
            const Complex chi = character_abelianized(theta, table.abelianization(row));
            class_sum += std::exp(-s.real() * ell);
            for (int k = 0; k < 400; ++k) {
                if (std::exp(-(s.real() + k) * ell) < 1e-16) break;
                out.value *= 1.0 - chi * std::exp(-(s + static_cast<double>(k)) * ell);
            }
        }
        out.classes_used += rows.size();
        class_sums.push_back(class_sum);
    }
    const double k_extension = 1.0 / (1.0 - std::exp(-ell_min));
    if (L_max >= 2 && class_sums[L_max - 2] > 0.0) {
        const double ratio = class_sums[L_max - 1] / class_sums[L_max - 2];
        if (ratio < 0.95) {
            const double log_tail = 1.2 * k_extension * class_sums[L_max - 1] * ratio / (1.0 - ratio);
            out.tail_bound = 3.0 * std::abs(out.value) * log_tail + 1e-13;
        } else {
            out.tail_bound = std::numeric_limits<double>::infinity();
            out.divergence_warning = true;
        }
    } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
    }
    return out;
}

inline EulerResult euler_product_truncated(WordStore& store, Complex s, int L_max) {
    return euler_product_truncated(store, s, L_max, Character::trivial(store.group().rank()));
}

// ---------------------------------------------------------------------------
// Argument-principle zero counting

struct ZeroSearchOptions {
    double edge_tolerance = 0.02;   // absolute, per contour edge, on the raw integral
    int max_quad_depth = 22;
    int min_quad_depth = 3;
    int max_nudges = 6;
    int max_subdivision_depth = 40;
    long max_evaluations_per_box = 2500;  // quadrature budget; exhaustion fails the certificate
    double certificate_half_width_floor = 2e-6;  // keeps |L| on certificate contours clean
};

struct CountResult {
    int count = 0;
    double residual = std::numeric_limits<double>::infinity();
    Box box;                 // box actually integrated (after any nudges)
    Complex integral = 0.0;  // (1/2 pi i) contour integral of L'/L
    bool certified = false;
    long evaluations = 0;
};

namespace detail {

// One character slice of the L-function: cached evaluator for the
// determinant and its logarithmic derivative.
class LSlice {
public:
    LSlice(const SchottkyGroup& g, Character theta, TransferParams params)
        : g_(&g), theta_(std::move(theta)), params_(params) {}

    DeterminantAndLogDerivative eval(Complex s) const {
        ++evaluations_;
        return determinant_and_log_derivative(*g_, s, theta_, params_);
    }

    // determinant only (no derivative assembly, no solves); used by the
    // boundary cleanliness probe
    Complex eval_determinant(Complex s) const {
        ++evaluations_;
        return fredholm_determinant(*g_, s, theta_, params_);
    }

    long evaluations() const { return evaluations_; }

private:
    const SchottkyGroup* g_;
    Character theta_;
    TransferParams params_;
    mutable long evaluations_ = 0;
};

inline Complex adaptive_edge(const LSlice& slice, Complex p, Complex q, Complex fp, Complex fq,
                             double tol, int depth, const ZeroSearchOptions& opts, bool& converged,
                             long& evals_left) {
    if (evals_left <= 0) {
        converged = false;
        return 0.5 * (fp + fq) * (q - p);
    }
    --evals_left;
    const Complex m = 0.5 * (p + q);
    const Complex fm = slice.eval(m).log_derivative;
    const Complex whole = 0.5 * (fp + fq) * (q - p);
    const Complex halves = 0.25 * (fp + 2.0 * fm + fq) * (q - p);
    if (depth >= opts.min_quad_depth && std::abs(halves - whole) <= tol) return halves;
    if (depth >= opts.max_quad_depth) {
        if (std::abs(halves - whole) > 8.0 * tol) converged = false;
        return halves;
    }
    return adaptive_edge(slice, p, m, fp, fm, 0.5 * tol, depth + 1, opts, converged, evals_left) +
           adaptive_edge(slice, m, q, fm, fq, 0.5 * tol, depth + 1, opts, converged, evals_left);
}

inline double boundary_min_abs(const LSlice& slice, const Box& b) {
    const Complex corners[5] = {{b.re_lo, b.im_lo},
                                {b.re_hi, b.im_lo},
                                {b.re_hi, b.im_hi},
                                {b.re_lo, b.im_hi},
                                {b.re_lo, b.im_lo}};
    double min_abs = std::numeric_limits<double>::infinity();
    for (int e = 0; e < 4; ++e) {
        for (int k = 0; k < 8; ++k) {
            const Complex z = corners[e] + (corners[e + 1] - corners[e]) * (k / 8.0);
            min_abs = std::min(min_abs, std::abs(slice.eval_determinant(z)));
        }
    }
    return min_abs;
}

inline CountResult count_zeros_impl(const LSlice& slice, Box box, const ZeroSearchOptions& opts) {
    CountResult out;
    const long evals_before = slice.evaluations();

    // adaptive nudge: a zero sitting on the contour makes the integral
    // meaningless; expand slightly until the boundary is clean (the
    // expansion shrinks with the box so sub-eps certificates stay tight)
    const double nudge = std::min(1e-6, 0.01 * std::min(box.width(), box.height()));
    for (int attempt = 0; attempt < opts.max_nudges; ++attempt) {
        if (boundary_min_abs(slice, box) >= 1e-10) break;
        box = box.expanded(nudge);
    }
    out.box = box;

    const Complex corners[5] = {{box.re_lo, box.im_lo},
                                {box.re_hi, box.im_lo},
                                {box.re_hi, box.im_hi},
                                {box.re_lo, box.im_hi},
                                {box.re_lo, box.im_lo}};
    Complex f_at[5];
    for (int k = 0; k < 4; ++k) f_at[k] = slice.eval(corners[k]).log_derivative;
    f_at[4] = f_at[0];

    bool converged = true;
    long evals_left = opts.max_evaluations_per_box;
    Complex integral = 0.0;
    for (int e = 0; e < 4; ++e)
        integral += adaptive_edge(slice, corners[e], corners[e + 1], f_at[e], f_at[e + 1],
                                  opts.edge_tolerance, 0, opts, converged, evals_left);
    const double two_pi = 2.0 * std::acos(-1.0);
    out.integral = integral / Complex(0.0, two_pi);
    const double rounded = std::round(out.integral.real());
    out.count = static_cast<int>(rounded);
    out.residual = std::abs(out.integral - rounded);
    out.certified = converged && out.residual < 0.1 && out.count >= 0;
    out.evaluations = slice.evaluations() - evals_before;
    return out;
}

}  // namespace detail

// Certified number of zeros of L(., theta) inside the box, counted with
// multiplicity. Throws CertificateError when the integral cannot be
// certified (callers subdivide).
inline CountResult count_zeros(const SchottkyGroup& g, const Character& theta, const Box& box,
                               const TransferParams& params = {},
                               const ZeroSearchOptions& opts = {}) {
    detail::LSlice slice(g, theta, params);
    CountResult r = detail::count_zeros_impl(slice, box, opts);
    if (!r.certified)
        throw CertificateError("zero count not certified on box " + box.describe() + " (residual " +
                               format_real(r.residual) + ")");
    return r;
}

// ---------------------------------------------------------------------------
// Zero location

struct Resonance {
    Complex location;
    int multiplicity = 1;
    Box certificate_box;          // certified contour enclosing exactly this zero (cluster)
    double certificate_residual = 0.0;
};

struct ResonanceSet {
    Character theta;
    std::vector<Resonance> zeros;  // sorted by (Re, Im)
};

namespace detail {

struct NewtonOutcome {
    Complex location;
    double last_step = std::numeric_limits<double>::infinity();
    bool converged = false;
};

inline NewtonOutcome newton_refine(const LSlice& slice, Complex start, int multiplicity,
                                   double scale) {
    NewtonOutcome out;
    Complex s = start;
    for (int it = 0; it < 80; ++it) {
        const auto v = slice.eval(s);
        if (std::abs(v.determinant) < 1e-300) break;  // numerically exact zero
        const Complex step = -static_cast<double>(multiplicity) / v.log_derivative;
        if (!std::isfinite(std::abs(step)) || std::abs(step) > 4.0 * scale) return out;
        s += step;
        out.last_step = std::abs(step);
        if (out.last_step < 1e-14 * (1.0 + std::abs(s))) {
            out.converged = true;
            break;
        }
    }
    out.location = s;
    out.converged = out.converged || out.last_step < 1e-10 * (1.0 + std::abs(s));
    return out;
}

inline void locate_recurse(const LSlice& slice, const CountResult& certified, int depth, double eps,
                           const ZeroSearchOptions& opts, std::vector<Resonance>& out) {
    const Box& box = certified.box;
    const int count = certified.count;
    if (count == 0) return;

    // Newton refinement with multiplicity = certified count. Attempted at
    // every scale: a point zero of multiplicity m (e.g. the double zero of
    // the zeta function at s = 0) is never separated by subdivision, but
    // the m-fold Newton step converges to it from any nearby start.
    NewtonOutcome nr = newton_refine(slice, box.center(), count, std::max(box.diameter(), eps));
    if (nr.converged && box.contains(nr.location, 0.05 * box.diameter() + eps)) {
        double half = std::max({0.45 * eps, 8.0 * nr.last_step, opts.certificate_half_width_floor});
        const double half_cap = std::max(0.26 * box.diameter(), 2.0 * half);
        for (int attempt = 0; attempt < 3 && half <= half_cap; ++attempt, half *= 8.0) {
            CountResult cert = count_zeros_impl(slice, Box::centered(nr.location, half), opts);
            if (cert.certified && cert.count == count) {
                out.push_back({nr.location, count, cert.box, cert.residual});
                return;
            }
            if (cert.certified && cert.count > count) break;  // neighbors inside: subdivide
        }
    }

    if (box.diameter() < eps) {
        // unresolved cluster at the target resolution: the box and its
        // already-certified count are the certificate
        Resonance res;
        res.location = (nr.converged && box.contains(nr.location, eps)) ? nr.location : box.center();
        res.multiplicity = count;
        res.certificate_box = box;
        res.certificate_residual = certified.residual;
        out.push_back(res);
        return;
    }

    if (depth >= opts.max_subdivision_depth)
        throw CertificateError("max subdivision depth (" + std::to_string(opts.max_subdivision_depth) +
                               ") reached; unresolved box " + box.describe());

    // deterministic subdivision order SW, SE, NW, NE; the split point is
    // jittered (by more than the nudge can expand) if children fail to
    // certify or do not sum to the parent
    static constexpr double kSplits[4][2] = {{0.5, 0.5}, {0.56, 0.45}, {0.43, 0.58}, {0.61, 0.37}};
    for (const auto& fr : kSplits) {
        const double rm = box.re_lo + fr[0] * box.width();
        const double im = box.im_lo + fr[1] * box.height();
        const Box children[4] = {{box.re_lo, rm, box.im_lo, im},
                                 {rm, box.re_hi, box.im_lo, im},
                                 {box.re_lo, rm, im, box.im_hi},
                                 {rm, box.re_hi, im, box.im_hi}};
        CountResult counts[4];
        bool ok = true;
        int total = 0;
        for (int k = 0; k < 4 && ok; ++k) {
            counts[k] = count_zeros_impl(slice, children[k], opts);
            ok = counts[k].certified;
            total += counts[k].count;
        }
        if (!ok || total != count) continue;
        for (int k = 0; k < 4; ++k) locate_recurse(slice, counts[k], depth + 1, eps, opts, out);
        return;
    }
    throw CertificateError("could not certify any subdivision of box " + box.describe());
}

}  // namespace detail

// Recursive subdivision + Newton refinement of all zeros in a certified
// box. Multiplicities come from the enclosing certified counts; every
// returned zero carries a contour certificate.
inline ResonanceSet locate_zeros(const SchottkyGroup& g, const Character& theta, const Box& box,
                                 double eps, const TransferParams& params = {},
                                 const ZeroSearchOptions& opts = {}) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    detail::LSlice slice(g, theta, params);
    CountResult root = detail::count_zeros_impl(slice, box, opts);
    if (!root.certified)
        throw CertificateError("zero count not certified on box " + box.describe() + " (residual " +
                               format_real(root.residual) + ")");
    ResonanceSet set;
    set.theta = theta;
    detail::locate_recurse(slice, root, 0, eps, opts, set.zeros);
    std::sort(set.zeros.begin(), set.zeros.end(), [](const Resonance& x, const Resonance& y) {
        if (x.location.real() != y.location.real()) return x.location.real() < y.location.real();
        return x.location.imag() < y.location.imag();
    });
    return set;
}

// ---------------------------------------------------------------------------
// Artin-Takagi factorization check

struct ArtinTakagiTerm {
    int n = 0;
    Complex character_sum;   // sum over a of t_n(s, a/N)
    Complex filtered_sum;    // N^r * sum over words with [w] = 0 mod N
    double residual = 0.0;
};

struct ArtinTakagiReport {
    int modulus = 1;
    Complex s;
    std::vector<ArtinTakagiTerm> terms;
    double aggregate_residual = 0.0;  // sum_a log L(s, a/N) vs filtered orbit log of Z_{Gamma_N}
    int first_failing_n = -1;         // termwise residual >= 1e-9
    bool pass = true;
};

// Termwise identity behind the factorization Z_{Gamma_N} = prod_a L(s, a/N):
// summing the orbit traces over all lattice characters must equal N^r times
// the trace restricted to words with [w] = 0 mod N (character orthogonality).
inline ArtinTakagiReport artin_takagi_check(WordStore& store, int modulus, Complex s, int n_max) {
    if (modulus < 1) throw std::invalid_argument("cover modulus must be >= 1");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const int r = store.group().rank();
    ArtinTakagiReport rep;
    rep.modulus = modulus;
    rep.s = s;

    std::vector<Character> characters;
    {
        std::vector<int> a(r, 0);
        while (true) {
            characters.push_back(Character::lattice(modulus, a));
            int j = 0;
            while (j < r && ++a[j] == modulus) a[j++] = 0;
            if (j == r) break;
        }
    }
    const double index = std::pow(static_cast<double>(modulus), r);

    Complex aggregate_lhs = 0.0;
    Complex aggregate_rhs = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const WordTable& table = store.table(n);
        ArtinTakagiTerm term;
        term.n = n;
        for (const auto& chi : characters) term.character_sum += trace_power(store, s, chi, n);
        Complex filtered = 0.0;
        for (std::size_t row = 0; row < table.count(); ++row) {
            const int* abel = table.abelianization(row);
            bool zero_mod = true;
            for (int j = 0; j < r; ++j)
                if (((abel[j] % modulus) + modulus) % modulus != 0) zero_mod = false;
            if (!zero_mod) continue;
            const double ell = table.length(row);
            filtered += std::exp(-s * ell) / (1.0 - std::exp(-ell));
        }
        term.filtered_sum = index * filtered;
        term.residual = std::abs(term.character_sum - term.filtered_sum);
        if (term.residual >= 1e-9 && rep.first_failing_n < 0) {
            rep.first_failing_n = n;
            rep.pass = false;
        }
        aggregate_lhs -= term.character_sum / static_cast<double>(n);
        aggregate_rhs -= term.filtered_sum / static_cast<double>(n);
        rep.terms.push_back(term);
    }
    rep.aggregate_residual = std::abs(aggregate_lhs - aggregate_rhs);
    return rep;
}

// ---------------------------------------------------------------------------
// Cover gap experiments

// Multiplicity of the "topological" zero of a rank-r L-function at s = -k
// (Borthwick-Judge-Perry splitting; these are not resonances).
inline int topological_multiplicity(int k, int rank) {
    return (2 * k + 1) * (rank - 1);
}

inline bool near_nonpositive_integer(Complex z, double tol = 1e-6) {
    if (z.real() > tol) return false;
    const double k = std::round(z.real());
    return k <= 0.0 && std::abs(z - Complex(k, 0.0)) < tol;
}

struct CharacterSearch {
    std::vector<int> a;           // lattice label in {0..N-1}^r
    double torus_norm = 0.0;      // ||a/N||_1 on the torus
    double search_radius = 0.0;
    bool mirrored = false;        // filled in from the conjugate character N - a
    std::string status;           // "ok", "no-zero-within-radius", "error: ..."
    std::vector<Resonance> zeros;
    double nearest_distance = std::numeric_limits<double>::infinity();
    std::optional<Complex> nearest_zero;  // nearest to delta, excluding delta itself at a = 0
    int count_within_epsilon = 0;         // multiplicity-weighted, |z - delta| < epsilon
};

struct GapReport {
    int modulus = 1;         // N
    double index = 1.0;      // covering degree N^r
    double delta = 0.0;
    double gap_prime = std::numeric_limits<double>::infinity();
    int count_within_epsilon = 0;
    double count_ratio = 0.0;  // count / N^r
    std::vector<CharacterSearch> characters;
};

struct CoverScanOptions {
    double epsilon = 0.1;        // counting radius around delta
    double eps_locate = 1e-6;    // zero location resolution
    double radius_cap = 0.0;     // per-character search cap; 0: auto (max(1.2 delta, 2 epsilon))
    double trivial_search_start = 0.0;  // 0: auto (1.15 delta, reaching the resonance at s = 0)
    double trivial_search_cap = 2.5;
    TransferParams transfer;
    ZeroSearchOptions zero_search;
};

namespace detail {

// zeros of the trivial-character slice: delta itself, possible further
// resonances, and (in large boxes) topological zeros at -N_0
struct TrivialSliceInfo {
    std::vector<Resonance> zeros;
    double nearest_nontrivial = std::numeric_limits<double>::infinity();
    std::optional<Complex> nearest_zero;
    double search_radius = 0.0;
    std::string status = "ok";
};

inline TrivialSliceInfo trivial_nearest_nontrivial(const SchottkyGroup& g, double delta,
                                                   const CoverScanOptions& opts) {
    TrivialSliceInfo info;
    const Character triv = Character::trivial(g.rank());
    const double start =
        opts.trivial_search_start > 0.0 ? opts.trivial_search_start : 1.15 * delta;
    double radius = std::max(start, 2.0 * opts.epsilon);
    while (true) {
        info.search_radius = radius;
        ResonanceSet set;
        try {
            set = locate_zeros(g, triv, Box::centered(Complex(delta, 0.0), radius),
                               opts.eps_locate, opts.transfer, opts.zero_search);
        } catch (const Error& e) {
            info.status = std::string("error: ") + e.what();
            return info;
        }
        info.zeros = set.zeros;
        for (const auto& z : set.zeros) {
            if (std::abs(z.location - Complex(delta, 0.0)) <= std::max(10.0 * opts.eps_locate, 1e-8))
                continue;  // the simple zero at delta itself
            int mult = z.multiplicity;
            if (near_nonpositive_integer(z.location)) {
                const int k = static_cast<int>(std::round(-z.location.real()));
                mult -= topological_multiplicity(k, g.rank());
                if (mult <= 0) continue;  // purely topological
            }
            const double d = std::abs(z.location - Complex(delta, 0.0));
            if (d < info.nearest_nontrivial) {
                info.nearest_nontrivial = d;
                info.nearest_zero = z.location;
            }
        }
        if (info.nearest_zero || radius >= opts.trivial_search_cap) break;
        radius = std::min(1.6 * radius, opts.trivial_search_cap);
    }
    if (!info.nearest_zero) info.status = "no-zero-within-radius";
    return info;
}

}  // namespace detail

// Evaluates the covers X_N for each N in n_list: locates per-character
// zeros near delta, reports gap'(X_N) (distance from delta to the nearest
// zero != delta over all characters) and the Theorem-2 count of zeros
// within epsilon of delta, normalized by the covering degree N^r.
inline std::vector<GapReport> cover_gap_report(const SchottkyGroup& g,
                                               const std::vector<int>& n_list,
                                               const CoverScanOptions& opts = {}) {
    if (n_list.empty()) throw std::invalid_argument("N list must be nonempty");
    const int r = g.rank();
    const DeltaResult dres = hausdorff_dimension(g, 1e-12, opts.transfer);
    const double delta = dres.delta;
    const double radius_cap =
        opts.radius_cap > 0.0 ? opts.radius_cap : std::max(1.2 * delta, 2.0 * opts.epsilon);

    // Empirical zero-tracking response at theta = 0. The leading behavior
    // is quadratic: L(s, theta) = L(s, -theta) (words pair with their
    // inverses), so theta = 0 is a critical point of the tracked zero and
    // |s(theta) - delta| ~ C ||theta||^2 near 0. C sizes the per-character
    // search boxes.
    double quad_scale = 0.0;
    {
        const double h = 0.05;
        for (int j = 0; j < r; ++j) {
            std::vector<double> theta(r, 0.0);
            theta[j] = h;
            for (double probe_radius = 0.06; probe_radius <= 0.25; probe_radius *= 2.0) {
                try {
                    ResonanceSet set = locate_zeros(g, Character::from_theta(theta),
                                                    Box::centered(Complex(delta, 0.0), probe_radius),
                                                    opts.eps_locate, opts.transfer, opts.zero_search);
                    double best = std::numeric_limits<double>::infinity();
                    for (const auto& z : set.zeros)
                        best = std::min(best, std::abs(z.location - Complex(delta, 0.0)));
                    if (std::isfinite(best)) {
                        quad_scale = std::max(quad_scale, best / (h * h));
                        break;
                    }
                } catch (const Error&) {
                    break;  // fall back to the default scale below
                }
            }
        }
        if (quad_scale == 0.0) quad_scale = 8.0;
    }

    const detail::TrivialSliceInfo trivial_info = detail::trivial_nearest_nontrivial(g, delta, opts);

    std::vector<GapReport> reports;
    for (int modulus : n_list) {
        if (modulus < 1) throw std::invalid_argument("cover modulus must be >= 1");
        GapReport rep;
        rep.modulus = modulus;
        rep.index = std::pow(static_cast<double>(modulus), r);
        rep.delta = delta;

        std::vector<std::vector<int>> labels;
        {
            std::vector<int> a(r, 0);
            while (true) {
                labels.push_back(a);
                int j = 0;
                while (j < r && ++a[j] == modulus) a[j++] = 0;
                if (j == r) break;
            }
        }

        // map from label to index for conjugate mirroring (a  <->  N - a)
        auto label_key = [modulus](const std::vector<int>& a) {
            long key = 0;
            for (int v : a) key = key * modulus + v;
            return key;
        };
        std::vector<CharacterSearch> searches(labels.size());
        std::vector<long> keys(labels.size());
        for (std::size_t idx = 0; idx < labels.size(); ++idx) keys[idx] = label_key(labels[idx]);

        for (std::size_t idx = 0; idx < labels.size(); ++idx) {
            const std::vector<int>& a = labels[idx];
            CharacterSearch cs;
            cs.a = a;
            const Character chi = Character::lattice(modulus, a);
            cs.torus_norm = chi.torus_norm1();

            // conjugate character already searched? mirror its zeros
            std::vector<int> conj(r);
            for (int j = 0; j < r; ++j) conj[j] = (modulus - a[j]) % modulus;
            const long ck = label_key(conj);
            std::size_t conj_idx = labels.size();
            for (std::size_t p = 0; p < idx; ++p)
                if (keys[p] == ck) conj_idx = p;
            if (conj_idx < idx) {
                const CharacterSearch& src = searches[conj_idx];
                cs = src;
                cs.a = a;
                cs.mirrored = true;
                for (auto& z : cs.zeros) {
                    z.location = std::conj(z.location);
                    const Box b = z.certificate_box;
                    z.certificate_box = {b.re_lo, b.re_hi, -b.im_hi, -b.im_lo};
                }
                if (cs.nearest_zero) cs.nearest_zero = std::conj(*cs.nearest_zero);
                searches[idx] = cs;
                continue;
            }

            bool trivial_char = chi.is_trivial();
            if (trivial_char) {
                cs.search_radius = trivial_info.search_radius;
                cs.status = trivial_info.status == "no-zero-within-radius"
                                ? "no-nontrivial-within-radius"
                                : trivial_info.status;
                cs.zeros = trivial_info.zeros;
                if (trivial_info.nearest_zero) {
                    cs.nearest_zero = trivial_info.nearest_zero;
                    cs.nearest_distance = trivial_info.nearest_nontrivial;
                }
            } else {
                double radius = std::clamp(2.5 * quad_scale * cs.torus_norm * cs.torus_norm,
                                           opts.epsilon, radius_cap);
                for (int attempt = 0; attempt < 2; ++attempt) {
                    cs.search_radius = radius;
                    Box search_box = Box::centered(Complex(delta, 0.0), radius);
                    // Zeros competing for gap' satisfy |z - delta| < delta, and
                    // counted zeros satisfy |z - delta| < epsilon; both force
                    // Re z > 0 when epsilon < delta. Clipping the box at the
                    // imaginary axis skips the topological zero at s = 0
                    // without affecting either statistic.
                    if (delta - opts.epsilon > 0.05)
                        search_box.re_lo = std::max(search_box.re_lo, 1e-3);
                    try {
                        ResonanceSet set =
                            locate_zeros(g, chi, search_box,
                                         opts.eps_locate, opts.transfer, opts.zero_search);
                        cs.zeros = set.zeros;
                        cs.status = "ok";
                    } catch (const Error& e) {
                        cs.status = std::string("error: ") + e.what();
                        break;
                    }
                    if (!cs.zeros.empty() || radius >= radius_cap) break;
                    radius = std::min(2.0 * radius, radius_cap);
                }
                for (const auto& z : cs.zeros) {
                    if (near_nonpositive_integer(z.location)) continue;
                    const double d = std::abs(z.location - Complex(delta, 0.0));
                    if (d < cs.nearest_distance) {
                        cs.nearest_distance = d;
                        cs.nearest_zero = z.location;
                    }
                }
                if (cs.status == "ok" && !cs.nearest_zero) cs.status = "no-zero-within-radius";
            }

            searches[idx] = cs;
        }

        for (auto& cs : searches) {
            const Character chi = Character::lattice(modulus, cs.a);
            const bool trivial_char = chi.is_trivial();
            cs.count_within_epsilon = 0;
            for (const auto& z : cs.zeros) {
                if (near_nonpositive_integer(z.location)) continue;
                if (std::abs(z.location - Complex(delta, 0.0)) < opts.epsilon)
                    cs.count_within_epsilon += z.multiplicity;
            }
            // gap' excludes the zero at delta itself (trivial character)
            if (cs.nearest_zero) {
                const bool is_delta_itself =
                    trivial_char && std::abs(*cs.nearest_zero - Complex(delta, 0.0)) <=
                                        std::max(10.0 * opts.eps_locate, 1e-8);
                if (!is_delta_itself) rep.gap_prime = std::min(rep.gap_prime, cs.nearest_distance);
            }
            rep.count_within_epsilon += cs.count_within_epsilon;
        }
        rep.count_ratio = rep.count_within_epsilon / rep.index;
        rep.characters = std::move(searches);
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace schottky
