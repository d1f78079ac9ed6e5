#pragma once

// Schottky disk systems. A group of rank r is described by 2r open disks
// D_0..D_{2r-1} with pairwise disjoint closures and centers on the real
// axis, together with generators S_i sending the exterior of D_i onto the
// interior of D_{i+r}; indices are cyclic mod 2r and S_{i+r} = S_i^{-1}.

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/moebius.hpp"
#include "schottky/util.hpp"

namespace schottky {

struct Disk {
    Complex center;  // expected real; validate_schottky flags off-axis centers
    double radius = 0.0;
};

namespace detail {
// Boundary sampling count and margin tolerance for the numeric Schottky
// checks. Exponential contraction makes these forgiving.
inline constexpr int kBoundarySamples = 64;
inline constexpr double kMarginTolerance = 1e-9;
}  // namespace detail

class SchottkyGroup {
public:
    // Disks ordered D_0..D_{2r-1}; generators S_0..S_{r-1} (inverses derived).
    SchottkyGroup(int rank, std::vector<Disk> disks, const std::vector<MoebiusMap>& generators) {
        if (rank < 2) throw InvalidGroupError("Schottky rank must be >= 2");
        if (static_cast<int>(disks.size()) != 2 * rank)
            throw InvalidGroupError("expected 2r disks");
        if (static_cast<int>(generators.size()) != rank)
            throw InvalidGroupError("expected r generators (inverses are derived)");
        rank_ = rank;
        disks_ = std::move(disks);
        gens_ = generators;
        gens_.reserve(2 * rank);
        for (int j = 0; j < rank; ++j) gens_.push_back(generators[j].inverse());
    }

    int rank() const { return rank_; }
    int alphabet_size() const { return 2 * rank_; }

    const Disk& disk(int i) const { return disks_[i]; }
    const MoebiusMap& generator(int i) const { return gens_[i]; }
    int inverse_index(int i) const { return (i + rank_) % (2 * rank_); }

    // Minimal generator displacement length; lower bound for all closed
    // geodesic lengths used in tail estimates.
    double min_generator_length() const {
        double m = displacement_length(gens_[0]);
        for (int i = 1; i < rank_; ++i) m = std::min(m, displacement_length(gens_[i]));
        return m;
    }

    // Stable hash of the normalized generator coefficients and disks;
    // keys the on-disk word cache and labels outputs.
    std::uint64_t fingerprint() const {
        std::ostringstream os;
        os << "schottky/v1 r=" << rank_;
        for (const auto& d : disks_)
            os << " d:" << format_real(d.center.real()) << "," << format_real(d.center.imag())
               << "," << format_real(d.radius);
        for (int i = 0; i < rank_; ++i) {
            const auto& m = gens_[i];
            os << " g:" << format_real(m.a) << "," << format_real(m.b) << "," << format_real(m.c)
               << "," << format_real(m.d);
        }
        return fnv1a(os.str());
    }

private:
    int rank_ = 0;
    std::vector<Disk> disks_;
    std::vector<MoebiusMap> gens_;
};

struct ValidationIssue {
    std::string check;
    std::string detail;
    int i = -1;
    int j = -1;
};

struct ValidationReport {
    bool valid = true;
    // min over admissible (i, j) and boundary samples of r_i - |S_i^{-1}(z) - c_i|
    double worst_contraction_margin = 0.0;
    // max over j and boundary samples of ||S_j(z) - c_{j+r}| - r_{j+r}|
    double worst_pairing_error = 0.0;
    // min over disk pairs of dist(centers) - (r_i + r_j)
    double min_disk_gap = 0.0;
    std::vector<ValidationIssue> issues;
};

// Numeric verification of the Schottky conditions: real centers, positive
// radii, disjoint closures, inverse pairing, boundary mapping, and the
// contraction property closure(S_i^{-1}(D_j)) in D_i for all i != j+r.
inline ValidationReport validate_schottky(const SchottkyGroup& g,
                                          int boundary_samples = detail::kBoundarySamples) {
    ValidationReport rep;
    const int n = g.alphabet_size();
    const double two_pi = 2.0 * std::acos(-1.0);

    auto fail = [&rep](const std::string& check, const std::string& detail, int i, int j) {
        rep.valid = false;
        rep.issues.push_back({check, detail, i, j});
    };

    for (int i = 0; i < n; ++i) {
        if (!(g.disk(i).radius > 0.0))
            fail("positive radius", "disk " + std::to_string(i) + " has non-positive radius", i, -1);
        if (std::abs(g.disk(i).center.imag()) > 1e-12)
            fail("center off real axis",
                 "disk " + std::to_string(i) + " center has imaginary part " +
                     format_real(g.disk(i).center.imag()),
                 i, -1);
    }

    rep.min_disk_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double gap =
                std::abs(g.disk(i).center - g.disk(j).center) - g.disk(i).radius - g.disk(j).radius;
            rep.min_disk_gap = std::min(rep.min_disk_gap, gap);
            if (gap <= detail::kMarginTolerance)
                fail("disjoint closures",
                     "disks " + std::to_string(i) + " and " + std::to_string(j) + " overlap (gap " +
                         format_real(gap) + ")",
                     i, j);
        }
    }

    for (int j = 0; j < n; ++j) {
        const auto& s = g.generator(j);
        const auto& sinv = g.generator(g.inverse_index(j));
        const MoebiusMap expect = s.inverse();
        const double err = std::abs(sinv.a - expect.a) + std::abs(sinv.b - expect.b) +
                           std::abs(sinv.c - expect.c) + std::abs(sinv.d - expect.d);
        if (err > 1e-12)
            fail("inverse pairing",
                 "generator " + std::to_string(g.inverse_index(j)) + " is not the inverse of " +
                     std::to_string(j) + " (coefficient error " + format_real(err) + ")",
                 j, g.inverse_index(j));
    }
    if (!rep.valid) return rep;  // geometry below assumes sane disks/pairing

    rep.worst_pairing_error = 0.0;
    rep.worst_contraction_margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const Disk& dj = g.disk(j);
        const Disk& target = g.disk(g.inverse_index(j));
        const auto& s = g.generator(j);
        bool interior_ok = true;
        for (int k = 0; k < boundary_samples; ++k) {
            const double t = two_pi * k / boundary_samples;
            const Complex z = dj.center + dj.radius * Complex(std::cos(t), std::sin(t));
            const Complex w = evaluate(s, z).image;
            rep.worst_pairing_error = std::max(
                rep.worst_pairing_error, std::abs(std::abs(w - target.center) - target.radius));
        }
        // one exterior probe: S_j must push the far exterior inside D_{j+r}
        const Complex far = dj.center + 7.0 * dj.radius;
        if (std::abs(evaluate(s, far).image - target.center) >= target.radius) interior_ok = false;
        if (rep.worst_pairing_error > 1e-7)
            fail("boundary pairing",
                 "S_" + std::to_string(j) + " does not map boundary of disk " + std::to_string(j) +
                     " onto boundary of disk " + std::to_string(g.inverse_index(j)) + " (error " +
                     format_real(rep.worst_pairing_error) + ")",
                 j, g.inverse_index(j));
        if (!interior_ok)
            fail("exterior to interior",
                 "S_" + std::to_string(j) + " does not map the exterior of disk " +
                     std::to_string(j) + " into disk " + std::to_string(g.inverse_index(j)),
                 j, g.inverse_index(j));
    }

    for (int i = 0; i < n; ++i) {
        const auto sinv = g.generator(i).inverse();
        for (int j = 0; j < n; ++j) {
            if (i == g.inverse_index(j)) continue;
            const Disk& dj = g.disk(j);
            const Disk& di = g.disk(i);
            double margin = std::numeric_limits<double>::infinity();
            for (int k = 0; k < boundary_samples; ++k) {
                const double t = two_pi * k / boundary_samples;
                const Complex z = dj.center + dj.radius * Complex(std::cos(t), std::sin(t));
                const Complex w = evaluate(sinv, z).image;
                margin = std::min(margin, di.radius - std::abs(w - di.center));
            }
            rep.worst_contraction_margin = std::min(rep.worst_contraction_margin, margin);
            if (margin <= detail::kMarginTolerance)
                fail("contraction",
                     "S_" + std::to_string(i) + "^{-1}(D_" + std::to_string(j) +
                         ") is not strictly inside D_" + std::to_string(i) + " (margin " +
                         format_real(margin) + ")",
                     i, j);
        }
    }
    return rep;
}

// Builds a rank-r group with prescribed generator displacement lengths.
// Convention: disk centers sit at 0, 1, ..., 2r-1 on the real axis, disk i
// is paired with disk i+r (center distance r for every pair), and both
// disks of a pair share the radius rho_j = r / (2 cosh(ell_j / 2)), which
// pins ell(S_j) exactly. The pairing map is z -> c_{j+r} - rho_j^2/(z - c_j).
inline SchottkyGroup build_funnel_group(int rank, const std::vector<double>& lengths) {
    if (rank < 2) throw InfeasibleConfigurationError("funnel builder requires rank >= 2");
    if (static_cast<int>(lengths.size()) != rank)
        throw InfeasibleConfigurationError("funnel builder needs one length per generator");
    for (int j = 0; j < rank; ++j)
        if (!(lengths[j] > 0.0))
            throw InfeasibleConfigurationError("funnel length " + std::to_string(j) +
                                               " must be positive");

    const int n = 2 * rank;
    std::vector<Disk> disks(n);
    std::vector<double> radii(rank);
    for (int j = 0; j < rank; ++j)
        radii[j] = static_cast<double>(rank) / (2.0 * std::cosh(lengths[j] / 2.0));
    for (int i = 0; i < n; ++i)
        disks[i] = Disk{Complex(static_cast<double>(i), 0.0), radii[i % rank]};

    double worst_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n; ++i)
        worst_gap = std::min(worst_gap, 1.0 - disks[i].radius - disks[i + 1].radius);
    if (worst_gap <= detail::kMarginTolerance)
        throw InfeasibleConfigurationError(
            "no Schottky disk system for the requested lengths at unit spacing (margin " +
            format_real(worst_gap) + ")");

    std::vector<MoebiusMap> gens(rank);
    for (int j = 0; j < rank; ++j) {
        const double c = disks[j].center.real();
        const double cp = disks[j + rank].center.real();
        const double rho = radii[j];
        // z -> cp - rho^2/(z - c) as an SL(2,R) matrix
        gens[j] = MoebiusMap::from_coefficients(cp, -rho * rho - c * cp, 1.0, -c);
    }

    SchottkyGroup g(rank, std::move(disks), gens);
    const ValidationReport rep = validate_schottky(g);
    if (!rep.valid)
        throw InfeasibleConfigurationError("funnel construction failed validation (margin " +
                                           format_real(rep.worst_contraction_margin) + ")");
    return g;
}

}  // namespace schottky
