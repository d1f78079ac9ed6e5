#pragma once

// Real Moebius transformations z -> (az+b)/(cz+d) as normalized SL(2,R)
// coefficient quadruples. The projective sign ambiguity is resolved
// deterministically: a+d > 0 when the trace is nonzero.

#include <cmath>
#include <complex>
#include <string>

#include "schottky/errors.hpp"
#include "schottky/linalg.hpp"

namespace schottky {

struct MoebiusMap {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static MoebiusMap identity() { return {}; }

    // Normalizes to ad - bc = 1 and fixes the projective sign.
    // Requires an orientation-preserving quadruple (ad - bc > 0).
    static MoebiusMap from_coefficients(double a, double b, double c, double d) {
        const double det = a * d - b * c;
        if (!(det > 0.0))
            throw std::invalid_argument("MoebiusMap: coefficients must have positive determinant");
        const double s = std::sqrt(det);
        MoebiusMap m{a / s, b / s, c / s, d / s};
        double sign = m.a + m.d;
        if (std::abs(sign) <= 1e-14) {
            // trace-free (elliptic of order 2): pick the first nonzero entry
            sign = (std::abs(m.a) > 1e-14) ? m.a : (std::abs(m.b) > 1e-14 ? m.b : m.c);
        }
        if (sign < 0.0) {
            m.a = -m.a;
            m.b = -m.b;
            m.c = -m.c;
            m.d = -m.d;
        }
        return m;
    }

    MoebiusMap inverse() const { return with_sign_fixed({d, -b, -c, a}); }

    double trace() const { return a + d; }

    // Sign normalization without touching the determinant. Unit-determinant
    // inputs stay unit-determinant exactly; recomputing ad - bc here would
    // cancel catastrophically for word products with large entries.
    static MoebiusMap with_sign_fixed(MoebiusMap m) {
        double sign = m.a + m.d;
        if (std::abs(sign) <= 1e-14 * (std::abs(m.a) + std::abs(m.d)) || sign == 0.0)
            sign = (m.a != 0.0) ? m.a : (m.b != 0.0 ? m.b : m.c);
        if (sign < 0.0) {
            m.a = -m.a;
            m.b = -m.b;
            m.c = -m.c;
            m.d = -m.d;
        }
        return m;
    }
};

// m1 after m2 (matrix product).
inline MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
    return MoebiusMap::with_sign_fixed({m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
                                        m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d});
}

struct MapValue {
    Complex image;
    Complex derivative;  // 1/(cz+d)^2
};

inline MapValue evaluate(const MoebiusMap& m, Complex z) {
    const Complex denom = m.c * z + m.d;
    if (std::abs(denom) < 1e-14)
        throw PoleError("Moebius map evaluated at its pole");
    const Complex inv = 1.0 / denom;
    return {(m.a * z + m.b) * inv, inv * inv};
}

inline bool is_hyperbolic(const MoebiusMap& m) { return std::abs(m.trace()) > 2.0 + 1e-12; }

// Translation length along the axis: ell = 2 arccosh(|a+d|/2).
inline double displacement_length(const MoebiusMap& m) {
    const double half_trace = std::abs(m.trace()) / 2.0;
    if (half_trace <= 1.0 + 5e-13)
        throw NonHyperbolicError("displacement length of a non-hyperbolic element (|trace| = " +
                                 std::to_string(2.0 * half_trace) + ")");
    return 2.0 * std::acosh(half_trace);
}

}  // namespace schottky
