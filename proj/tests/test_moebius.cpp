#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "schottky/moebius.hpp"

using namespace schottky;

namespace {

MoebiusMap random_map(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    while (true) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if (a * d - b * c > 0.1) return MoebiusMap::from_coefficients(a, b, c, d);
    }
}

MoebiusMap random_hyperbolic(std::mt19937& rng) {
    while (true) {
        const MoebiusMap m = random_map(rng);
        if (std::abs(m.trace()) > 2.1) return m;
    }
}

}  // namespace

TEST(MoebiusMap, DiagonalMapImageAndDerivative) {
    const MoebiusMap m = MoebiusMap::from_coefficients(2.0, 0.0, 0.0, 0.5);
    const MapValue v = evaluate(m, Complex(1.0, 0.0));
    EXPECT_NEAR(std::abs(v.image - Complex(4.0, 0.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(v.derivative - Complex(4.0, 0.0)), 0.0, 1e-14);
}

TEST(MoebiusMap, IdentityFixesEverything) {
    const MapValue v = evaluate(MoebiusMap::identity(), Complex(0.0, 1.0));
    EXPECT_NEAR(std::abs(v.image - Complex(0.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v.derivative - Complex(1.0, 0.0)), 0.0, 1e-15);
}

TEST(MoebiusMap, NormalizationScalesAndFixesSign) {
    const MoebiusMap m = MoebiusMap::from_coefficients(4.0, 0.0, 0.0, 1.0);
    EXPECT_NEAR(m.a, 2.0, 1e-15);
    EXPECT_NEAR(m.d, 0.5, 1e-15);
    const MoebiusMap flipped = MoebiusMap::from_coefficients(-2.0, 0.0, 0.0, -0.5);
    EXPECT_GT(flipped.trace(), 0.0);
    EXPECT_NEAR(flipped.a, 2.0, 1e-15);
}

TEST(MoebiusMap, RejectsOrientationReversingCoefficients) {
    EXPECT_THROW(MoebiusMap::from_coefficients(1.0, 0.0, 0.0, -1.0), std::invalid_argument);
}

TEST(MoebiusMap, PoleEvaluationThrows) {
    const MoebiusMap m = MoebiusMap::from_coefficients(0.0, 1.0, -1.0, 0.0);  // z -> -1/z
    EXPECT_THROW(evaluate(m, Complex(0.0, 0.0)), PoleError);
}

TEST(MoebiusMap, ChainRuleExactAndAgainstFiniteDifferences) {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        const MoebiusMap m1 = random_map(rng);
        const MoebiusMap m2 = random_map(rng);
        const Complex z(0.3 + 0.01 * trial, 0.7);
        const MapValue inner = evaluate(m2, z);
        const MapValue outer = evaluate(m1, inner.image);
        const MapValue composed = evaluate(compose(m1, m2), z);

        EXPECT_LT(std::abs(composed.image - outer.image), 1e-10 * (1.0 + std::abs(outer.image)));
        EXPECT_LT(std::abs(composed.derivative - outer.derivative * inner.derivative),
                  1e-12 * (1.0 + std::abs(composed.derivative)));

        // independent finite-difference oracle for the derivative
        const double h = 1e-5;
        const Complex fd = (evaluate(m1, Complex(z.real() + h, z.imag())).image -
                            evaluate(m1, Complex(z.real() - h, z.imag())).image) /
                           (2.0 * h);
        EXPECT_LT(std::abs(fd - evaluate(m1, z).derivative), 1e-8 * (1.0 + std::abs(fd)));
    }
}

TEST(DisplacementLength, KnownMultipliers) {
    // z -> 4z has multiplier 4, so length log 4
    EXPECT_NEAR(displacement_length(MoebiusMap::from_coefficients(2.0, 0.0, 0.0, 0.5)),
                std::log(4.0), 1e-12);
    // a = sqrt 2, d = 1/sqrt 2: multiplier 2
    EXPECT_NEAR(displacement_length(
                    MoebiusMap::from_coefficients(std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0))),
                std::log(2.0), 1e-12);
}

TEST(DisplacementLength, ConjugationInvariant) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const MoebiusMap m = random_hyperbolic(rng);
        const MoebiusMap g = random_map(rng);
        const MoebiusMap conj = compose(compose(g, m), g.inverse());
        EXPECT_NEAR(displacement_length(conj), displacement_length(m),
                    1e-12 * (1.0 + displacement_length(m)));
    }
}

TEST(DisplacementLength, PowersScaleLinearly) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const MoebiusMap m = random_hyperbolic(rng);
        const double ell = displacement_length(m);
        MoebiusMap p = m;
        for (int n = 2; n <= 5; ++n) {
            p = compose(p, m);
            EXPECT_NEAR(displacement_length(p), n * ell, 1e-10 * (1.0 + n * ell));
        }
    }
}

TEST(DisplacementLength, NonHyperbolicThrows) {
    EXPECT_THROW(displacement_length(MoebiusMap::identity()), NonHyperbolicError);
    // rotation by 90 degrees (trace 0)
    const MoebiusMap rot = MoebiusMap::from_coefficients(0.0, 1.0, -1.0, 0.0);
    EXPECT_THROW(displacement_length(rot), NonHyperbolicError);
    // parabolic (trace exactly 2)
    EXPECT_THROW(displacement_length(MoebiusMap::from_coefficients(1.0, 1.0, 0.0, 1.0)),
                 NonHyperbolicError);
}

TEST(MoebiusMap, CompositionRespectsEvaluation) {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const MoebiusMap m1 = random_map(rng);
        const MoebiusMap m2 = random_map(rng);
        const Complex z(-0.4, 1.1);
        const Complex direct = evaluate(compose(m1, m2), z).image;
        const Complex chained = evaluate(m1, evaluate(m2, z).image).image;
        EXPECT_LT(std::abs(direct - chained), 1e-10 * (1.0 + std::abs(chained)));
    }
}
