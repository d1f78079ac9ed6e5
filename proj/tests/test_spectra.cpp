#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "schottky/schottky_group.hpp"
#include "schottky/spectra.hpp"
#include "schottky/word_store.hpp"

using namespace schottky;

namespace {

struct Fixture {
    Fixture() : group(build_funnel_group(2, {4.0, 4.0})), store(group) {
        delta_result = hausdorff_dimension(group, 1e-12);
    }
    SchottkyGroup group;
    WordStore store;
    DeltaResult delta_result;
};

Fixture& fix() {
    static Fixture f;
    return f;
}

TransferParams fast_params() { return TransferParams{12, 0.75}; }

}  // namespace

TEST(HausdorffDimension, DualCriterionConsistency) {
    const DeltaResult d = fix().delta_result;
    EXPECT_GT(d.delta, 0.0);
    EXPECT_LT(d.delta, 1.0);
    EXPECT_LT(std::abs(d.delta - d.determinant_zero), 1e-11);  // 10 * tol
    EXPECT_LT(d.eigenvalue_residual, 1e-10);
}

TEST(HausdorffDimension, RegressionPinnedValue) {
    // regression value for the unit-spacing funnel builder at lengths (4,4),
    // confirmed by the determinant-zero cross-check
    EXPECT_NEAR(fix().delta_result.delta, 0.321768435847, 2e-9);
}

TEST(HausdorffDimension, CoverLeavesDeltaUnchanged) {
    // factorization view: Z_{Gamma_N}(delta) = prod_a L(delta, a/N) vanishes
    // only through the trivial-character factor, so delta(Gamma_N) = delta
    const double delta = fix().delta_result.delta;
    for (int modulus : {2, 3}) {
        std::vector<int> a(2, 0);
        while (true) {
            const Character chi = Character::lattice(modulus, a);
            const Complex value = fredholm_determinant(fix().group, Complex(delta, 0.0), chi);
            if (chi.is_trivial())
                EXPECT_LT(std::abs(value), 1e-9);
            else
                EXPECT_GT(std::abs(value), 1e-4);
            int j = 0;
            while (j < 2 && ++a[j] == modulus) a[j++] = 0;
            if (j == 2) break;
        }
    }
}

TEST(EulerProduct, TendsToOneDeepInTheHalfPlane) {
    const EulerResult far = euler_product_truncated(fix().store, Complex(3.0, 0.0), 6);
    EXPECT_LT(std::abs(far.value - 1.0), 1e-4);
    const EulerResult farther = euler_product_truncated(fix().store, Complex(5.0, 0.0), 6);
    EXPECT_LT(std::abs(farther.value - 1.0), std::abs(far.value - 1.0));
}

TEST(EulerProduct, EmptyTruncationIsOne) {
    const EulerResult r = euler_product_truncated(fix().store, Complex(1.0, 0.0), 0);
    EXPECT_EQ(r.value, Complex(1.0, 0.0));
}

TEST(EulerProduct, MatchesDeterminantWithinTailBounds) {
    const Complex s(fix().delta_result.delta + 0.5, 0.0);
    const EulerResult eu = euler_product_truncated(fix().store, s, 10);
    const Complex det =
        fredholm_determinant(fix().group, s, Character::trivial(2), TransferParams{24, 0.75});
    const Complex det2 =
        fredholm_determinant(fix().group, s, Character::trivial(2), TransferParams{48, 0.75});
    const double det_tail = std::abs(det - det2) + 1e-12;
    EXPECT_FALSE(eu.divergence_warning);
    EXPECT_LT(std::abs(eu.value - det), eu.tail_bound + det_tail);
}

TEST(EulerProduct, DivergenceFlaggedBelowDelta) {
    const EulerResult r =
        euler_product_truncated(fix().store, Complex(0.5 * fix().delta_result.delta, 0.0), 8);
    EXPECT_TRUE(r.divergence_warning);
}

TEST(CountZeros, SimpleZeroAtDelta) {
    const double delta = fix().delta_result.delta;
    const CountResult r = count_zeros(fix().group, Character::trivial(2),
                                      Box::centered(Complex(delta, 0.0), 0.05), fast_params());
    EXPECT_EQ(r.count, 1);
    EXPECT_LT(r.residual, 0.1);
}

TEST(CountZeros, EmptyRightOfDelta) {
    const double delta = fix().delta_result.delta;
    const Box right{delta + 0.01, delta + 0.55, -0.35, 0.35};
    EXPECT_EQ(count_zeros(fix().group, Character::trivial(2), right, fast_params()).count, 0);
}

TEST(CountZeros, AdditiveUnderSubdivision) {
    const double delta = fix().delta_result.delta;
    const Box parent = Box::centered(Complex(delta, 0.0), 0.06);
    const int total = count_zeros(fix().group, Character::trivial(2), parent, fast_params()).count;
    const double rm = parent.center().real() + 0.013;  // avoid splitting through the zero
    const double im = parent.center().imag() + 0.007;
    int sum = 0;
    for (const Box& child : {Box{parent.re_lo, rm, parent.im_lo, im},
                             Box{rm, parent.re_hi, parent.im_lo, im},
                             Box{parent.re_lo, rm, im, parent.im_hi},
                             Box{rm, parent.re_hi, im, parent.im_hi}})
        sum += count_zeros(fix().group, Character::trivial(2), child, fast_params()).count;
    EXPECT_EQ(sum, total);
}

TEST(LocateZeros, FindsSimpleZeroAtDelta) {
    const double delta = fix().delta_result.delta;
    const ResonanceSet set =
        locate_zeros(fix().group, Character::trivial(2), Box::centered(Complex(delta, 0.0), 0.05),
                     1e-8, fast_params());
    ASSERT_EQ(set.zeros.size(), 1u);
    EXPECT_EQ(set.zeros[0].multiplicity, 1);
    EXPECT_LT(std::abs(set.zeros[0].location - Complex(delta, 0.0)), 1e-9);
    EXPECT_LT(set.zeros[0].certificate_residual, 0.1);
}

TEST(LocateZeros, TrackedZeroApproachesDeltaContinuously) {
    const double delta = fix().delta_result.delta;
    std::vector<Complex> tracked;
    std::vector<double> ts{0.06, 0.03, 0.015};
    double last = 1.0;
    for (double t : ts) {
        const ResonanceSet set =
            locate_zeros(fix().group, Character::from_theta({t, 0.0}),
                         Box::centered(Complex(delta, 0.0), 0.08), 1e-8, fast_params());
        ASSERT_FALSE(set.zeros.empty());
        double best = 1e18;
        Complex loc;
        for (const auto& z : set.zeros) {
            const double d = std::abs(z.location - Complex(delta, 0.0));
            if (d < best) {
                best = d;
                loc = z.location;
            }
        }
        EXPECT_LT(best, last);
        last = best;
        tracked.push_back(loc);
    }
    EXPECT_LT(last, 0.002);

    // measured Lipschitz ratio of the tracked zero on ||theta||_1 < 0.1
    double measured_c = 0.0;
    for (std::size_t i = 1; i < tracked.size(); ++i)
        measured_c = std::max(measured_c,
                              std::abs(tracked[i] - tracked[i - 1]) / (ts[i - 1] - ts[i]));
    RecordProperty("measured_lipschitz_constant", format_real(measured_c));
    EXPECT_GT(measured_c, 0.0);
    EXPECT_LT(measured_c, 5.0);
}

TEST(LocateZeros, RefinementStableUnderSmallerEps) {
    const double delta = fix().delta_result.delta;
    const Character chi = Character::from_theta({0.05, 0.0});
    const Box box = Box::centered(Complex(delta, 0.0), 0.06);
    const ResonanceSet coarse = locate_zeros(fix().group, chi, box, 1e-5, fast_params());
    const ResonanceSet fine = locate_zeros(fix().group, chi, box, 1e-6, fast_params());
    ASSERT_EQ(coarse.zeros.size(), fine.zeros.size());
    for (std::size_t i = 0; i < coarse.zeros.size(); ++i)
        EXPECT_LT(std::abs(coarse.zeros[i].location - fine.zeros[i].location), 1e-5);
}

TEST(LocateZeros, MirroredCharactersGiveConjugateZeros) {
    const double delta = fix().delta_result.delta;
    const Box box = Box::centered(Complex(delta, 0.0), 0.08);
    const ResonanceSet plus =
        locate_zeros(fix().group, Character::from_theta({0.05, 0.0}), box, 1e-8, fast_params());
    const ResonanceSet minus =
        locate_zeros(fix().group, Character::from_theta({-0.05, 0.0}), box, 1e-8, fast_params());
    ASSERT_EQ(plus.zeros.size(), minus.zeros.size());
    for (std::size_t i = 0; i < plus.zeros.size(); ++i)
        EXPECT_LT(std::abs(minus.zeros[i].location - std::conj(plus.zeros[i].location)), 1e-10);
}

TEST(LocateZeros, NoCertifiedZeroRightOfDelta) {
    const double delta = fix().delta_result.delta;
    for (double t : {0.0, 0.04}) {
        const ResonanceSet set =
            locate_zeros(fix().group, Character::from_theta({t, t}),
                         Box::centered(Complex(delta, 0.0), 0.07), 1e-8, fast_params());
        for (const auto& z : set.zeros) EXPECT_LE(z.location.real(), delta + 1e-8);
    }
}

TEST(ArtinTakagi, TrivialCoverIsExactIdentity) {
    const ArtinTakagiReport rep =
        artin_takagi_check(fix().store, 1, Complex(fix().delta_result.delta + 0.5, 0.0), 6);
    EXPECT_TRUE(rep.pass);
    for (const auto& term : rep.terms) EXPECT_LT(term.residual, 1e-12);
    EXPECT_LT(rep.aggregate_residual, 1e-12);
}

TEST(ArtinTakagi, TermwiseResidualsSmallModuli) {
    const Complex s(fix().delta_result.delta + 0.5, 0.0);
    for (int modulus : {2, 3}) {
        const ArtinTakagiReport rep = artin_takagi_check(fix().store, modulus, s, 6);
        EXPECT_TRUE(rep.pass) << "modulus " << modulus;
        EXPECT_EQ(rep.first_failing_n, -1);
        for (const auto& term : rep.terms) EXPECT_LT(term.residual, 1e-9);
        EXPECT_LT(rep.aggregate_residual, 1e-9);
    }
}

TEST(ArtinTakagi, HoldsAtComplexArgument) {
    const ArtinTakagiReport rep =
        artin_takagi_check(fix().store, 2, Complex(fix().delta_result.delta + 0.6, 0.8), 5);
    EXPECT_TRUE(rep.pass);
}

TEST(CoverGapReport, TrivialAndFirstCover) {
    CoverScanOptions opts;
    opts.transfer = fast_params();
    opts.eps_locate = 1e-6;
    const auto reports = cover_gap_report(fix().group, {1, 2}, opts);
    ASSERT_EQ(reports.size(), 2u);

    const GapReport& r1 = reports[0];
    EXPECT_EQ(r1.modulus, 1);
    EXPECT_EQ(r1.index, 1.0);
    EXPECT_EQ(r1.characters.size(), 1u);
    // nearest nontrivial zero of Z itself: the resonance at s = 0
    EXPECT_NEAR(r1.gap_prime, r1.delta, 1e-6);
    EXPECT_EQ(r1.count_within_epsilon, 1);  // just the simple zero at delta

    const GapReport& r2 = reports[1];
    EXPECT_EQ(r2.characters.size(), 4u);
    EXPECT_LE(r2.gap_prime, r1.gap_prime + 2e-6);
    EXPECT_GT(r2.count_ratio, 0.0);
    for (const auto& cs : r2.characters) {
        EXPECT_TRUE(cs.status.rfind("error", 0) != 0) << cs.status;
        for (const auto& z : cs.zeros) {
            EXPECT_LE(z.location.real(), r2.delta + 1e-8);
            EXPECT_LT(z.certificate_residual, 0.1);
        }
    }
}

TEST(TopologicalZeros, DoubleZeroAtOriginSplitsIntoTopologicalAndResonance) {
    // the zeta function of a rank-2 group has a double zero at s = 0:
    // one topological zero plus the standard resonance at 0
    const ResonanceSet set = locate_zeros(fix().group, Character::trivial(2),
                                          Box::centered(Complex(0.0, 0.0), 0.04), 1e-8,
                                          fast_params());
    ASSERT_EQ(set.zeros.size(), 1u);
    EXPECT_EQ(set.zeros[0].multiplicity, 2);
    EXPECT_LT(std::abs(set.zeros[0].location), 1e-7);
    EXPECT_EQ(topological_multiplicity(0, 2), 1);
    EXPECT_TRUE(near_nonpositive_integer(set.zeros[0].location));
    EXPECT_FALSE(near_nonpositive_integer(Complex(fix().delta_result.delta, 0.0)));
}
