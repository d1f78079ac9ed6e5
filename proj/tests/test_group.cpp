#include <gtest/gtest.h>

#include <cmath>

#include "schottky/schottky_group.hpp"
#include "schottky/spectra.hpp"

using namespace schottky;

namespace {

bool has_issue(const ValidationReport& rep, const std::string& check) {
    for (const auto& issue : rep.issues)
        if (issue.check == check) return true;
    return false;
}

}  // namespace

TEST(FunnelBuilder, ProducesValidGroupWithRequestedLengths) {
    const SchottkyGroup g = build_funnel_group(2, {4.0, 4.0});
    const ValidationReport rep = validate_schottky(g);
    EXPECT_TRUE(rep.valid);
    EXPECT_GT(rep.worst_contraction_margin, 0.0);
    EXPECT_LT(rep.worst_pairing_error, 1e-12);
    for (int j = 0; j < 2; ++j)
        EXPECT_NEAR(displacement_length(g.generator(j)), 4.0, 1e-10);
    // inverse generators carry the same translation length
    EXPECT_NEAR(displacement_length(g.generator(2)), 4.0, 1e-10);
    for (int i = 0; i < g.alphabet_size(); ++i)
        EXPECT_EQ(g.disk(i).center.imag(), 0.0);
}

TEST(FunnelBuilder, MixedLengths) {
    const SchottkyGroup g = build_funnel_group(3, {5.0, 4.0, 6.0});
    EXPECT_TRUE(validate_schottky(g).valid);
    EXPECT_NEAR(displacement_length(g.generator(0)), 5.0, 1e-10);
    EXPECT_NEAR(displacement_length(g.generator(1)), 4.0, 1e-10);
    EXPECT_NEAR(displacement_length(g.generator(2)), 6.0, 1e-10);
}

TEST(FunnelBuilder, RejectsDegenerateAndInfeasibleInput) {
    EXPECT_THROW(build_funnel_group(2, {0.0, 4.0}), InfeasibleConfigurationError);
    EXPECT_THROW(build_funnel_group(2, {-1.0, 4.0}), InfeasibleConfigurationError);
    EXPECT_THROW(build_funnel_group(2, {4.0}), InfeasibleConfigurationError);
    // short lengths force disk radii too large for unit spacing
    EXPECT_THROW(build_funnel_group(2, {0.2, 0.2}), InfeasibleConfigurationError);
}

TEST(FunnelBuilder, FeasibleGridValidates) {
    for (double l1 : {3.5, 4.0, 5.0, 6.0})
        for (double l2 : {3.5, 4.5, 6.0})
            EXPECT_TRUE(validate_schottky(build_funnel_group(2, {l1, l2})).valid);
}

TEST(ValidateSchottky, ReportsOverlappingDiskPair) {
    SchottkyGroup good = build_funnel_group(2, {4.0, 4.0});
    std::vector<Disk> disks;
    for (int i = 0; i < 4; ++i) disks.push_back(good.disk(i));
    disks[1].center = disks[0].center + Complex(0.3, 0.0);  // overlap disks 0 and 1
    std::vector<MoebiusMap> gens = {good.generator(0), good.generator(1)};
    const SchottkyGroup bad(2, disks, gens);
    const ValidationReport rep = validate_schottky(bad);
    EXPECT_FALSE(rep.valid);
    bool found_pair = false;
    for (const auto& issue : rep.issues)
        if (issue.check == "disjoint closures" && issue.i == 0 && issue.j == 1) found_pair = true;
    EXPECT_TRUE(found_pair);
}

TEST(ValidateSchottky, ReportsCenterOffRealAxis) {
    SchottkyGroup good = build_funnel_group(2, {4.0, 4.0});
    std::vector<Disk> disks;
    for (int i = 0; i < 4; ++i) disks.push_back(good.disk(i));
    disks[2].center += Complex(0.0, 0.5);
    const SchottkyGroup bad(2, disks, {good.generator(0), good.generator(1)});
    const ValidationReport rep = validate_schottky(bad);
    EXPECT_FALSE(rep.valid);
    EXPECT_TRUE(has_issue(rep, "center off real axis"));
}

TEST(ValidateSchottky, ReportsBrokenPairing) {
    SchottkyGroup good = build_funnel_group(2, {4.0, 4.0});
    std::vector<Disk> disks;
    for (int i = 0; i < 4; ++i) disks.push_back(good.disk(i));
    // generator 1 pairs the wrong disks
    std::vector<MoebiusMap> gens = {good.generator(0),
                                    MoebiusMap::from_coefficients(2.0, 0.0, 0.0, 0.5)};
    const ValidationReport rep = validate_schottky(SchottkyGroup(2, disks, gens));
    EXPECT_FALSE(rep.valid);
}

TEST(SchottkyGroup, RejectsRankOne) {
    std::vector<Disk> disks(2, Disk{Complex(0.0, 0.0), 0.1});
    EXPECT_THROW(SchottkyGroup(1, disks, {MoebiusMap::identity()}), InvalidGroupError);
}

TEST(SchottkyGroup, FingerprintDistinguishesGroups) {
    const SchottkyGroup a = build_funnel_group(2, {4.0, 4.0});
    const SchottkyGroup b = build_funnel_group(2, {4.0, 5.0});
    EXPECT_NE(a.fingerprint(), b.fingerprint());
    EXPECT_EQ(a.fingerprint(), build_funnel_group(2, {4.0, 4.0}).fingerprint());
}

TEST(FunnelBuilder, LongerFunnelsShrinkHausdorffDimension) {
    // bisection oracle at two parameter points
    const double d1 = hausdorff_dimension(build_funnel_group(2, {4.0, 4.0})).delta;
    const double d2 = hausdorff_dimension(build_funnel_group(2, {5.0, 5.0})).delta;
    EXPECT_GT(d1, d2);
    const double d3 = hausdorff_dimension(build_funnel_group(2, {6.0, 6.0})).delta;
    EXPECT_GT(d2, d3);
}
