#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>

#include "schottky/schottky_group.hpp"
#include "schottky/word_store.hpp"
#include "schottky/words.hpp"

using namespace schottky;

namespace {

// independent admissibility-table power oracle in exact integer arithmetic
std::uint64_t dense_trace_power(int rank, int n) {
    const int m = 2 * rank;
    std::vector<std::uint64_t> a(m * m, 1), p(m * m, 0), t(m * m);
    for (int i = 0; i < m; ++i) a[i * m + (i + rank) % m] = 0;
    for (int i = 0; i < m; ++i) p[i * m + i] = 1;
    for (int step = 0; step < n; ++step) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                std::uint64_t s = 0;
                for (int k = 0; k < m; ++k) s += p[i * m + k] * a[k * m + j];
                t[i * m + j] = s;
            }
        p.swap(t);
    }
    std::uint64_t tr = 0;
    for (int i = 0; i < m; ++i) tr += p[i * m + i];
    return tr;
}

Word make_word(int rank, std::initializer_list<int> letters) {
    std::vector<std::uint8_t> l;
    for (int x : letters) l.push_back(static_cast<std::uint8_t>(x));
    return Word::reduced(rank, std::move(l));
}

}  // namespace

TEST(Enumeration, SingleLetterWords) {
    const SchottkyGroup g = build_funnel_group(2, {4.0, 4.0});
    const WordTable t = enumerate_admissible_cyclic(g, 1);
    EXPECT_EQ(t.count(), 4u);
    for (std::size_t row = 0; row < t.count(); ++row)
        EXPECT_NEAR(t.length(row), 4.0, 1e-10);
}

TEST(Enumeration, LengthTwoCountIsTwelve) {
    const SchottkyGroup g = build_funnel_group(2, {4.0, 4.0});
    EXPECT_EQ(enumerate_admissible_cyclic(g, 2).count(), 12u);
}

TEST(Enumeration, CountsMatchAdmissibilityTableTrace) {
    const SchottkyGroup g2 = build_funnel_group(2, {4.0, 4.0});
    for (int n = 1; n <= 8; ++n) {
        EXPECT_EQ(enumerate_admissible_cyclic(g2, n).count(), dense_trace_power(2, n)) << n;
        EXPECT_NEAR(admissible_cyclic_count(2, n), static_cast<double>(dense_trace_power(2, n)),
                    0.1);
    }
    const SchottkyGroup g3 = build_funnel_group(3, {4.0, 4.5, 5.0});
    for (int n = 1; n <= 5; ++n)
        EXPECT_EQ(enumerate_admissible_cyclic(g3, n).count(), dense_trace_power(3, n)) << n;
}

TEST(Enumeration, DuplicateFreeAndClosedUnderRotation) {
    const SchottkyGroup g = build_funnel_group(2, {4.0, 4.0});
    const WordTable t = enumerate_admissible_cyclic(g, 5);
    std::set<std::string> seen;
    for (std::size_t row = 0; row < t.count(); ++row)
        seen.insert(std::string(reinterpret_cast<const char*>(t.letters(row)), 5));
    EXPECT_EQ(seen.size(), t.count());
    for (std::size_t row = 0; row < t.count(); ++row) {
        std::string w(reinterpret_cast<const char*>(t.letters(row)), 5);
        for (int shift = 1; shift < 5; ++shift) {
            std::string rot = w.substr(shift) + w.substr(0, shift);
            EXPECT_TRUE(seen.count(rot)) << "missing rotation at row " << row;
        }
    }
}

TEST(Enumeration, BudgetExceededThrows) {
    const SchottkyGroup g = build_funnel_group(2, {4.0, 4.0});
    EXPECT_THROW(enumerate_admissible_cyclic(g, 10, 100), WordBudgetError);
}

TEST(Enumeration, WordLengthsAreCyclicallyInvariant) {
    const SchottkyGroup g = build_funnel_group(2, {5.0, 3.5});
    const WordTable t = enumerate_admissible_cyclic(g, 4);
    std::map<std::string, double> ell;
    for (std::size_t row = 0; row < t.count(); ++row)
        ell[std::string(reinterpret_cast<const char*>(t.letters(row)), 4)] = t.length(row);
    for (const auto& [w, l] : ell) {
        const std::string rot = w.substr(1) + w.substr(0, 1);
        EXPECT_NEAR(ell.at(rot), l, 1e-9 * (1.0 + l));
    }
}

TEST(PrimitiveNecklaces, CountsForShortLengths) {
    const SchottkyGroup g = build_funnel_group(2, {4.0, 4.0});
    // every single letter is primitive and its own rotation class
    EXPECT_EQ(primitive_necklace_rows(enumerate_admissible_cyclic(g, 1)).size(), 4u);
    // length 2: 12 cyclic words, 4 are squares of letters, remaining 8 pair up
    EXPECT_EQ(primitive_necklace_rows(enumerate_admissible_cyclic(g, 2)).size(), 4u);
}

TEST(Word, RejectsNonReduced) {
    EXPECT_THROW(make_word(2, {0, 2}), NonReducedWordError);   // S1 S1^{-1}
    EXPECT_THROW(make_word(2, {3, 1}), NonReducedWordError);   // S2^{-1} S2
    EXPECT_THROW(make_word(2, {0, 5}), NonReducedWordError);   // out of range
    EXPECT_NO_THROW(make_word(2, {0, 1, 0, 1}));
}

TEST(Abelianization, ExponentSums) {
    const auto v1 = abelianization(make_word(2, {0, 1, 0, 1}));  // S1 S2 S1 S2
    EXPECT_EQ(v1, (std::vector<int>{2, 2}));
    EXPECT_EQ(abelianization(make_word(2, {})), (std::vector<int>{0, 0}));
    const auto v2 = abelianization(make_word(2, {0, 1, 2}));  // S1 S2 S1^{-1}
    EXPECT_EQ(v2, (std::vector<int>{0, 1}));
}

TEST(Abelianization, HomomorphismUnderConcatenation) {
    std::mt19937 rng(555);
    const SchottkyGroup g = build_funnel_group(2, {4.0, 4.0});
    const WordTable t = enumerate_admissible_cyclic(g, 3);
    std::uniform_int_distribution<std::size_t> pick(0, t.count() - 1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r1 = pick(rng), r2 = pick(rng);
        std::vector<std::uint8_t> cat(t.letters(r1), t.letters(r1) + 3);
        cat.insert(cat.end(), t.letters(r2), t.letters(r2) + 3);
        if ((cat[2] + 2) % 4 == cat[3]) continue;  // concatenation would cancel
        const auto sum = abelianization(Word::reduced(2, cat));
        for (int j = 0; j < 2; ++j)
            EXPECT_EQ(sum[j], t.abelianization(r1)[j] + t.abelianization(r2)[j]);
    }
}

TEST(Character, GeneratorValues) {
    const Character triv = Character::trivial(2);
    EXPECT_NEAR(std::abs(character_value(triv, make_word(2, {0, 1, 0})) - Complex(1.0, 0.0)), 0.0,
                1e-15);
    const Character half = Character::from_theta({0.5, 0.0});
    EXPECT_NEAR(std::abs(character_value(half, make_word(2, {0})) - Complex(-1.0, 0.0)), 0.0,
                1e-14);
    EXPECT_NEAR(std::abs(character_value(half, make_word(2, {0, 0})) - Complex(1.0, 0.0)), 0.0,
                1e-14);
}

TEST(Character, UnitModulusAndMultiplicativity) {
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Character chi = Character::from_theta({u(rng), u(rng)});
        for (double t : chi.theta) {
            EXPECT_GE(t, 0.0);
            EXPECT_LT(t, 1.0);
        }
        const Word w1 = make_word(2, {0, 1});
        const Word w2 = make_word(2, {1, 0});
        EXPECT_NEAR(std::abs(character_value(chi, w1)), 1.0, 1e-14);
        const Word cat = make_word(2, {0, 1, 1, 0});
        EXPECT_NEAR(std::abs(character_value(chi, cat) -
                             character_value(chi, w1) * character_value(chi, w2)),
                    0.0, 1e-13);
    }
}

TEST(CharacterSumIdentity, RankOneExamples) {
    // N=2, r=1, [w] = (1): 1 + (-1) = 0
    EXPECT_NEAR(character_sum_identity_residual(2, Word::reduced(1, {0})), 0.0, 1e-12);
    // [w] = 0 mod 3: all terms 1, sum = 3^r
    EXPECT_NEAR(character_sum_identity_residual(
                    3, Word::reduced(1, {0, 0, 0})), 0.0, 1e-12);
}

TEST(CharacterSumIdentity, RandomWordsSmallModuli) {
    std::mt19937 rng(2025);
    const SchottkyGroup g = build_funnel_group(2, {4.0, 4.0});
    const WordTable t = enumerate_admissible_cyclic(g, 6);
    std::uniform_int_distribution<std::size_t> pick(0, t.count() - 1);
    for (int modulus = 1; modulus <= 5; ++modulus)
        for (int trial = 0; trial < 40; ++trial)
            EXPECT_LT(character_sum_identity_residual(modulus, t.word(pick(rng))), 1e-10);
}

TEST(WordStore, DiskCacheRoundTripsBitExactly) {
    const SchottkyGroup g = build_funnel_group(2, {4.0, 4.0});
    const auto dir = std::filesystem::temp_directory_path() / "schottky_word_cache_test";
    std::filesystem::remove_all(dir);

    WordStore writer(g, dir.string());
    const WordTable& fresh = writer.table(4);
    ASSERT_TRUE(std::filesystem::exists(dir));

    WordStore reader(g, dir.string());
    const WordTable& cached = reader.table(4);
    EXPECT_EQ(cached.raw_letters(), fresh.raw_letters());
    EXPECT_EQ(cached.raw_lengths(), fresh.raw_lengths());  // bitwise double equality
    EXPECT_EQ(cached.raw_abelianizations(), fresh.raw_abelianizations());

    // a different group must not pick up this cache
    const SchottkyGroup other = build_funnel_group(2, {4.0, 5.0});
    WordStore other_store(other, dir.string());
    const WordTable& other_table = other_store.table(4);
    EXPECT_NE(other_table.raw_lengths(), fresh.raw_lengths());
    std::filesystem::remove_all(dir);
}

TEST(WordStore, CacheIsOptionalAndEquivalent) {
    const SchottkyGroup g = build_funnel_group(2, {4.5, 3.5});
    WordStore no_cache(g);
    const auto dir = std::filesystem::temp_directory_path() / "schottky_word_cache_test2";
    std::filesystem::remove_all(dir);
    WordStore with_cache(g, dir.string());
    EXPECT_EQ(no_cache.table(5).raw_lengths(), with_cache.table(5).raw_lengths());
    std::filesystem::remove_all(dir);
}
