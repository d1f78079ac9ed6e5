#pragma once

// Word combinatorics of the free Schottky group. Letters are 0-based
// generator indices in {0..2r-1}; the inverse of letter i is (i+r) mod 2r.
// A word is reduced when no letter is followed by its inverse, and
// cyclically admissible when in addition the last-to-first transition is
// allowed. Periodic-orbit sums run over ALL cyclically admissible words
// (every rotation counted), matching fixed-point counting of the n-fold
// branch map; primitive/necklace bookkeeping is derived on demand.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/moebius.hpp"
#include "schottky/schottky_group.hpp"

namespace schottky {

class Word {
public:
    // Validates reducedness; throws NonReducedWordError.
    static Word reduced(int rank, std::vector<std::uint8_t> letters) {
        const int n = 2 * rank;
        for (std::size_t k = 0; k + 1 < letters.size(); ++k) {
            if (letters[k] >= n || letters[k + 1] >= n)
                throw NonReducedWordError("letter out of range");
            if ((letters[k] + rank) % n == letters[k + 1])
                throw NonReducedWordError("word is not reduced at position " + std::to_string(k));
        }
        if (!letters.empty() && letters.back() >= n)
            throw NonReducedWordError("letter out of range");
        return Word(rank, std::move(letters));
    }

    int rank() const { return rank_; }
    const std::vector<std::uint8_t>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }

    bool cyclically_admissible() const {
        if (letters_.size() < 2) return true;
        return (letters_.back() + rank_) % (2 * rank_) != letters_.front();
    }

private:
    Word(int rank, std::vector<std::uint8_t> letters) : rank_(rank), letters_(std::move(letters)) {}
    int rank_;
    std::vector<std::uint8_t> letters_;
};

// Exponent-sum vector in Z^r: +1 for letter j < r, -1 for letter j+r.
inline std::vector<int> abelianization(const Word& w) {
    std::vector<int> v(w.rank(), 0);
    for (std::uint8_t l : w.letters()) {
        if (l < w.rank())
            ++v[l];
        else
            --v[l - w.rank()];
    }
    return v;
}

// theta in R^r taken mod 1 componentwise; evaluates on words via
// e(<theta, [w]>) with e(t) = exp(2 pi i t).
struct Character {
    std::vector<double> theta;

    static Character trivial(int rank) { return Character{std::vector<double>(rank, 0.0)}; }

    static Character from_theta(std::vector<double> t) {
        for (auto& x : t) x -= std::floor(x);
        return Character{std::move(t)};
    }

    // chi_{a/N} for a lattice character of (Z/NZ)^r
    static Character lattice(int modulus, const std::vector<int>& a) {
        std::vector<double> t(a.size());
        for (std::size_t j = 0; j < a.size(); ++j)
            t[j] = static_cast<double>(a[j] % modulus) / modulus;
        return from_theta(std::move(t));
    }

    int rank() const { return static_cast<int>(theta.size()); }

    bool is_trivial() const {
        for (double t : theta)
            if (t != 0.0) return false;
        return true;
    }

    // distance to the trivial character on the torus (R/Z)^r in the 1-norm
    double torus_norm1() const {
        double s = 0.0;
        for (double t : theta) s += std::min(t, 1.0 - t);
        return s;
    }
};

inline Complex unit_phase(double t) {
    const double a = 2.0 * std::acos(-1.0) * t;
    return {std::cos(a), std::sin(a)};
}

// chi_theta(S_i) for a single generator letter.
inline Complex character_letter_value(const Character& chi, int letter) {
    const int r = chi.rank();
    return (letter < r) ? unit_phase(chi.theta[letter]) : unit_phase(-chi.theta[letter - r]);
}

inline Complex character_value(const Character& chi, const Word& w) {
    const auto v = abelianization(w);
    double t = 0.0;
    for (int j = 0; j < chi.rank(); ++j) t += chi.theta[j] * v[j];
    return unit_phase(t);
}

inline Complex character_abelianized(const Character& chi, const int* abel) {
    double t = 0.0;
    for (int j = 0; j < chi.rank(); ++j) t += chi.theta[j] * abel[j];
    return unit_phase(t);
}

// Residual of the orthogonality identity
//   sum_{a in {0..N-1}^r} chi_{a/N}(w) = N^r * [ [w] == 0 mod N ].
inline double character_sum_identity_residual(int modulus, const Word& w) {
    if (modulus < 1) throw std::invalid_argument("modulus must be >= 1");
    const int r = w.rank();
    const auto abel = abelianization(w);
    bool zero_mod = true;
    for (int v : abel)
        if (((v % modulus) + modulus) % modulus != 0) zero_mod = false;

    std::vector<int> a(r, 0);
    Complex sum = 0.0;
    while (true) {
        sum += character_abelianized(Character::lattice(modulus, a), abel.data());
        int j = 0;
        while (j < r && ++a[j] == modulus) a[j++] = 0;
        if (j == r) break;
    }
    const double expected = zero_mod ? std::pow(static_cast<double>(modulus), r) : 0.0;
    return std::abs(sum - expected);
}

// Flat storage for all cyclically admissible words of one length,
// with displacement length and abelianization cached per row.
class WordTable {
public:
    WordTable(int rank, int word_length) : rank_(rank), n_(word_length) {}

    int rank() const { return rank_; }
    int word_length() const { return n_; }
    std::size_t count() const { return ell_.size(); }

    const std::uint8_t* letters(std::size_t row) const { return letters_.data() + row * n_; }
    double length(std::size_t row) const { return ell_[row]; }
    const int* abelianization(std::size_t row) const { return abel_.data() + row * rank_; }

    Word word(std::size_t row) const {
        return Word::reduced(rank_, std::vector<std::uint8_t>(letters(row), letters(row) + n_));
    }

    void append(const std::uint8_t* letters, double ell, const int* abel) {
        letters_.insert(letters_.end(), letters, letters + n_);
        ell_.push_back(ell);
        abel_.insert(abel_.end(), abel, abel + rank_);
    }

    const std::vector<std::uint8_t>& raw_letters() const { return letters_; }
    const std::vector<double>& raw_lengths() const { return ell_; }
    const std::vector<int>& raw_abelianizations() const { return abel_; }

private:
    int rank_;
    int n_;
    std::vector<std::uint8_t> letters_;
    std::vector<double> ell_;
    std::vector<int> abel_;
};

// trace(A^n) for the 2r x 2r admissibility table A[i][j] = [j != i+r];
// equals the number of cyclically admissible words of length n. Computed
// in doubles (exact until 2^53, and only used for budget checks/tests).
inline double admissible_cyclic_count(int rank, int n) {
    const int m = 2 * rank;
    std::vector<double> a(m * m, 1.0), p(m * m, 0.0), tmp(m * m);
    for (int i = 0; i < m; ++i) a[i * m + (i + rank) % m] = 0.0;
    for (int i = 0; i < m; ++i) p[i * m + i] = 1.0;  // identity
    for (int step = 0; step < n; ++step) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int k = 0; k < m; ++k) s += p[i * m + k] * a[k * m + j];
                tmp[i * m + j] = s;
            }
        p.swap(tmp);
    }
    double tr = 0.0;
    for (int i = 0; i < m; ++i) tr += p[i * m + i];
    return tr;
}

// Enumerates all cyclically admissible words of length n in depth-first
// lexicographic order, carrying the running matrix product so each leaf
// costs one arccosh.
inline WordTable enumerate_admissible_cyclic(const SchottkyGroup& g, int n,
                                             std::uint64_t budget = 10000000) {
    if (n < 1) throw std::invalid_argument("word length must be >= 1");
    const double predicted = admissible_cyclic_count(g.rank(), n);
    if (predicted > static_cast<double>(budget))
        throw WordBudgetError("enumeration of length-" + std::to_string(n) + " words needs " +
                              std::to_string(static_cast<std::uint64_t>(predicted)) +
                              " rows, beyond budget " + std::to_string(budget));

    const int r = g.rank();
    const int m = 2 * r;
    WordTable table(r, n);

    std::vector<std::uint8_t> letters(n);
    std::vector<MoebiusMap> prod(n + 1);
    std::vector<int> abel(r);
    prod[0] = MoebiusMap::identity();

    // iterative DFS over positions
    std::vector<int> next(n, 0);
    int depth = 0;
    while (depth >= 0) {
        if (next[depth] >= m) {
            next[depth] = 0;
            --depth;
            if (depth >= 0) ++next[depth];
            continue;
        }
        const int letter = next[depth];
        if (depth > 0 && (letters[depth - 1] + r) % m == letter) {
            ++next[depth];
            continue;
        }
        letters[depth] = static_cast<std::uint8_t>(letter);
        prod[depth + 1] = compose(prod[depth], g.generator(letter));
        if (depth == n - 1) {
            if (n == 1 || (letters[n - 1] + r) % m != letters[0]) {
                std::fill(abel.begin(), abel.end(), 0);
                for (int k = 0; k < n; ++k) {
                    if (letters[k] < r)
                        ++abel[letters[k]];
                    else
                        --abel[letters[k] - r];
                }
                table.append(letters.data(), displacement_length(prod[n]), abel.data());
            }
            ++next[depth];
        } else {
            ++depth;
        }
    }
    return table;
}

// Rows whose word is primitive (not a power of a shorter word) and the
// lexicographically smallest among its rotations: one representative per
// primitive conjugacy class of word length n.
inline std::vector<std::size_t> primitive_necklace_rows(const WordTable& table) {
    std::vector<std::size_t> rows;
    const int n = table.word_length();
    std::vector<std::uint8_t> rot(n);
    for (std::size_t row = 0; row < table.count(); ++row) {
        const std::uint8_t* w = table.letters(row);
        // primitive: no proper period d | n with w shift-invariant by d
        bool primitive = true;
        for (int d = 1; d < n && primitive; ++d) {
            if (n % d != 0) continue;
            bool periodic = true;
            for (int k = 0; k < n && periodic; ++k)
                if (w[k] != w[(k + d) % n]) periodic = false;
            if (periodic) primitive = false;
        }
        if (!primitive) continue;
        bool minimal = true;
        for (int s = 1; s < n && minimal; ++s) {
            for (int k = 0; k < n; ++k) rot[k] = w[(k + s) % n];
            if (std::lexicographical_compare(rot.begin(), rot.end(), w, w + n)) minimal = false;
        }
        if (minimal) rows.push_back(row);
    }
    return rows;
}

}  // namespace schottky
