#pragma once

// Cayley graphs of (Z/NZ)^r with a symmetric generating multiset S.
// Vertices are lattice points mod N; x and y are joined once per s in S
// with y = x + s (edges counted with the multiplicity of S throughout,
// both in the Laplacian and in boundary sizes). The normalized Laplacian
// Delta = I - (1/|S|) sum_s shift_s has the closed-form eigenvalues
//   lambda_a = (1/|S|) sum_{s in S} (1 - cos(2 pi <a, s> / N)),
// one for each lattice character a.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/schottky_group.hpp"

namespace schottky {

struct CayleyGraphSpec {
    int modulus = 2;                        // N >= 2
    int rank = 1;                           // r >= 1
    std::vector<std::vector<int>> vectors;  // S: symmetric multiset of nonzero vectors in Z^r

    int degree() const { return static_cast<int>(vectors.size()); }

    // the standard generating set: images of the Schottky generators under
    // abelianization, i.e. +-e_j
    static CayleyGraphSpec standard(int modulus, int rank) {
        CayleyGraphSpec spec;
        spec.modulus = modulus;
        spec.rank = rank;
        for (int j = 0; j < rank; ++j) {
            std::vector<int> e(rank, 0);
            e[j] = 1;
            spec.vectors.push_back(e);
            e[j] = -1;
            spec.vectors.push_back(e);
        }
        return spec;
    }

    void validate() const {
        if (modulus < 2) throw std::invalid_argument("Cayley modulus must be >= 2");
        if (rank < 1) throw std::invalid_argument("Cayley rank must be >= 1");
        if (vectors.empty()) throw std::invalid_argument("generating set must be nonempty");
        for (const auto& s : vectors) {
            if (static_cast<int>(s.size()) != rank)
                throw std::invalid_argument("generating vector has wrong rank");
            bool zero = true;
            for (int v : s)
                if (v != 0) zero = false;
            if (zero) throw std::invalid_argument("generating vectors must be nonzero");
        }
        // S = -S as a multiset
        std::vector<std::vector<int>> neg;
        for (const auto& s : vectors) {
            std::vector<int> m(s.size());
            for (std::size_t j = 0; j < s.size(); ++j) m[j] = -s[j];
            neg.push_back(m);
        }
        auto sorted = vectors;
        std::sort(sorted.begin(), sorted.end());
        std::sort(neg.begin(), neg.end());
        if (sorted != neg) throw std::invalid_argument("generating set must be symmetric (S = -S)");
    }

    std::uint64_t vertex_count() const {
        std::uint64_t v = 1;
        for (int j = 0; j < rank; ++j) v *= static_cast<std::uint64_t>(modulus);
        return v;
    }
};

// lambda_a in [0, 2] for the character labelled by a (mod N).
inline double eigenvalue_closed_form(const CayleyGraphSpec& spec, const std::vector<int>& a) {
    const double two_pi = 2.0 * std::acos(-1.0);
    double sum = 0.0;
    for (const auto& s : spec.vectors) {
        long dot = 0;
        for (int j = 0; j < spec.rank; ++j) dot += static_cast<long>(a[j]) * s[j];
        sum += 1.0 - std::cos(two_pi * (static_cast<double>(dot % spec.modulus)) / spec.modulus);
    }
    return sum / spec.degree();
}

struct Lambda1Result {
    double value = 0.0;
    std::vector<int> argmin;  // first minimizer in lexicographic order
};

// First nonzero Laplacian eigenvalue by full scan over a != 0
// (requires N^r within budget). Ties resolved lexicographically.
inline Lambda1Result lambda1(const CayleyGraphSpec& spec, std::uint64_t budget = 10000000) {
    spec.validate();
    if (spec.vertex_count() > budget)
        throw std::invalid_argument("lambda1 scan over " + std::to_string(spec.vertex_count()) +
                                    " characters exceeds budget");
    Lambda1Result best;
    best.value = std::numeric_limits<double>::infinity();
    std::vector<int> a(spec.rank, 0);
    while (true) {
        int j = 0;
        while (j < spec.rank && ++a[j] == spec.modulus) a[j++] = 0;
        if (j == spec.rank) break;  // wrapped to a = 0: scan complete
        const double lambda = eigenvalue_closed_form(spec, a);
        const bool improves = lambda < best.value - 1e-15;
        const bool ties = std::abs(lambda - best.value) <= 1e-15 &&
                          std::lexicographical_compare(a.begin(), a.end(), best.argmin.begin(),
                                                       best.argmin.end());
        if (improves || ties) {
            best.value = std::min(lambda, best.value);
            best.argmin = a;
        }
    }
    if (best.value < 1e-12)
        throw InvalidGroupError("Cayley graph is disconnected: lambda_a = 0 for a != 0");
    return best;
}

// Exhaustive Cheeger constant: min over nonempty A with |A| <= |V|/2 of
// |boundary A| / |A|, edges counted with generator multiplicity. Subsets
// are walked in Gray-code order with an incremental boundary count.
inline double cheeger_bruteforce(const CayleyGraphSpec& spec, std::uint64_t max_vertices = 24) {
    spec.validate();
    const std::uint64_t v_count = spec.vertex_count();
    if (v_count > max_vertices)
        throw std::invalid_argument("Cheeger brute force limited to " +
                                    std::to_string(max_vertices) + " vertices; graph has " +
                                    std::to_string(v_count));
    const int v = static_cast<int>(v_count);

    // neighbor lists with multiplicity (directed view; each undirected edge
    // appears once from each endpoint because S is symmetric)
    std::vector<std::vector<int>> neighbors(v);
    std::vector<int> coords(spec.rank);
    for (int x = 0; x < v; ++x) {
        int t = x;
        for (int j = 0; j < spec.rank; ++j) {
            coords[j] = t % spec.modulus;
            t /= spec.modulus;
        }
        for (const auto& s : spec.vectors) {
            int y = 0;
            for (int j = spec.rank - 1; j >= 0; --j) {
                const int c = ((coords[j] + s[j]) % spec.modulus + spec.modulus) % spec.modulus;
                y = y * spec.modulus + c;
            }
            neighbors[x].push_back(y);
        }
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<char> in_set(v, 0);
    long directed_boundary = 0;  // ordered pairs (x, s) crossing the cut
    int size = 0;
    const std::uint64_t total = 1ull << v;
    std::uint64_t gray_prev = 0;
    for (std::uint64_t i = 1; i < total; ++i) {
        const std::uint64_t gray = i ^ (i >> 1);
        const std::uint64_t flipped = gray ^ gray_prev;
        gray_prev = gray;
        int x = 0;
        while (!((flipped >> x) & 1)) ++x;
        // flipping vertex x: each incident edge toggles crossing status
        const bool entering = !in_set[x];
        in_set[x] = entering;
        size += entering ? 1 : -1;
        for (int y : neighbors[x]) {
            if (y == x) continue;  // no loops (vectors nonzero mod N unless degenerate)
            if (in_set[y] == entering)
                directed_boundary -= 2;  // edge became internal (or internal to complement)
            else
                directed_boundary += 2;
        }
        if (size >= 1 && 2 * size <= v) {
            const double h = static_cast<double>(directed_boundary) / 2.0 / size;
            best = std::min(best, h);
        }
    }
    return best;
}

struct CheegerBoundsReport {
    int modulus = 0;
    double lambda_1 = 0.0;
    std::vector<int> argmin;
    double cheeger = 0.0;
    double lower_bound = 0.0;  // (k/2) lambda_1
    double upper_bound = 0.0;  // k sqrt(lambda_1 (1 - lambda_1))
    bool lower_ok = false;
    bool upper_ok = false;
};

// Evaluates both sides of the Cheeger inequality
//   (k/2) lambda_1 <= h <= k sqrt(lambda_1 (1 - lambda_1))
// on a brute-forceable instance. Failures are report content, not errors
// (the upper bound degenerates on bipartite instances with lambda_1 = 1).
inline CheegerBoundsReport cheeger_bounds_report(const CayleyGraphSpec& spec,
                                                 std::uint64_t max_vertices = 24) {
    CheegerBoundsReport rep;
    rep.modulus = spec.modulus;
    const Lambda1Result l1 = lambda1(spec);
    rep.lambda_1 = l1.value;
    rep.argmin = l1.argmin;
    rep.cheeger = cheeger_bruteforce(spec, max_vertices);
    const double k = spec.degree();
    rep.lower_bound = 0.5 * k * rep.lambda_1;
    const double prod = rep.lambda_1 * (1.0 - rep.lambda_1);
    rep.upper_bound = k * std::sqrt(std::max(0.0, prod));
    rep.lower_ok = rep.lower_bound <= rep.cheeger + 1e-12;
    rep.upper_ok = rep.cheeger <= rep.upper_bound + 1e-12;
    return rep;
}

}  // namespace schottky
