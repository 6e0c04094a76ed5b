#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ca2d/gf2.hpp"

namespace ca2d {

// Two-dimensional binary cellular automata on an m x n grid with the
// Moore neighborhood and null boundary. Each neighbor position carries a
// power-of-two weight:
//
//        64 | 128 | 256
//       ----+-----+----
//        32 |  1  |  2
//       ----+-----+----
//        16 |  8  |  4
//
// A rule number 0..511 is a sum of weights; a cell's next state is the
// XOR of the named neighbors. Grids vectorize row-major (cell (i, j) is
// component i*n + j), which turns one evolution step under rule r into
// multiplication by an mn x mn matrix over GF(2): the sum of the
// "fundamental" matrices of r's weights.

inline constexpr std::array<int, 9> kNeighborhoodBits = {1, 2, 4, 8, 16, 32, 64, 128, 256};

struct NeighborOffset {
    int dr, dc;
};

// Offset of the neighbor a weight refers to, relative to the cell being
// updated (row delta, column delta).
inline NeighborOffset neighbor_offset(int bit) {
    switch (bit) {
        case 1:   return {0, 0};
        case 2:   return {0, 1};
        case 4:   return {1, 1};
        case 8:   return {1, 0};
        case 16:  return {1, -1};
        case 32:  return {0, -1};
        case 64:  return {-1, -1};
        case 128: return {-1, 0};
        case 256: return {-1, 1};
        default:
            throw InvalidRule("neighbor_offset: " + std::to_string(bit) +
                              " is not a neighborhood weight");
    }
}

// mn x mn matrix of the single-weight rule: component (i, j) of the next
// state reads cell (i+dr, j+dc), or 0 beyond the boundary.
inline BitMatrix fundamental_matrix(int bit, std::size_t m, std::size_t n) {
    if (m < 1 || n < 1)
        throw GeometryError("fundamental_matrix: grid must be at least 1x1");
    NeighborOffset off = neighbor_offset(bit);
    BitMatrix mat(m * n, m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            long si = static_cast<long>(i) + off.dr;
            long sj = static_cast<long>(j) + off.dc;
            if (si < 0 || sj < 0 || si >= static_cast<long>(m) || sj >= static_cast<long>(n))
                continue;
            mat.set(i * n + j, static_cast<std::size_t>(si) * n + static_cast<std::size_t>(sj), true);
        }
    }
    return mat;
}

inline void check_rule_number(unsigned rule) {
    if (rule > 511)
        throw InvalidRule("rule " + std::to_string(rule) + " outside 0..511");
}

// XOR of the fundamental matrices named by the rule's set weights.
inline BitMatrix rule_matrix(unsigned rule, std::size_t m, std::size_t n) {
    check_rule_number(rule);
    BitMatrix mat(m * n, m * n);
    for (int bit : kNeighborhoodBits)
        if (rule & static_cast<unsigned>(bit))
            mat = add(mat, fundamental_matrix(bit, m, n));
    return mat;
}

// One evolution step computed directly from neighborhood semantics.
// Redundant with rule_matrix by design: the two paths cross-check each
// other in the tests.
inline BitMatrix evolve_direct(const BitMatrix& state, unsigned rule) {
    check_rule_number(rule);
    std::size_t m = state.rows(), n = state.cols();
    BitMatrix next(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            bool value = false;
            for (int bit : kNeighborhoodBits) {
                if (!(rule & static_cast<unsigned>(bit))) continue;
                NeighborOffset off = neighbor_offset(bit);
                long si = static_cast<long>(i) + off.dr;
                long sj = static_cast<long>(j) + off.dc;
                if (si < 0 || sj < 0 || si >= static_cast<long>(m) || sj >= static_cast<long>(n))
                    continue;
                value ^= state.get(static_cast<std::size_t>(si), static_cast<std::size_t>(sj));
            }
            next.set(i, j, value);
        }
    }
    return next;
}

// Number of weights summed in the rule (its "group" in the 9-choose-k
// classification of the 512 rules).
inline int rule_group(unsigned rule) {
    check_rule_number(rule);
    return std::popcount(rule);
}

// All rules whose matrix is invertible on an m x n grid, ascending.
// Counts are grid-dependent and have to be measured, not assumed.
inline std::vector<unsigned> enumerate_invertible_rules(std::size_t m, std::size_t n) {
    if (m < 1 || n < 1)
        throw GeometryError("enumerate_invertible_rules: grid must be at least 1x1");
    std::vector<unsigned> rules;
    for (unsigned r = 0; r < 512; ++r)
        if (is_nonsingular(rule_matrix(r, m, n)))
            rules.push_back(r);
    return rules;
}

// Hybrid rule: every row of the mn x mn transition matrix may follow a
// different linear update, so the matrix is drawn directly as a random
// nonsingular matrix instead of from the 512 uniform rules.
inline BitMatrix hybrid_rule_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    if (m < 1 || n < 1)
        throw GeometryError("hybrid_rule_matrix: grid must be at least 1x1");
    return random_nonsingular(m * n, seed);
}

} // namespace ca2d
