#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ca2d/errors.hpp"
#include "ca2d/rng.hpp"

namespace ca2d {

// Vector over GF(2), bit-packed into 64-bit words (bit i lives in word
// i/64 at position i%64). Unused bits of the last word stay zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size)
        : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool value) {
        std::uint64_t mask = std::uint64_t(1) << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::size_t popcount() const {
        std::size_t total = 0;
        for (std::uint64_t w : words_) total += std::popcount(w);
        return total;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    friend class BitMatrix;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Dense matrix over GF(2). Rows are bit-packed independently, row-major:
// entry (i, j) lives in word i*words_per_row + j/64 at position j%64.
// Addition is XOR, multiplication accumulates rows of the right factor
// for each set bit of the left — no per-bit inner loops.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64),
          words_(rows * wpr_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t i, std::size_t j) const {
        return (words_[i * wpr_ + (j >> 6)] >> (j & 63)) & 1u;
    }

    void set(std::size_t i, std::size_t j, bool value) {
        std::uint64_t mask = std::uint64_t(1) << (j & 63);
        std::uint64_t& w = words_[i * wpr_ + (j >> 6)];
        if (value)
            w |= mask;
        else
            w &= ~mask;
    }

    std::size_t popcount() const {
        std::size_t total = 0;
        for (std::uint64_t w : words_) total += std::popcount(w);
        return total;
    }

    // Concatenates the rows into a single rows*cols vector (row-major).
    BitVector vectorize() const {
        BitVector v(rows_ * cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (get(i, j)) v.set(i * cols_ + j, true);
        return v;
    }

    static BitMatrix devectorize(const BitVector& v, std::size_t rows, std::size_t cols) {
        if (v.size() != rows * cols)
            throw DimensionMismatch("devectorize: vector of length " +
                                    std::to_string(v.size()) + " cannot fill " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
        BitMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if (v.get(i * cols + j)) m.set(i, j, true);
        return m;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

    friend BitMatrix multiply(const BitMatrix& a, const BitMatrix& b);
    friend BitVector multiply(const BitMatrix& a, const BitVector& v);
    friend BitMatrix add(const BitMatrix& a, const BitMatrix& b);
    friend BitMatrix transpose(const BitMatrix& a);
    friend std::size_t rank(BitMatrix a);
    friend BitMatrix invert(const BitMatrix& a);

private:
    std::uint64_t* row(std::size_t i) { return words_.data() + i * wpr_; }
    const std::uint64_t* row(std::size_t i) const { return words_.data() + i * wpr_; }

    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> words_;
};

inline BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols_ != b.rows_)
        throw DimensionMismatch("multiply: " + std::to_string(a.rows_) + "x" +
                                std::to_string(a.cols_) + " times " +
                                std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    BitMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        std::uint64_t* acc = out.row(i);
        const std::uint64_t* ar = a.row(i);
        for (std::size_t w = 0; w < a.wpr_; ++w) {
            std::uint64_t bits = ar[w];
            while (bits) {
                std::size_t k = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                const std::uint64_t* br = b.row(k);
                for (std::size_t t = 0; t < b.wpr_; ++t) acc[t] ^= br[t];
            }
        }
    }
    return out;
}

inline BitVector multiply(const BitMatrix& a, const BitVector& v) {
    if (a.cols_ != v.size())
        throw DimensionMismatch("multiply: " + std::to_string(a.rows_) + "x" +
                                std::to_string(a.cols_) + " times vector of length " +
                                std::to_string(v.size()));
    BitVector out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        const std::uint64_t* ar = a.row(i);
        std::size_t ones = 0;
        for (std::size_t w = 0; w < a.wpr_; ++w)
            ones += std::popcount(ar[w] & v.words()[w]);
        if (ones & 1) out.set(i, true);
    }
    return out;
}

inline BitMatrix add(const BitMatrix& a, const BitMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw DimensionMismatch("add: " + std::to_string(a.rows_) + "x" +
                                std::to_string(a.cols_) + " plus " +
                                std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    BitMatrix out = a;
    for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] ^= b.words_[w];
    return out;
}

inline BitMatrix transpose(const BitMatrix& a) {
    BitMatrix out(a.cols_, a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t j = 0; j < a.cols_; ++j)
            if (a.get(i, j)) out.set(j, i, true);
    return out;
}

// Rank via forward elimination on a working copy.
inline std::size_t rank(BitMatrix a) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols_ && r < a.rows_; ++c) {
        std::size_t pivot = r;
        while (pivot < a.rows_ && !a.get(pivot, c)) ++pivot;
        if (pivot == a.rows_) continue;
        if (pivot != r)
            for (std::size_t w = 0; w < a.wpr_; ++w)
                std::swap(a.row(r)[w], a.row(pivot)[w]);
        for (std::size_t i = r + 1; i < a.rows_; ++i)
            if (a.get(i, c))
                for (std::size_t w = 0; w < a.wpr_; ++w)
                    a.row(i)[w] ^= a.row(r)[w];
        ++r;
    }
    return r;
}

inline bool is_nonsingular(const BitMatrix& a) {
    return a.rows() == a.cols() && rank(a) == a.rows();
}

// Gauss-Jordan on [A | I]. Throws SingularMatrix when no pivot exists.
inline BitMatrix invert(const BitMatrix& a) {
    if (a.rows_ != a.cols_)
        throw NotSquare("invert: " + std::to_string(a.rows_) + "x" +
                        std::to_string(a.cols_) + " matrix");
    std::size_t n = a.rows_;
    BitMatrix work = a;
    BitMatrix inv = BitMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && !work.get(pivot, c)) ++pivot;
        if (pivot == n)
            throw SingularMatrix("invert: matrix of rank < " + std::to_string(n));
        if (pivot != c)
            for (std::size_t w = 0; w < work.wpr_; ++w) {
                std::swap(work.row(c)[w], work.row(pivot)[w]);
                std::swap(inv.row(c)[w], inv.row(pivot)[w]);
            }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || !work.get(i, c)) continue;
            for (std::size_t w = 0; w < work.wpr_; ++w) {
                work.row(i)[w] ^= work.row(c)[w];
                inv.row(i)[w] ^= inv.row(c)[w];
            }
        }
    }
    return inv;
}

// Random nonsingular matrix as L * U * P: unit lower triangular, unit
// upper triangular, and a permutation, each filled from the seed. The
// product is nonsingular by construction, so no rejection loop is needed.
inline BitMatrix random_nonsingular(std::size_t n, std::uint64_t seed) {
    SplitMix64 g(seed);
    BitMatrix lower = BitMatrix::identity(n);
    BitMatrix upper = BitMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (g.next_bit()) lower.set(i, j, true);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (g.next_bit()) upper.set(i, j, true);
    std::vector<std::uint32_t> perm = keyed_permutation(n, g);
    BitMatrix pm(n, n);
    for (std::size_t i = 0; i < n; ++i) pm.set(i, perm[i], true);
    return multiply(multiply(lower, upper), pm);
}

} // namespace ca2d
