#pragma once

// Shared test utilities: naive GF(2) oracles kept deliberately separate
// from the library's bit-packed implementations, plus deterministic
// image generators. Test randomness comes from std::mt19937_64 so the
// oracles never share a generator with the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ca2d/gf2.hpp"
#include "ca2d/image.hpp"

namespace helpers {

using Dense = std::vector<std::vector<int>>;

inline Dense to_dense(const ca2d::BitMatrix& m) {
    Dense d(m.rows(), std::vector<int>(m.cols(), 0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m.get(i, j) ? 1 : 0;
    return d;
}

inline ca2d::BitMatrix from_dense(const Dense& d) {
    ca2d::BitMatrix m(d.size(), d.empty() ? 0 : d[0].size());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d[i].size(); ++j)
            if (d[i][j]) m.set(i, j, true);
    return m;
}

// Triple-loop product over GF(2).
inline Dense naive_multiply(const Dense& a, const Dense& b) {
    std::size_t rows = a.size(), inner = b.size(), cols = b[0].size();
    Dense out(rows, std::vector<int>(cols, 0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < inner; ++k)
            if (a[i][k])
                for (std::size_t j = 0; j < cols; ++j) out[i][j] ^= b[k][j];
    return out;
}

// Row-reduction rank, unpacked ints all the way.
inline std::size_t naive_rank(Dense m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && !m[pivot][c]) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[r]);
        for (std::size_t i = 0; i < rows; ++i)
            if (i != r && m[i][c])
                for (std::size_t j = 0; j < cols; ++j) m[i][j] ^= m[r][j];
        ++r;
    }
    return r;
}

inline bool naive_nonsingular(const Dense& m) {
    return !m.empty() && m.size() == m[0].size() && naive_rank(m) == m.size();
}

inline ca2d::BitMatrix random_matrix(std::size_t rows, std::size_t cols,
                                     std::mt19937_64& rng) {
    ca2d::BitMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (rng() & 1) m.set(i, j, true);
    return m;
}

inline ca2d::PixelImage constant_image(std::size_t width, std::size_t height,
                                       std::uint8_t value) {
    ca2d::PixelImage img = ca2d::make_image(width, height, 1);
    for (std::uint8_t& s : img.samples) s = value;
    return img;
}

inline ca2d::PixelImage noise_image(std::size_t width, std::size_t height,
                                    std::uint64_t seed, std::size_t channels = 1) {
    std::mt19937_64 rng(seed);
    ca2d::PixelImage img = ca2d::make_image(width, height, channels);
    for (std::uint8_t& s : img.samples) s = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

// Smooth sinusoid mixture standing in for a photograph: rich gray-level
// range, strongly correlated neighborhoods in every direction.
inline ca2d::PixelImage natural_image(std::size_t width, std::size_t height) {
    ca2d::PixelImage img = ca2d::make_image(width, height, 1);
    for (std::size_t y = 0; y < height; ++y)
        for (std::size_t x = 0; x < width; ++x) {
            double v = 128.0 + 55.0 * std::sin(x / 19.0) * std::cos(y / 23.0) +
                       35.0 * std::sin((x + y) / 31.0) +
                       20.0 * std::cos(x / 11.0 - y / 17.0);
            img.at(y, x) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    return img;
}

} // namespace helpers
