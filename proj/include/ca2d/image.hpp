#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ca2d/errors.hpp"
#include "ca2d/gf2.hpp"

namespace ca2d {

// 8-bit raster, grayscale (1 channel) or RGB (3), samples interleaved
// row-major: samples[(y*width + x)*channels + c].
struct PixelImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1;
    std::vector<std::uint8_t> samples;

    std::uint8_t at(std::size_t y, std::size_t x, std::size_t c = 0) const {
        return samples[(y * width + x) * channels + c];
    }
    std::uint8_t& at(std::size_t y, std::size_t x, std::size_t c = 0) {
        return samples[(y * width + x) * channels + c];
    }

    friend bool operator==(const PixelImage&, const PixelImage&) = default;
};

inline PixelImage make_image(std::size_t width, std::size_t height, std::size_t channels) {
    PixelImage img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.samples.assign(width * height * channels, 0);
    return img;
}

namespace detail {

// Next header token, skipping whitespace and '#' comment lines.
inline std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (!std::isspace(c)) break;
    }
    if (c == EOF) throw FormatError("image header truncated");
    do {
        tok.push_back(static_cast<char>(c));
    } while ((c = in.get()) != EOF && !std::isspace(c) && c != '#');
    if (c == '#') in.unget();
    return tok;
}

inline std::size_t pnm_number(std::istream& in, const char* what) {
    std::string tok = pnm_token(in);
    std::size_t value = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9')
            throw FormatError(std::string("image header: bad ") + what + " '" + tok + "'");
        value = value * 10 + static_cast<std::size_t>(ch - '0');
    }
    if (tok.empty()) throw FormatError(std::string("image header: missing ") + what);
    return value;
}

} // namespace detail

// Binary PGM (P5) and PPM (P6), maxval 255 only. '#' comments are
// accepted anywhere in the header but never written back.
inline PixelImage read_image(std::istream& in) {
    std::string magic = detail::pnm_token(in);
    std::size_t channels;
    if (magic == "P5")
        channels = 1;
    else if (magic == "P6")
        channels = 3;
    else
        throw FormatError("unsupported image magic '" + magic + "' (want P5 or P6)");
    std::size_t width = detail::pnm_number(in, "width");
    std::size_t height = detail::pnm_number(in, "height");
    std::size_t maxval = detail::pnm_number(in, "maxval");
    if (width == 0 || height == 0)
        throw FormatError("image has zero dimension");
    if (maxval != 255)
        throw FormatError("maxval " + std::to_string(maxval) + " unsupported (want 255)");
    // The header ends with exactly one whitespace byte before the payload;
    // pnm_token has already consumed it.
    PixelImage img = make_image(width, height, channels);
    in.read(reinterpret_cast<char*>(img.samples.data()),
            static_cast<std::streamsize>(img.samples.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.samples.size())
        throw FormatError("image payload truncated: expected " +
                          std::to_string(img.samples.size()) + " bytes, got " +
                          std::to_string(in.gcount()));
    return img;
}

inline PixelImage read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    try {
        return read_image(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

inline void write_image(const PixelImage& img, std::ostream& out) {
    if (img.channels != 1 && img.channels != 3)
        throw FormatError("image has " + std::to_string(img.channels) +
                          " channels (want 1 or 3)");
    if (img.samples.size() != img.width * img.height * img.channels)
        throw FormatError("image sample buffer does not match its dimensions");
    out << (img.channels == 1 ? "P5" : "P6") << "\n"
        << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.samples.data()),
              static_cast<std::streamsize>(img.samples.size()));
}

inline void write_image(const PixelImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_image(img, out);
    out.flush();
    if (!out) throw IoError("short write to " + path);
}

inline PixelImage extract_channel(const PixelImage& img, std::size_t channel) {
    if (channel >= img.channels)
        throw GeometryError("channel " + std::to_string(channel) + " of a " +
                            std::to_string(img.channels) + "-channel image");
    PixelImage plane = make_image(img.width, img.height, 1);
    for (std::size_t i = 0; i < img.width * img.height; ++i)
        plane.samples[i] = img.samples[i * img.channels + channel];
    return plane;
}

inline PixelImage merge_channels(const std::vector<PixelImage>& planes) {
    if (planes.size() != 1 && planes.size() != 3)
        throw GeometryError("merge_channels: want 1 or 3 planes, got " +
                            std::to_string(planes.size()));
    for (const PixelImage& p : planes)
        if (p.channels != 1 || p.width != planes[0].width || p.height != planes[0].height)
            throw GeometryError("merge_channels: planes disagree in shape");
    PixelImage img = make_image(planes[0].width, planes[0].height, planes.size());
    for (std::size_t c = 0; c < planes.size(); ++c)
        for (std::size_t i = 0; i < img.width * img.height; ++i)
            img.samples[i * img.channels + c] = planes[c].samples[i];
    return img;
}

// One image channel as a bit matrix: each byte expands to its 8 bits,
// most significant first, widening an m x n plane to m x 8n. The matrix
// is then zero-padded at the bottom and right edges up to the next
// multiple of the block size, and the pre-padding size is remembered so
// the expansion can be undone exactly.
struct BitPlaneImage {
    std::size_t pixel_rows = 0;   // m
    std::size_t pixel_cols = 0;   // n
    BitMatrix bits;               // p1 x p2, multiples of the block size

    std::size_t padded_rows() const { return bits.rows(); }
    std::size_t padded_cols() const { return bits.cols(); }

    friend bool operator==(const BitPlaneImage&, const BitPlaneImage&) = default;
};

inline std::size_t round_up(std::size_t value, std::size_t multiple) {
    return (value + multiple - 1) / multiple * multiple;
}

inline BitPlaneImage binarize(const PixelImage& plane, std::size_t block_size = 5) {
    if (plane.channels != 1)
        throw GeometryError("binarize: plane has " + std::to_string(plane.channels) +
                            " channels (want 1)");
    if (block_size < 1) throw GeometryError("binarize: block size must be positive");
    std::size_t m = plane.height, n = plane.width;
    BitPlaneImage bp;
    bp.pixel_rows = m;
    bp.pixel_cols = n;
    bp.bits = BitMatrix(round_up(m, block_size), round_up(8 * n, block_size));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::uint8_t v = plane.at(i, j);
            for (std::size_t b = 0; b < 8; ++b)
                if ((v >> (7 - b)) & 1) bp.bits.set(i, 8 * j + b, true);
        }
    return bp;
}

inline PixelImage debinarize(const BitPlaneImage& bp) {
    if (bp.bits.rows() < bp.pixel_rows || bp.bits.cols() < 8 * bp.pixel_cols)
        throw GeometryError("debinarize: bit matrix smaller than the recorded pixel size");
    PixelImage plane = make_image(bp.pixel_cols, bp.pixel_rows, 1);
    for (std::size_t i = 0; i < bp.pixel_rows; ++i)
        for (std::size_t j = 0; j < bp.pixel_cols; ++j) {
            std::uint8_t v = 0;
            for (std::size_t b = 0; b < 8; ++b)
                v = static_cast<std::uint8_t>((v << 1) | (bp.bits.get(i, 8 * j + b) ? 1 : 0));
            plane.at(i, j) = v;
        }
    return plane;
}

// Non-overlapping block_size x block_size tiles of a padded bit plane,
// row-major, with enough metadata to reassemble the plane exactly.
struct BlockGrid {
    std::size_t block_size = 5;
    std::size_t pixel_rows = 0;
    std::size_t pixel_cols = 0;
    std::size_t block_rows = 0;
    std::size_t block_cols = 0;
    std::vector<BitMatrix> blocks;   // block_rows * block_cols tiles

    const BitMatrix& at(std::size_t r, std::size_t c) const {
        return blocks[r * block_cols + c];
    }
    BitMatrix& at(std::size_t r, std::size_t c) { return blocks[r * block_cols + c]; }
};

inline BlockGrid to_blocks(const BitPlaneImage& bp, std::size_t block_size = 5) {
    if (block_size < 1) throw GeometryError("to_blocks: block size must be positive");
    if (bp.bits.rows() % block_size != 0 || bp.bits.cols() % block_size != 0)
        throw GeometryError("to_blocks: " + std::to_string(bp.bits.rows()) + "x" +
                            std::to_string(bp.bits.cols()) +
                            " plane is not a multiple of block size " +
                            std::to_string(block_size));
    BlockGrid grid;
    grid.block_size = block_size;
    grid.pixel_rows = bp.pixel_rows;
    grid.pixel_cols = bp.pixel_cols;
    grid.block_rows = bp.bits.rows() / block_size;
    grid.block_cols = bp.bits.cols() / block_size;
    grid.blocks.reserve(grid.block_rows * grid.block_cols);
    for (std::size_t br = 0; br < grid.block_rows; ++br)
        for (std::size_t bc = 0; bc < grid.block_cols; ++bc) {
            BitMatrix tile(block_size, block_size);
            for (std::size_t i = 0; i < block_size; ++i)
                for (std::size_t j = 0; j < block_size; ++j)
                    if (bp.bits.get(br * block_size + i, bc * block_size + j))
                        tile.set(i, j, true);
            grid.blocks.push_back(std::move(tile));
        }
    return grid;
}

inline BitPlaneImage from_blocks(const BlockGrid& grid) {
    BitPlaneImage bp;
    bp.pixel_rows = grid.pixel_rows;
    bp.pixel_cols = grid.pixel_cols;
    bp.bits = BitMatrix(grid.block_rows * grid.block_size,
                        grid.block_cols * grid.block_size);
    for (std::size_t br = 0; br < grid.block_rows; ++br)
        for (std::size_t bc = 0; bc < grid.block_cols; ++bc) {
            const BitMatrix& tile = grid.at(br, bc);
            for (std::size_t i = 0; i < grid.block_size; ++i)
                for (std::size_t j = 0; j < grid.block_size; ++j)
                    if (tile.get(i, j))
                        bp.bits.set(br * grid.block_size + i, bc * grid.block_size + j, true);
        }
    return bp;
}

} // namespace ca2d
