#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ca2d/image.hpp"
#include "ca2d/rng.hpp"
#include "ca2d/rules.hpp"

namespace ca2d {

// Block cipher over bit planes: scramble rows/columns with a keyed
// permutation, cut the plane into 5x5 blocks, and replace each block's
// row-major 25-vector with its image under an invertible 25x25 rule
// matrix. Modes differ in how matrices vary across blocks and where the
// matrices come from:
//
//   W1  one uniform CA rule for every block
//   W2  one uniform CA rule per block row (or column)
//   W3  one uniform CA rule per block
//   W4  one hybrid (random nonsingular) matrix for every block
//   W5  one hybrid matrix per block row (or column)
//   W6  one hybrid matrix per block
enum class CipherMode { W1, W2, W3, W4, W5, W6 };

enum class ScheduleAxis { Row, Column };

inline bool is_hybrid(CipherMode mode) {
    return mode == CipherMode::W4 || mode == CipherMode::W5 || mode == CipherMode::W6;
}

inline std::string mode_name(CipherMode mode) {
    switch (mode) {
        case CipherMode::W1: return "W1";
        case CipherMode::W2: return "W2";
        case CipherMode::W3: return "W3";
        case CipherMode::W4: return "W4";
        case CipherMode::W5: return "W5";
        case CipherMode::W6: return "W6";
    }
    throw KeyError("unreachable cipher mode");
}

inline CipherMode parse_mode(const std::string& text) {
    if (text.size() == 2 && text[0] == 'W' && text[1] >= '1' && text[1] <= '6')
        return static_cast<CipherMode>(text[1] - '1');
    throw KeyError("unknown cipher mode '" + text + "' (want W1..W6)");
}

// Pixel and padded-bit-plane dimensions of one image channel.
struct ChannelGeometry {
    std::size_t rows = 0;          // pixel rows m
    std::size_t cols = 0;          // pixel columns n
    std::size_t padded_rows = 0;   // p1 = m rounded up to the block size
    std::size_t padded_cols = 0;   // p2 = 8n rounded up to the block size

    friend bool operator==(const ChannelGeometry&, const ChannelGeometry&) = default;
};

// Complete key material. Exactly one of schedule_seed, rules,
// hybrid_seeds is present: a seed derives the whole schedule, explicit
// lists pin it. scramble_seed 0 means no scrambling (useful for tests;
// generate_key never produces it).
struct CipherKey {
    unsigned version = 1;
    CipherMode mode = CipherMode::W1;
    std::size_t block_size = 5;
    std::uint64_t scramble_seed = 0;
    std::optional<std::uint64_t> schedule_seed;
    std::vector<unsigned> rules;                 // uniform modes only
    std::vector<std::uint64_t> hybrid_seeds;     // hybrid modes only
    ScheduleAxis axis = ScheduleAxis::Row;       // W2/W5 only
    unsigned steps = 1;
    std::vector<ChannelGeometry> geometry;       // one per channel
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& text, const std::string& field) {
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty())
        throw KeyError("field '" + field + "': bad number '" + text + "'");
    return value;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace detail

inline ChannelGeometry geometry_for(std::size_t rows, std::size_t cols, std::size_t block_size) {
    ChannelGeometry g;
    g.rows = rows;
    g.cols = cols;
    g.padded_rows = round_up(rows, block_size);
    g.padded_cols = round_up(8 * cols, block_size);
    return g;
}

// Structural + semantic checks shared by parse_key and generate_key.
inline void validate_key(const CipherKey& key) {
    if (key.version != 1)
        throw KeyError("unsupported key version " + std::to_string(key.version));
    if (key.block_size != 5)
        throw KeyError("block_size " + std::to_string(key.block_size) + " unsupported (want 5)");
    if (key.steps < 1) throw KeyError("steps must be at least 1");
    int sources = (key.schedule_seed ? 1 : 0) + (key.rules.empty() ? 0 : 1) +
                  (key.hybrid_seeds.empty() ? 0 : 1);
    if (sources != 1)
        throw KeyError("key must carry exactly one of schedule_seed, rules, hybrid_seeds");
    if (!key.rules.empty() && is_hybrid(key.mode))
        throw KeyError("explicit rules make no sense for hybrid mode " + mode_name(key.mode));
    if (!key.hybrid_seeds.empty() && !is_hybrid(key.mode))
        throw KeyError("hybrid_seeds make no sense for uniform mode " + mode_name(key.mode));
    if (key.geometry.size() != 1 && key.geometry.size() != 3)
        throw KeyError("key must carry 1 or 3 geometry lines, got " +
                       std::to_string(key.geometry.size()));
    for (const ChannelGeometry& g : key.geometry) {
        if (g.rows == 0 || g.cols == 0)
            throw KeyError("geometry with zero pixel dimension");
        if (g.padded_rows != round_up(g.rows, key.block_size) ||
            g.padded_cols != round_up(8 * g.cols, key.block_size))
            throw KeyError("geometry " + std::to_string(g.rows) + "," + std::to_string(g.cols) +
                           "," + std::to_string(g.padded_rows) + "," +
                           std::to_string(g.padded_cols) +
                           " is inconsistent with block size " + std::to_string(key.block_size));
        if (!(g == key.geometry[0]))
            throw KeyError("channel geometries disagree");
    }
}

// Key file grammar: one "field=value" per line, LF or CRLF, no spaces
// around '='. Fields: version, mode, block_size, scramble_seed, exactly
// one of schedule_seed | rules | hybrid_seeds (lists comma-separated),
// optional axis (row|column, W2/W5 only), optional steps (default 1),
// and one geometry=rows,cols,padded_rows,padded_cols line per channel.
// Unknown and duplicate fields are rejected.
inline CipherKey parse_key(const std::string& text) {
    CipherKey key;
    std::map<std::string, bool> seen;
    bool axis_given = false;
    key.geometry.clear();
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw KeyError("key line without '=': '" + line + "'");
        std::string field = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (field != "geometry") {
            if (seen[field]) throw KeyError("duplicate key field '" + field + "'");
            seen[field] = true;
        }
        if (field == "version") {
            key.version = static_cast<unsigned>(detail::parse_u64(value, field));
        } else if (field == "mode") {
            key.mode = parse_mode(value);
        } else if (field == "block_size") {
            key.block_size = detail::parse_u64(value, field);
        } else if (field == "scramble_seed") {
            key.scramble_seed = detail::parse_u64(value, field);
        } else if (field == "schedule_seed") {
            key.schedule_seed = detail::parse_u64(value, field);
        } else if (field == "rules") {
            for (const std::string& part : detail::split(value, ','))
                key.rules.push_back(static_cast<unsigned>(detail::parse_u64(part, field)));
        } else if (field == "hybrid_seeds") {
            for (const std::string& part : detail::split(value, ','))
                key.hybrid_seeds.push_back(detail::parse_u64(part, field));
        } else if (field == "axis") {
            if (value == "row")
                key.axis = ScheduleAxis::Row;
            else if (value == "column")
                key.axis = ScheduleAxis::Column;
            else
                throw KeyError("axis '" + value + "' (want row or column)");
            axis_given = true;
        } else if (field == "steps") {
            key.steps = static_cast<unsigned>(detail::parse_u64(value, field));
        } else if (field == "geometry") {
            std::vector<std::string> parts = detail::split(value, ',');
            if (parts.size() != 4)
                throw KeyError("geometry wants rows,cols,padded_rows,padded_cols, got '" +
                               value + "'");
            ChannelGeometry g;
            g.rows = detail::parse_u64(parts[0], field);
            g.cols = detail::parse_u64(parts[1], field);
            g.padded_rows = detail::parse_u64(parts[2], field);
            g.padded_cols = detail::parse_u64(parts[3], field);
            key.geometry.push_back(g);
        } else {
            throw KeyError("unknown key field '" + field + "'");
        }
    }
    if (!seen["version"]) throw KeyError("key is missing version");
    if (!seen["mode"]) throw KeyError("key is missing mode");
    if (!seen["block_size"]) throw KeyError("key is missing block_size");
    if (!seen["scramble_seed"]) throw KeyError("key is missing scramble_seed");
    if (axis_given && key.mode != CipherMode::W2 && key.mode != CipherMode::W5)
        throw KeyError("axis only applies to modes W2 and W5");
    validate_key(key);
    return key;
}

inline std::string serialize_key(const CipherKey& key) {
    std::ostringstream out;
    out << "version=" << key.version << "\n";
    out << "mode=" << mode_name(key.mode) << "\n";
    out << "block_size=" << key.block_size << "\n";
    out << "scramble_seed=" << key.scramble_seed << "\n";
    if (key.schedule_seed) {
        out << "schedule_seed=" << *key.schedule_seed << "\n";
    } else if (!key.rules.empty()) {
        out << "rules=";
        for (std::size_t i = 0; i < key.rules.size(); ++i)
            out << (i ? "," : "") << key.rules[i];
        out << "\n";
    } else {
        out << "hybrid_seeds=";
        for (std::size_t i = 0; i < key.hybrid_seeds.size(); ++i)
            out << (i ? "," : "") << key.hybrid_seeds[i];
        out << "\n";
    }
    if (key.mode == CipherMode::W2 || key.mode == CipherMode::W5)
        out << "axis=" << (key.axis == ScheduleAxis::Row ? "row" : "column") << "\n";
    out << "steps=" << key.steps << "\n";
    for (const ChannelGeometry& g : key.geometry)
        out << "geometry=" << g.rows << "," << g.cols << "," << g.padded_rows << ","
            << g.padded_cols << "\n";
    return out.str();
}

inline CipherKey load_key(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_key(buf.str());
    } catch (const KeyError& e) {
        throw KeyError(path + ": " + e.what());
    }
}

inline void save_key(const CipherKey& key, const std::string& path) {
    validate_key(key);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << serialize_key(key);
    out.flush();
    if (!out) throw IoError("short write to " + path);
}

// Fresh seed-based key for an image's shape. All randomness stems from
// master_seed, so key generation is reproducible; the scramble seed is
// kept nonzero because 0 is reserved for "no scrambling".
inline CipherKey generate_key(CipherMode mode, const PixelImage& img,
                              std::uint64_t master_seed,
                              ScheduleAxis axis = ScheduleAxis::Row) {
    if (img.channels != 1 && img.channels != 3)
        throw KeyError("keys cover 1- or 3-channel images, not " +
                       std::to_string(img.channels));
    CipherKey key;
    key.mode = mode;
    key.axis = axis;
    key.scramble_seed = derive_seed(master_seed, 1, 0);
    for (std::uint64_t k = 1; key.scramble_seed == 0; ++k)
        key.scramble_seed = derive_seed(master_seed, 1, k);
    key.schedule_seed = derive_seed(master_seed, 2, 0);
    for (std::size_t c = 0; c < img.channels; ++c)
        key.geometry.push_back(geometry_for(img.height, img.width, key.block_size));
    validate_key(key);
    return key;
}

// Transition matrices for every block of a grid. Distinct matrices are
// stored once; assignment maps each block (row-major) to its matrix.
struct RuleSchedule {
    std::size_t block_rows = 0;
    std::size_t block_cols = 0;
    std::vector<BitMatrix> matrices;
    std::vector<std::uint32_t> assignment;

    const BitMatrix& at(std::size_t r, std::size_t c) const {
        return matrices[assignment[r * block_cols + c]];
    }
};

// Expands key material into per-block transition matrices for a
// block_rows x block_cols grid. Uniform modes draw rule numbers from the
// invertible list (or take them verbatim from the key); hybrid modes
// draw random nonsingular matrices.
inline RuleSchedule derive_schedule(const CipherKey& key, std::size_t block_rows,
                                    std::size_t block_cols) {
    validate_key(key);
    if (block_rows == 0 || block_cols == 0)
        throw GeometryError("derive_schedule: empty block grid");
    RuleSchedule sched;
    sched.block_rows = block_rows;
    sched.block_cols = block_cols;
    std::size_t blocks = block_rows * block_cols;
    bool per_block = key.mode == CipherMode::W3 || key.mode == CipherMode::W6;
    bool per_line = key.mode == CipherMode::W2 || key.mode == CipherMode::W5;
    bool along_rows = key.axis == ScheduleAxis::Row;
    std::size_t slots = per_block ? blocks
                      : per_line  ? (along_rows ? block_rows : block_cols)
                                  : 1;

    // One matrix index per slot; blocks map onto slots below.
    std::vector<std::uint32_t> slot_index(slots);
    if (!is_hybrid(key.mode)) {
        std::vector<unsigned> invertible =
            enumerate_invertible_rules(key.block_size, key.block_size);
        std::vector<unsigned> picks;
        if (!key.rules.empty()) {
            if (key.rules.size() != slots)
                throw KeyError("mode " + mode_name(key.mode) + " on this grid wants " +
                               std::to_string(slots) + " rules, key carries " +
                               std::to_string(key.rules.size()));
            picks = key.rules;
            for (unsigned r : key.rules) {
                bool ok = false;
                for (unsigned v : invertible) ok = ok || v == r;
                if (!ok)
                    throw KeyError("rule " + std::to_string(r) +
                                   " is not invertible at block size " +
                                   std::to_string(key.block_size));
            }
        } else {
            SplitMix64 g(*key.schedule_seed);
            picks.reserve(slots);
            for (std::size_t s = 0; s < slots; ++s)
                picks.push_back(invertible[g.next_below(invertible.size())]);
        }
        std::map<unsigned, std::uint32_t> cache;
        for (std::size_t s = 0; s < slots; ++s) {
            auto it = cache.find(picks[s]);
            if (it == cache.end()) {
                cache.emplace(picks[s], static_cast<std::uint32_t>(sched.matrices.size()));
                slot_index[s] = static_cast<std::uint32_t>(sched.matrices.size());
                sched.matrices.push_back(rule_matrix(picks[s], key.block_size, key.block_size));
            } else {
                slot_index[s] = it->second;
            }
        }
    } else {
        std::vector<std::uint64_t> seeds;
        if (!key.hybrid_seeds.empty()) {
            if (key.hybrid_seeds.size() != slots)
                throw KeyError("mode " + mode_name(key.mode) + " on this grid wants " +
                               std::to_string(slots) + " hybrid seeds, key carries " +
                               std::to_string(key.hybrid_seeds.size()));
            seeds = key.hybrid_seeds;
        } else {
            SplitMix64 g(*key.schedule_seed);
            seeds.reserve(slots);
            for (std::size_t s = 0; s < slots; ++s) seeds.push_back(g.next());
        }
        for (std::size_t s = 0; s < slots; ++s) {
            slot_index[s] = static_cast<std::uint32_t>(sched.matrices.size());
            sched.matrices.push_back(
                hybrid_rule_matrix(key.block_size, key.block_size, seeds[s]));
        }
    }

    sched.assignment.resize(blocks);
    for (std::size_t r = 0; r < block_rows; ++r)
        for (std::size_t c = 0; c < block_cols; ++c) {
            std::size_t slot = per_block ? r * block_cols + c
                             : per_line  ? (along_rows ? r : c)
                                         : 0;
            sched.assignment[r * block_cols + c] = slot_index[slot];
        }
    return sched;
}

// Keyed row/column shuffle of the padded bit plane: column permutation
// first, then rows, both drawn from the seed. Seed 0 is the identity.
inline BitPlaneImage scramble(const BitPlaneImage& bp, std::uint64_t seed) {
    if (seed == 0) return bp;
    SplitMix64 g(seed);
    std::vector<std::uint32_t> colperm = keyed_permutation(bp.padded_cols(), g);
    std::vector<std::uint32_t> rowperm = keyed_permutation(bp.padded_rows(), g);
    BitPlaneImage out;
    out.pixel_rows = bp.pixel_rows;
    out.pixel_cols = bp.pixel_cols;
    out.bits = BitMatrix(bp.padded_rows(), bp.padded_cols());
    for (std::size_t i = 0; i < bp.padded_rows(); ++i)
        for (std::size_t j = 0; j < bp.padded_cols(); ++j)
            if (bp.bits.get(rowperm[i], colperm[j])) out.bits.set(i, j, true);
    return out;
}

inline BitPlaneImage unscramble(const BitPlaneImage& bp, std::uint64_t seed) {
    if (seed == 0) return bp;
    SplitMix64 g(seed);
    std::vector<std::uint32_t> colperm = keyed_permutation(bp.padded_cols(), g);
    std::vector<std::uint32_t> rowperm = keyed_permutation(bp.padded_rows(), g);
    BitPlaneImage out;
    out.pixel_rows = bp.pixel_rows;
    out.pixel_cols = bp.pixel_cols;
    out.bits = BitMatrix(bp.padded_rows(), bp.padded_cols());
    for (std::size_t i = 0; i < bp.padded_rows(); ++i)
        for (std::size_t j = 0; j < bp.padded_cols(); ++j)
            if (bp.bits.get(i, j)) out.bits.set(rowperm[i], colperm[j], true);
    return out;
}

namespace detail {

inline void check_plane_geometry(const BitPlaneImage& bp, const CipherKey& key,
                                 std::size_t channel) {
    if (channel >= key.geometry.size())
        throw KeyError("key has no geometry for channel " + std::to_string(channel));
    const ChannelGeometry& g = key.geometry[channel];
    if (bp.pixel_rows != g.rows || bp.pixel_cols != g.cols ||
        bp.padded_rows() != g.padded_rows || bp.padded_cols() != g.padded_cols)
        throw GeometryError("plane is " + std::to_string(bp.pixel_rows) + "x" +
                            std::to_string(bp.pixel_cols) + " (padded " +
                            std::to_string(bp.padded_rows()) + "x" +
                            std::to_string(bp.padded_cols()) + "), key expects " +
                            std::to_string(g.rows) + "x" + std::to_string(g.cols) +
                            " (padded " + std::to_string(g.padded_rows) + "x" +
                            std::to_string(g.padded_cols) + ")");
}

} // namespace detail

inline BitPlaneImage encrypt_plane(const BitPlaneImage& bp, const CipherKey& key,
                                   std::size_t channel = 0) {
    detail::check_plane_geometry(bp, key, channel);
    BlockGrid grid = to_blocks(scramble(bp, key.scramble_seed), key.block_size);
    RuleSchedule sched = derive_schedule(key, grid.block_rows, grid.block_cols);
    for (std::size_t r = 0; r < grid.block_rows; ++r)
        for (std::size_t c = 0; c < grid.block_cols; ++c) {
            BitVector v = grid.at(r, c).vectorize();
            for (unsigned s = 0; s < key.steps; ++s) v = multiply(sched.at(r, c), v);
            grid.at(r, c) = BitMatrix::devectorize(v, key.block_size, key.block_size);
        }
    return from_blocks(grid);
}

inline BitPlaneImage decrypt_plane(const BitPlaneImage& bp, const CipherKey& key,
                                   std::size_t channel = 0) {
    detail::check_plane_geometry(bp, key, channel);
    BlockGrid grid = to_blocks(bp, key.block_size);
    RuleSchedule sched = derive_schedule(key, grid.block_rows, grid.block_cols);
    for (BitMatrix& m : sched.matrices) m = invert(m);
    for (std::size_t r = 0; r < grid.block_rows; ++r)
        for (std::size_t c = 0; c < grid.block_cols; ++c) {
            BitVector v = grid.at(r, c).vectorize();
            for (unsigned s = 0; s < key.steps; ++s) v = multiply(sched.at(r, c), v);
            grid.at(r, c) = BitMatrix::devectorize(v, key.block_size, key.block_size);
        }
    return unscramble(from_blocks(grid), key.scramble_seed);
}

namespace detail {

// The padded plane is p1 x p2 bits with p2 generally not a multiple of
// 8, and padding is diffused into every block, so the ciphertext raster
// keeps all p1 rows and packs each row's p2 bits into ceil(p2/8) bytes.
// The trailing bits of each row's last byte carry keyed filler rather
// than zeros: constant filler would skew the ciphertext histogram.
inline constexpr std::uint64_t kFillerStream = 0x66696C6CULL;   // "fill"

inline PixelImage pack_cipher_plane(const BitPlaneImage& bp, const CipherKey& key,
                                    std::size_t channel) {
    std::size_t p1 = bp.padded_rows(), p2 = bp.padded_cols();
    std::size_t width = (p2 + 7) / 8;
    SplitMix64 filler(derive_seed(key.scramble_seed, kFillerStream, channel));
    PixelImage out = make_image(width, p1, 1);
    for (std::size_t i = 0; i < p1; ++i)
        for (std::size_t j = 0; j < 8 * width; ++j) {
            bool bit = j < p2 ? bp.bits.get(i, j) : filler.next_bit();
            if (bit) out.at(i, j / 8) |= static_cast<std::uint8_t>(0x80u >> (j % 8));
        }
    return out;
}

inline BitPlaneImage unpack_cipher_plane(const PixelImage& plane, const ChannelGeometry& g) {
    std::size_t expected_width = (g.padded_cols + 7) / 8;
    if (plane.height != g.padded_rows || plane.width != expected_width)
        throw GeometryError("ciphertext channel is " + std::to_string(plane.height) + "x" +
                            std::to_string(plane.width) + " pixels, key expects " +
                            std::to_string(g.padded_rows) + "x" +
                            std::to_string(expected_width));
    BitPlaneImage bp;
    bp.pixel_rows = g.rows;
    bp.pixel_cols = g.cols;
    bp.bits = BitMatrix(g.padded_rows, g.padded_cols);
    for (std::size_t i = 0; i < g.padded_rows; ++i)
        for (std::size_t j = 0; j < g.padded_cols; ++j)
            if ((plane.at(i, j / 8) >> (7 - j % 8)) & 1) bp.bits.set(i, j, true);
    return bp;
}

} // namespace detail

// Encrypts a raster to a raster. The ciphertext image is padded_rows x
// ceil(padded_cols/8) pixels per channel — slightly larger than the
// plaintext because block padding cannot be cropped without losing
// information. decrypt_image undoes everything byte-exactly.
inline PixelImage encrypt_image(const PixelImage& img, const CipherKey& key) {
    validate_key(key);
    if (img.channels != key.geometry.size())
        throw KeyError("key covers " + std::to_string(key.geometry.size()) +
                       " channel(s), image has " + std::to_string(img.channels));
    std::vector<PixelImage> planes;
    for (std::size_t c = 0; c < img.channels; ++c) {
        BitPlaneImage bp = binarize(extract_channel(img, c), key.block_size);
        detail::check_plane_geometry(bp, key, c);
        planes.push_back(detail::pack_cipher_plane(encrypt_plane(bp, key, c), key, c));
    }
    return merge_channels(planes);
}

inline PixelImage decrypt_image(const PixelImage& img, const CipherKey& key) {
    validate_key(key);
    if (img.channels != key.geometry.size())
        throw KeyError("key covers " + std::to_string(key.geometry.size()) +
                       " channel(s), image has " + std::to_string(img.channels));
    std::vector<PixelImage> planes;
    for (std::size_t c = 0; c < img.channels; ++c) {
        BitPlaneImage bp =
            detail::unpack_cipher_plane(extract_channel(img, c), key.geometry[c]);
        planes.push_back(debinarize(decrypt_plane(bp, key, c)));
    }
    return merge_channels(planes);
}

} // namespace ca2d
