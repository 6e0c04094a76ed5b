#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ca2d/cipher.hpp"
#include "ca2d/image.hpp"
#include "ca2d/rng.hpp"
#include "ca2d/runs_test.hpp"

namespace ca2d {

struct Histogram {
    // One 256-bin count table per channel.
    std::vector<std::array<std::uint64_t, 256>> counts;
};

inline Histogram histogram(const PixelImage& img) {
    Histogram h;
    h.counts.assign(img.channels, {});
    for (std::size_t i = 0; i < img.width * img.height; ++i)
        for (std::size_t c = 0; c < img.channels; ++c)
            h.counts[c][img.samples[i * img.channels + c]]++;
    return h;
}

// Chi-square statistic of one channel's histogram against the uniform
// distribution (255 degrees of freedom).
inline double chi_square_uniform(const std::array<std::uint64_t, 256>& bins) {
    std::uint64_t total = 0;
    for (std::uint64_t b : bins) total += b;
    if (total == 0) throw DegenerateSample("chi-square of an empty histogram");
    double expected = static_cast<double>(total) / 256.0;
    double stat = 0.0;
    for (std::uint64_t b : bins) {
        double d = static_cast<double>(b) - expected;
        stat += d * d / expected;
    }
    return stat;
}

// 0.01 critical value of chi-square with 255 degrees of freedom.
inline constexpr double kChiSquareCritical001 = 310.45738821990585;

// Correlation of paired samples, population (1/N) moments throughout:
// E(x) = mean, D(x) = mean squared deviation, cov their cross moment,
// gamma = cov / sqrt(D(x) D(y)). A zero variance is reported through the
// flag (gamma set to 0) rather than thrown: constant planes are a
// legitimate input for analysis.
struct CorrelationStats {
    std::size_t pair_count = 0;
    double mean_x = 0.0, mean_y = 0.0;
    double var_x = 0.0, var_y = 0.0;
    double covariance = 0.0;
    double gamma = 0.0;
    bool zero_variance = false;
};

inline CorrelationStats correlation_stats(const std::vector<double>& xs,
                                          const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw DimensionMismatch("correlation_stats: " + std::to_string(xs.size()) +
                                " vs " + std::to_string(ys.size()) + " samples");
    if (xs.empty()) throw DegenerateSample("correlation of an empty sample");
    CorrelationStats s;
    s.pair_count = xs.size();
    double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s.mean_x += xs[i];
        s.mean_y += ys[i];
    }
    s.mean_x /= n;
    s.mean_y /= n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - s.mean_x, dy = ys[i] - s.mean_y;
        s.var_x += dx * dx;
        s.var_y += dy * dy;
        s.covariance += dx * dy;
    }
    s.var_x /= n;
    s.var_y /= n;
    s.covariance /= n;
    if (s.var_x <= 0.0 || s.var_y <= 0.0) {
        s.zero_variance = true;
        s.gamma = 0.0;
    } else {
        s.gamma = s.covariance / (std::sqrt(s.var_x) * std::sqrt(s.var_y));
    }
    return s;
}

struct CorrelationReport {
    WalkDirection direction = WalkDirection::Horizontal;
    std::uint64_t seed = 0;
    CorrelationStats stats;
    std::vector<double> xs, ys;   // the sampled pairs, for CSV export
};

// Correlation of `pairs` adjacent pixel pairs sampled uniformly with
// replacement from a single-channel plane.
inline CorrelationReport adjacent_correlation(const PixelImage& plane,
                                              WalkDirection direction, std::size_t pairs,
                                              std::uint64_t seed) {
    if (plane.channels != 1)
        throw GeometryError("adjacent_correlation wants a single-channel plane");
    if (pairs == 0) throw DegenerateSample("adjacent_correlation with zero pairs");
    detail::StepDelta d = detail::step_delta(direction);
    if (plane.height < d.dr + 1 || plane.width < d.dc + 1)
        throw ImageTooSmall("image " + std::to_string(plane.height) + "x" +
                            std::to_string(plane.width) + " has no adjacent pair " +
                            direction_name(direction));
    std::size_t row_count = plane.height - d.dr;
    std::size_t col_count = plane.width - d.dc;
    SplitMix64 g(seed);
    CorrelationReport report;
    report.direction = direction;
    report.seed = seed;
    report.xs.reserve(pairs);
    report.ys.reserve(pairs);
    for (std::size_t k = 0; k < pairs; ++k) {
        std::size_t r = static_cast<std::size_t>(g.next_below(row_count));
        std::size_t c = static_cast<std::size_t>(g.next_below(col_count));
        report.xs.push_back(plane.at(r, c));
        report.ys.push_back(plane.at(r + d.dr, c + d.dc));
    }
    report.stats = correlation_stats(report.xs, report.ys);
    return report;
}

// Per-sample comparison of two equally shaped images: the difference
// image is 255 where the samples differ, 0 where they agree.
struct DifferenceReport {
    PixelImage difference;
    std::size_t differing = 0;
    double differing_fraction = 0.0;
};

inline DifferenceReport difference_image(const PixelImage& a, const PixelImage& b) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels)
        throw DimensionMismatch("difference_image: " + std::to_string(a.height) + "x" +
                                std::to_string(a.width) + "x" + std::to_string(a.channels) +
                                " vs " + std::to_string(b.height) + "x" +
                                std::to_string(b.width) + "x" + std::to_string(b.channels));
    DifferenceReport report;
    report.difference = make_image(a.width, a.height, a.channels);
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        if (a.samples[i] != b.samples[i]) {
            report.difference.samples[i] = 255;
            report.differing++;
        }
    report.differing_fraction =
        static_cast<double>(report.differing) / static_cast<double>(a.samples.size());
    return report;
}

// How much damage a near-miss key does: the same plaintext under both
// keys (ciphertext difference), and the first ciphertext opened with the
// second key (decryption difference against the plaintext).
struct KeySensitivityReport {
    DifferenceReport encryption;   // E(img, k1) vs E(img, k2)
    DifferenceReport decryption;   // D(E(img, k1), k2) vs img
};

inline KeySensitivityReport key_sensitivity(const PixelImage& img, const CipherKey& k1,
                                            const CipherKey& k2) {
    PixelImage e1 = encrypt_image(img, k1);
    PixelImage e2 = encrypt_image(img, k2);
    KeySensitivityReport report;
    report.encryption = difference_image(e1, e2);
    report.decryption = difference_image(decrypt_image(e1, k2), img);
    return report;
}

inline void write_histogram_csv(const Histogram& h, std::ostream& out) {
    out << "channel,bin,count\n";
    for (std::size_t c = 0; c < h.counts.size(); ++c)
        for (std::size_t b = 0; b < 256; ++b)
            out << c << "," << b << "," << h.counts[c][b] << "\n";
}

inline void write_pairs_csv(const CorrelationReport& report, std::ostream& out) {
    out << "x,y\n";
    for (std::size_t i = 0; i < report.xs.size(); ++i)
        out << report.xs[i] << "," << report.ys[i] << "\n";
}

inline void write_correlation_report(const CorrelationReport& report, std::ostream& out) {
    out << "direction=" << direction_name(report.direction) << "\n"
        << "pairs=" << report.stats.pair_count << "\n"
        << "seed=" << report.seed << "\n"
        << "mean_x=" << report.stats.mean_x << "\n"
        << "mean_y=" << report.stats.mean_y << "\n"
        << "var_x=" << report.stats.var_x << "\n"
        << "var_y=" << report.stats.var_y << "\n"
        << "covariance=" << report.stats.covariance << "\n"
        << "gamma=" << report.stats.gamma << "\n"
        << "zero_variance=" << (report.stats.zero_variance ? 1 : 0) << "\n";
}

} // namespace ca2d
