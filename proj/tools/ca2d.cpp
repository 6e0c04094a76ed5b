// Command-line front end: key generation, encryption, decryption, the
// runs-test randomness score, and statistical analyses of images.
// Exits 0 on success and 2 on any failure; diagnostics go to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ca2d/ca2d.hpp"

namespace {

// All outputs are written to a sibling temp file and renamed into place,
// so a failed run never leaves a truncated artifact behind.
void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ca2d::IoError("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw ca2d::IoError("short write to " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ca2d::IoError("cannot rename " + tmp + " to " + path);
    }
}

void write_image_atomic(const ca2d::PixelImage& img, const std::string& path) {
    std::ostringstream buf;
    ca2d::write_image(img, buf);
    write_file_atomic(path, buf.str());
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(10);
    out << v;
    return out.str();
}

struct ScoreOptions {
    std::string in, report;
    ca2d::RandTestConfig cfg;
    std::string direction = "diagonal";
    unsigned threads = 1;
    int channel = -1;
};

void run_score(const ScoreOptions& opt) {
    ca2d::RandTestConfig cfg = opt.cfg;
    cfg.direction = ca2d::parse_direction(opt.direction);
    if (!ca2d::sequence_length_adequate(cfg))
        std::cerr << "ca2d: warning: sequence length " << cfg.pixels * cfg.moves
                  << " is short for the normal approximation (20+ recommended)\n";
    ca2d::PixelImage img = ca2d::read_image(opt.in);
    if (opt.channel >= 0) {
        if (static_cast<std::size_t>(opt.channel) >= img.channels)
            throw ca2d::GeometryError("channel " + std::to_string(opt.channel) +
                                      " of a " + std::to_string(img.channels) +
                                      "-channel image");
        img = ca2d::extract_channel(img, static_cast<std::size_t>(opt.channel));
    }
    if (img.channels == 1) {
        ca2d::RandomnessReport report = ca2d::score_image(img, cfg, opt.threads);
        if (!opt.report.empty()) {
            std::ostringstream buf;
            ca2d::write_report_csv(report, buf);
            write_file_atomic(opt.report, buf.str());
        }
        std::cout << "score=" << format_double(report.score) << "\n";
    } else {
        if (!opt.report.empty())
            throw ca2d::GeometryError(
                "--report wants a single plane; pick one with --channel");
        ca2d::ColorRandomnessReport report = ca2d::score_color_image(img, cfg, opt.threads);
        for (std::size_t c = 0; c < report.channels.size(); ++c)
            std::cout << "score_channel" << c << "="
                      << format_double(report.channels[c].score) << "\n";
        std::cout << "score=" << format_double(report.summary) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D cellular-automaton image encryption and randomness scoring"};
    app.require_subcommand(1);

    // keygen
    std::string kg_mode = "W1", kg_in, kg_out, kg_axis = "row";
    std::uint64_t kg_seed = 0;
    auto* keygen = app.add_subcommand("keygen", "Generate a key for an image's shape");
    keygen->add_option("--mode", kg_mode, "Cipher mode W1..W6")->required();
    keygen->add_option("--in", kg_in, "Image the key will encrypt")->required();
    keygen->add_option("--out", kg_out, "Key file to write")->required();
    auto* kg_seed_opt =
        keygen->add_option("--seed", kg_seed, "Master seed (default: system entropy)");
    auto* kg_axis_opt =
        keygen->add_option("--axis", kg_axis, "Schedule axis for W2/W5: row or column");
    keygen->callback([&] {
        ca2d::CipherMode mode = ca2d::parse_mode(kg_mode);
        if (kg_axis_opt->count() && mode != ca2d::CipherMode::W2 &&
            mode != ca2d::CipherMode::W5)
            throw ca2d::KeyError("--axis only applies to modes W2 and W5");
        ca2d::ScheduleAxis axis =
            kg_axis == "row" ? ca2d::ScheduleAxis::Row
            : kg_axis == "column"
                ? ca2d::ScheduleAxis::Column
                : throw ca2d::KeyError("axis '" + kg_axis + "' (want row or column)");
        std::uint64_t seed = kg_seed;
        if (!kg_seed_opt->count()) {
            std::random_device rd;
            seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        }
        ca2d::PixelImage img = ca2d::read_image(kg_in);
        ca2d::CipherKey key = ca2d::generate_key(mode, img, seed, axis);
        write_file_atomic(kg_out, ca2d::serialize_key(key));
    });

    // encrypt / decrypt
    std::string enc_in, enc_key, enc_out;
    auto* encrypt = app.add_subcommand("encrypt", "Encrypt an image with a key file");
    encrypt->add_option("--in", enc_in, "Plaintext image (PGM/PPM)")->required();
    encrypt->add_option("--key", enc_key, "Key file")->required();
    encrypt->add_option("--out", enc_out, "Ciphertext image to write")->required();
    encrypt->callback([&] {
        ca2d::CipherKey key = ca2d::load_key(enc_key);
        write_image_atomic(ca2d::encrypt_image(ca2d::read_image(enc_in), key), enc_out);
    });

    std::string dec_in, dec_key, dec_out;
    auto* decrypt = app.add_subcommand("decrypt", "Decrypt a ciphertext image");
    decrypt->add_option("--in", dec_in, "Ciphertext image")->required();
    decrypt->add_option("--key", dec_key, "Key file")->required();
    decrypt->add_option("--out", dec_out, "Plaintext image to write")->required();
    decrypt->callback([&] {
        ca2d::CipherKey key = ca2d::load_key(dec_key);
        write_image_atomic(ca2d::decrypt_image(ca2d::read_image(dec_in), key), dec_out);
    });

    // score
    ScoreOptions sc;
    auto* score = app.add_subcommand("score", "Runs-test randomness score of an image");
    score->add_option("--in", sc.in, "Image to score")->required();
    score->add_option("--report", sc.report, "Per-trial CSV report to write");
    score->add_option("--tests", sc.cfg.tests, "Trials per evaluation");
    score->add_option("--evals", sc.cfg.evaluations, "Evaluations per score");
    score->add_option("--pixels", sc.cfg.pixels, "Random walkers per trial");
    score->add_option("--moves", sc.cfg.moves, "Positions per walker");
    score->add_option("--stride", sc.cfg.stride, "Pixels advanced per move");
    score->add_option("--direction", sc.direction, "horizontal, vertical or diagonal");
    score->add_option("--z-crit", sc.cfg.z_critical, "Critical z value");
    score->add_option("--seed", sc.cfg.seed, "Base seed for the trials");
    score->add_option("--threads", sc.threads, "Worker threads");
    score->add_option("--channel", sc.channel, "Score a single channel of an RGB image");
    score->callback([&] { run_score(sc); });

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Statistical analyses");
    analyze->require_subcommand(1);

    std::string hi_in, hi_out;
    auto* hist = analyze->add_subcommand("histogram", "Histogram and chi-square");
    hist->add_option("--in", hi_in, "Image to analyze")->required();
    hist->add_option("--out", hi_out, "Histogram CSV to write");
    hist->callback([&] {
        ca2d::Histogram h = ca2d::histogram(ca2d::read_image(hi_in));
        if (!hi_out.empty()) {
            std::ostringstream buf;
            ca2d::write_histogram_csv(h, buf);
            write_file_atomic(hi_out, buf.str());
        }
        for (std::size_t c = 0; c < h.counts.size(); ++c)
            std::cout << "chi_square_channel" << c << "="
                      << format_double(ca2d::chi_square_uniform(h.counts[c])) << "\n";
        std::cout << "chi_square_critical_001="
                  << format_double(ca2d::kChiSquareCritical001) << "\n";
    });

    std::string co_in, co_dir = "horizontal", co_out, co_pairs_out;
    std::size_t co_pairs = 1000;
    std::uint64_t co_seed = 0;
    int co_channel = -1;
    auto* corr = analyze->add_subcommand("correlation", "Adjacent-pixel correlation");
    corr->add_option("--in", co_in, "Image to analyze")->required();
    corr->add_option("--direction", co_dir, "horizontal, vertical or diagonal");
    corr->add_option("--pairs", co_pairs, "Sample size");
    corr->add_option("--seed", co_seed, "Sampling seed");
    corr->add_option("--channel", co_channel, "Analyze one channel of an RGB image");
    corr->add_option("--out", co_out, "Report file (key=value) instead of stdout");
    corr->add_option("--pairs-out", co_pairs_out, "Sampled pairs CSV to write");
    corr->callback([&] {
        ca2d::PixelImage img = ca2d::read_image(co_in);
        if (co_channel >= 0)
            img = ca2d::extract_channel(img, static_cast<std::size_t>(co_channel));
        else if (img.channels != 1)
            throw ca2d::GeometryError("RGB input: pick a plane with --channel");
        ca2d::CorrelationReport report = ca2d::adjacent_correlation(
            img, ca2d::parse_direction(co_dir), co_pairs, co_seed);
        if (!co_pairs_out.empty()) {
            std::ostringstream buf;
            ca2d::write_pairs_csv(report, buf);
            write_file_atomic(co_pairs_out, buf.str());
        }
        std::ostringstream buf;
        buf.precision(10);
        ca2d::write_correlation_report(report, buf);
        if (!co_out.empty())
            write_file_atomic(co_out, buf.str());
        else
            std::cout << buf.str();
    });

    std::string di_a, di_b, di_out;
    auto* diff = analyze->add_subcommand("diff", "Per-sample difference of two images");
    diff->add_option("--in", di_a, "First image")->required();
    diff->add_option("--in2", di_b, "Second image")->required();
    diff->add_option("--out", di_out, "Difference image to write");
    diff->callback([&] {
        ca2d::DifferenceReport report =
            ca2d::difference_image(ca2d::read_image(di_a), ca2d::read_image(di_b));
        if (!di_out.empty()) write_image_atomic(report.difference, di_out);
        std::cout << "differing_fraction=" << format_double(report.differing_fraction)
                  << "\n";
    });

    std::string ks_in, ks_k1, ks_k2, ks_enc_out, ks_dec_out;
    auto* keysens = analyze->add_subcommand("keysens", "Key sensitivity of a plaintext");
    keysens->add_option("--in", ks_in, "Plaintext image")->required();
    keysens->add_option("--key", ks_k1, "First key file")->required();
    keysens->add_option("--key2", ks_k2, "Second key file")->required();
    keysens->add_option("--enc-diff", ks_enc_out, "Ciphertext difference image to write");
    keysens->add_option("--dec-diff", ks_dec_out, "Decryption difference image to write");
    keysens->callback([&] {
        ca2d::KeySensitivityReport report = ca2d::key_sensitivity(
            ca2d::read_image(ks_in), ca2d::load_key(ks_k1), ca2d::load_key(ks_k2));
        if (!ks_enc_out.empty()) write_image_atomic(report.encryption.difference, ks_enc_out);
        if (!ks_dec_out.empty()) write_image_atomic(report.decryption.difference, ks_dec_out);
        std::cout << "encryption_differing_fraction="
                  << format_double(report.encryption.differing_fraction) << "\n"
                  << "decryption_differing_fraction="
                  << format_double(report.decryption.differing_fraction) << "\n";
    });

    // rules
    std::size_t ru_m = 0, ru_n = 0;
    bool ru_list = false;
    auto* rules = app.add_subcommand("rules", "Count invertible rules on an m x n grid");
    rules->add_option("m", ru_m, "Grid rows")->required();
    rules->add_option("n", ru_n, "Grid columns")->required();
    rules->add_flag("--list", ru_list, "Also print the rule numbers");
    rules->callback([&] {
        if (ru_m < 1 || ru_n < 1)
            throw ca2d::GeometryError("grid must be at least 1x1");
        if (ru_m * ru_n > 64)
            throw ca2d::GeometryError("grid " + std::to_string(ru_m) + "x" +
                                      std::to_string(ru_n) +
                                      " too large to enumerate (want m*n <= 64)");
        std::vector<unsigned> invertible = ca2d::enumerate_invertible_rules(ru_m, ru_n);
        std::cout << "count=" << invertible.size() << "\n";
        if (ru_list)
            for (unsigned r : invertible) std::cout << r << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ca2d::Error& e) {
        std::cerr << "ca2d: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ca2d: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
