#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sensortext/dataset.hpp"
#include "sensortext/rng.hpp"

namespace sensortext {

/// Writes `<root>/<subject>.csv` files in the layout load_subject_csv reads:
/// piecewise-linear channels with noise and activity labels in random blocks.
/// Intended for demos and tests; the data carries no physical meaning.
inline void write_synthetic_dataset(const std::filesystem::path& root, const DatasetConfig& cfg,
                                    const std::vector<std::string>& subjects, std::size_t native_length,
                                    std::uint64_t seed) {
    std::filesystem::create_directories(root);
    for (const auto& subject : subjects) {
        SplitMix64 rng(derive_seed(seed, subject, "synthetic"));
        std::ofstream out(root / (subject + ".csv"), std::ios::binary);
        if (!out) throw Error("cannot write synthetic data under " + root.string());
        for (const auto& ch : cfg.channels) out << ch.id << ',';
        out << "label\n";
        std::vector<double> level(cfg.channels.size()), slope(cfg.channels.size());
        for (auto& l : level) l = rng.unit() * 2.0 - 1.0;
        std::size_t label = rng.index(cfg.labels.size());
        std::size_t label_left = 0, slope_left = 0;
        char buf[64];
        for (std::size_t t = 0; t < native_length; ++t) {
            if (label_left == 0) {
                label = rng.index(cfg.labels.size());
                label_left = 50 + rng.index(400);
            }
            if (slope_left == 0) {
                for (auto& s : slope) s = (static_cast<double>(rng.index(3)) - 1.0) * 0.01 * rng.unit();
                slope_left = 5 + rng.index(60);
            }
            for (std::size_t c = 0; c < level.size(); ++c) {
                level[c] += slope[c] + (rng.unit() - 0.5) * 0.002;
                const double v = std::round(level[c] * 1e6) / 1e6;
                auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
                out.write(buf, p - buf);
                out << ',';
            }
            const std::string& name = cfg.labels[label];
            if (name.find_first_of(",\"") != std::string::npos) {
                out << '"';
                for (char ch : name) {
                    if (ch == '"') out << '"';
                    out << ch;
                }
                out << '"';
            } else {
                out << name;
            }
            out << '\n';
            --label_left;
            --slope_left;
        }
    }
}

}  // namespace sensortext
