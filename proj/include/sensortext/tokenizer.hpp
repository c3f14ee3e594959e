#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"
#include "timeseries.hpp"

namespace sensortext {

/// Bin layout for scaled-value quantization. Data tokens are 1..B; pad and
/// eos ids live outside that range.
class QuantizerConfig {
public:
    QuantizerConfig(std::vector<double> centers, std::vector<double> edges, int pad_token_id,
                    int eos_token_id)
        : centers_(std::move(centers)),
          edges_(std::move(edges)),
          pad_(pad_token_id),
          eos_(eos_token_id) {
        validate();
    }

    /// `num_bins` centers evenly spaced on [low, high], edges at midpoints.
    /// pad = 0, eos = num_bins + 1.
    static QuantizerConfig uniform(int num_bins = 4094, double low = -15.0, double high = 15.0) {
        if (num_bins < 2) throw ConfigError("QuantizerConfig: need at least 2 bins");
        if (!(low < high)) throw ConfigError("QuantizerConfig: low must be < high");
        std::vector<double> centers(static_cast<std::size_t>(num_bins));
        const double step = (high - low) / static_cast<double>(num_bins - 1);
        for (int i = 0; i < num_bins; ++i) centers[static_cast<std::size_t>(i)] = low + step * i;
        centers.back() = high;
        QuantizerConfig cfg(centers, midpoints(centers), 0, num_bins + 1);
        cfg.rule_ = Rule{low, high};
        return cfg;
    }

    int num_bins() const noexcept { return static_cast<int>(centers_.size()); }
    std::span<const double> centers() const noexcept { return centers_; }
    std::span<const double> edges() const noexcept { return edges_; }
    int pad_token_id() const noexcept { return pad_; }
    int eos_token_id() const noexcept { return eos_; }

    bool is_data_token(int id) const noexcept { return id >= 1 && id <= num_bins(); }

    /// Center of data token `id` (1-based).
    double center(int id) const {
        if (!is_data_token(id)) throw FormatError("token " + std::to_string(id) + " is not a data token");
        return centers_[static_cast<std::size_t>(id - 1)];
    }

    double max_center_gap() const noexcept {
        double gap = 0.0;
        for (std::size_t i = 1; i < centers_.size(); ++i) gap = std::max(gap, centers_[i] - centers_[i - 1]);
        return gap;
    }

    /// Stable identifier of the layout (hash of the serialized form).
    std::string config_id() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(to_json().dump())));
        return buf;
    }

    /// Uniform layouts serialize by rule; others list centers and edges.
    nlohmann::json to_json() const {
        nlohmann::json j;
        j["num_bins"] = num_bins();
        if (rule_) {
            j["centers"] = {{"rule", "uniform"}, {"low", rule_->low}, {"high", rule_->high}};
            j["edges"] = {{"rule", "midpoints"}};
        } else {
            j["centers"] = centers_;
            j["edges"] = edges_;
        }
        j["pad_token_id"] = pad_;
        j["eos_token_id"] = eos_;
        return j;
    }

    static QuantizerConfig from_json(const nlohmann::json& j) {
        try {
            const int b = j.at("num_bins").get<int>();
            const auto& c = j.at("centers");
            std::vector<double> centers;
            bool uniform_rule = false;
            double low = 0, high = 0;
            if (c.is_object()) {
                if (c.at("rule").get<std::string>() != "uniform")
                    throw ConfigError("QuantizerConfig: unknown centers rule");
                low = c.at("low").get<double>();
                high = c.at("high").get<double>();
                uniform_rule = true;
                centers = uniform(b, low, high).centers_;
            } else {
                centers = c.get<std::vector<double>>();
            }
            if (static_cast<int>(centers.size()) != b)
                throw ConfigError("QuantizerConfig: num_bins does not match centers");
            const auto& e = j.at("edges");
            std::vector<double> edges;
            if (e.is_object()) {
                if (e.at("rule").get<std::string>() != "midpoints")
                    throw ConfigError("QuantizerConfig: unknown edges rule");
                edges = midpoints(centers);
            } else {
                edges = e.get<std::vector<double>>();
            }
            QuantizerConfig cfg(std::move(centers), std::move(edges), j.at("pad_token_id").get<int>(),
                                j.at("eos_token_id").get<int>());
            if (uniform_rule && e.is_object()) cfg.rule_ = Rule{low, high};
            return cfg;
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError(std::string("QuantizerConfig: ") + ex.what());
        }
    }

private:
    struct Rule {
        double low;
        double high;
    };

    static std::vector<double> midpoints(const std::vector<double>& centers) {
        std::vector<double> edges(centers.size() - 1);
        for (std::size_t i = 0; i + 1 < centers.size(); ++i) edges[i] = 0.5 * (centers[i] + centers[i + 1]);
        return edges;
    }

    void validate() const {
        const std::size_t b = centers_.size();
        if (b < 2) throw ConfigError("QuantizerConfig: need at least 2 bins");
        if (edges_.size() != b - 1) throw ConfigError("QuantizerConfig: need exactly B-1 edges");
        for (std::size_t i = 0; i + 1 < b; ++i) {
            if (!(centers_[i] < edges_[i] && edges_[i] < centers_[i + 1]))
                throw ConfigError("QuantizerConfig: edges must separate ascending centers");
        }
        if (pad_ == eos_) throw ConfigError("QuantizerConfig: pad and eos must differ");
        if (is_data_token(pad_) || is_data_token(eos_))
            throw ConfigError("QuantizerConfig: special ids must lie outside [1, B]");
    }

    std::vector<double> centers_;
    std::vector<double> edges_;
    int pad_;
    int eos_;
    std::optional<Rule> rule_;
};

struct TokenSequence {
    std::vector<int> token_ids;
    double scale = 1.0;
    std::string config_id;
    /// True when the input was all zeros and the scale fell back to 1.
    bool zero_scale_guard = false;
};

struct ScaledSeries {
    TimeSeries series;
    double scale;
};

/// Divides by mean(|x|). All-zero input keeps scale 1 and is returned as-is.
inline ScaledSeries mean_scale(const TimeSeries& series) {
    double acc = 0.0;
    for (double v : series.values()) acc += std::fabs(v);
    const double scale = acc / static_cast<double>(series.size());
    if (scale == 0.0) return {series, 1.0};
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = series[i] / scale;
    return {series.with_values(std::move(out)), scale};
}

/// Bin index for one scaled value: 1 below the first edge, B at or above the
/// last; a value equal to an edge goes to the higher bin.
inline int quantize_value(double x, const QuantizerConfig& cfg) {
    const auto edges = cfg.edges();
    return 1 + static_cast<int>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
}

/// Quantizes already-scaled values and appends eos. `scale` is carried for
/// dequantization.
inline TokenSequence quantize(const TimeSeries& scaled, const QuantizerConfig& cfg, double scale = 1.0) {
    TokenSequence seq;
    seq.token_ids.reserve(scaled.size() + 1);
    for (double v : scaled.values()) {
        if (std::isnan(v)) throw DomainError("quantize: NaN reading");
        seq.token_ids.push_back(quantize_value(v, cfg));
    }
    seq.token_ids.push_back(cfg.eos_token_id());
    seq.scale = scale;
    seq.config_id = cfg.config_id();
    return seq;
}

/// mean_scale followed by quantize.
inline TokenSequence tokenize(const TimeSeries& raw, const QuantizerConfig& cfg) {
    ScaledSeries s = mean_scale(raw);
    TokenSequence seq = quantize(s.series, cfg, s.scale);
    bool all_zero = std::all_of(raw.values().begin(), raw.values().end(), [](double v) { return v == 0.0; });
    seq.zero_scale_guard = all_zero;
    return seq;
}

/// Maps data tokens back to center * scale; pad and eos are dropped. Returns
/// the bare values since an eos-only sequence yields no readings.
inline std::vector<double> dequantize(const TokenSequence& tokens, const QuantizerConfig& cfg) {
    std::vector<double> out;
    out.reserve(tokens.token_ids.size());
    bool seen_eos = false;
    for (int id : tokens.token_ids) {
        if (seen_eos) throw FormatError("dequantize: token after eos");
        if (id == cfg.eos_token_id()) {
            seen_eos = true;
            continue;
        }
        if (id == cfg.pad_token_id()) continue;
        if (!cfg.is_data_token(id)) throw FormatError("dequantize: token " + std::to_string(id) + " outside vocabulary");
        out.push_back(cfg.center(id) * tokens.scale);
    }
    return out;
}

inline nlohmann::json to_json(const TokenSequence& seq) {
    return {{"token_ids", seq.token_ids},
            {"scale", seq.scale},
            {"config_id", seq.config_id},
            {"zero_scale_guard", seq.zero_scale_guard}};
}

}  // namespace sensortext
