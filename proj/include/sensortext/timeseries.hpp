#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace sensortext {

/// One channel of sensor readings with its sampling metadata.
class TimeSeries {
public:
    TimeSeries(std::vector<double> values, double sample_rate_hz, std::string sensor_name = {},
               std::string channel_id = {})
        : values_(std::move(values)),
          sample_rate_hz_(sample_rate_hz),
          sensor_name_(std::move(sensor_name)),
          channel_id_(std::move(channel_id)) {
        if (values_.empty()) throw DomainError("TimeSeries: values must be non-empty");
        if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
            throw RangeError("TimeSeries: sample_rate_hz must be positive");
    }

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double sample_rate_hz() const noexcept { return sample_rate_hz_; }
    const std::string& sensor_name() const noexcept { return sensor_name_; }
    const std::string& channel_id() const noexcept { return channel_id_; }

    double duration_seconds() const noexcept {
        return static_cast<double>(values_.size() - 1) / sample_rate_hz_;
    }

    /// Same metadata, new values.
    TimeSeries with_values(std::vector<double> values) const {
        return TimeSeries(std::move(values), sample_rate_hz_, sensor_name_, channel_id_);
    }

    /// Contiguous sub-range [start, start + length).
    TimeSeries slice(std::size_t start, std::size_t length) const {
        if (length == 0 || start + length > values_.size())
            throw RangeError("TimeSeries::slice out of range");
        return with_values(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(start),
                                               values_.begin() + static_cast<std::ptrdiff_t>(start + length)));
    }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
    double sample_rate_hz_;
    std::string sensor_name_;
    std::string channel_id_;
};

/// Channels sharing one clock: a C x T matrix stored row-wise.
class MultiChannelSeries {
public:
    explicit MultiChannelSeries(std::vector<TimeSeries> channels) : channels_(std::move(channels)) {
        if (channels_.empty()) throw DomainError("MultiChannelSeries: no channels");
        std::set<std::string> ids;
        for (const auto& c : channels_) {
            if (c.size() != channels_.front().size())
                throw DomainError("MultiChannelSeries: channel lengths differ");
            if (c.sample_rate_hz() != channels_.front().sample_rate_hz())
                throw DomainError("MultiChannelSeries: sample rates differ");
            if (!ids.insert(c.channel_id()).second)
                throw DomainError("MultiChannelSeries: duplicate channel_id '" + c.channel_id() + "'");
        }
    }

    const std::vector<TimeSeries>& channels() const noexcept { return channels_; }
    std::size_t num_channels() const noexcept { return channels_.size(); }
    std::size_t length() const noexcept { return channels_.front().size(); }
    double sample_rate_hz() const noexcept { return channels_.front().sample_rate_hz(); }
    const TimeSeries& operator[](std::size_t c) const { return channels_[c]; }

    MultiChannelSeries slice(std::size_t start, std::size_t length) const {
        std::vector<TimeSeries> out;
        out.reserve(channels_.size());
        for (const auto& c : channels_) out.push_back(c.slice(start, length));
        return MultiChannelSeries(std::move(out));
    }

    friend bool operator==(const MultiChannelSeries&, const MultiChannelSeries&) = default;

private:
    std::vector<TimeSeries> channels_;
};

struct SegmentSpec {
    std::size_t start_index = 0;
    std::size_t length = 0;

    friend bool operator==(const SegmentSpec&, const SegmentSpec&) = default;
};

struct ChannelStats {
    double mean = 0.0;
    double variance = 0.0;

    friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

/// Population mean and variance (two-pass).
inline ChannelStats channel_stats(std::span<const double> values) {
    if (values.empty()) throw DomainError("channel_stats: empty input");
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return {mean, sq / n};
}

inline ChannelStats channel_stats(const TimeSeries& series) {
    return channel_stats(series.values());
}

/// Zero-mean, unit population-std rescaling. Constant input maps to zeros.
inline TimeSeries instance_normalize(const TimeSeries& series) {
    const ChannelStats st = channel_stats(series);
    const double sd = std::sqrt(st.variance);
    std::vector<double> out(series.size(), 0.0);
    if (sd > 0.0) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (series[i] - st.mean) / sd;
    }
    return series.with_values(std::move(out));
}

/// Splits a prefix of a length-`n` series into consecutive segments whose
/// lengths are drawn uniformly from [min_len, max_len]. A trailing remainder
/// shorter than min_len is dropped; the last segment is clipped to fit
/// otherwise.
inline std::vector<SegmentSpec> segment_randomly(std::size_t n, std::size_t min_len,
                                                 std::size_t max_len, std::uint64_t seed) {
    if (min_len < 1 || min_len > max_len || max_len > n)
        throw RangeError("segment_randomly: require 1 <= min_len <= max_len <= length");
    SplitMix64 rng(seed);
    std::vector<SegmentSpec> out;
    std::size_t pos = 0;
    while (n - pos >= min_len) {
        std::size_t len = static_cast<std::size_t>(rng.uniform(min_len, max_len));
        if (len > n - pos) len = n - pos;
        out.push_back({pos, len});
        pos += len;
    }
    return out;
}

inline std::vector<SegmentSpec> segment_randomly(const TimeSeries& series, std::size_t min_len,
                                                 std::size_t max_len, std::uint64_t seed) {
    return segment_randomly(series.size(), min_len, max_len, seed);
}

/// Start offsets of every full window: 0, stride, 2*stride, ...
inline std::vector<std::size_t> window_starts(std::size_t length, std::size_t window_len,
                                              std::size_t stride) {
    if (window_len < 1 || stride < 1) throw RangeError("window: window_len and stride must be >= 1");
    std::vector<std::size_t> starts;
    if (window_len > length) return starts;
    for (std::size_t s = 0; s + window_len <= length; s += stride) starts.push_back(s);
    return starts;
}

/// Full windows of `window_len` samples taken every `stride` samples.
inline std::vector<MultiChannelSeries> window(const MultiChannelSeries& series, std::size_t window_len,
                                              std::size_t stride) {
    std::vector<MultiChannelSeries> out;
    for (std::size_t s : window_starts(series.length(), window_len, stride))
        out.push_back(series.slice(s, window_len));
    return out;
}

}  // namespace sensortext
