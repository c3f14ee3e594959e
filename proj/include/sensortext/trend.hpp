#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "format.hpp"
#include "timeseries.hpp"

namespace sensortext {

enum class TrendKind { Growing, Declining, Stable };

inline constexpr std::array<TrendKind, 3> kAllTrendKinds = {TrendKind::Growing, TrendKind::Declining,
                                                            TrendKind::Stable};

inline std::string_view to_string(TrendKind k) noexcept {
    switch (k) {
        case TrendKind::Growing: return "growing";
        case TrendKind::Declining: return "declining";
        case TrendKind::Stable: return "stable";
    }
    return "stable";
}

inline TrendKind trend_kind_from_string(std::string_view s) {
    if (s == "growing") return TrendKind::Growing;
    if (s == "declining") return TrendKind::Declining;
    if (s == "stable") return TrendKind::Stable;
    throw FormatError("unknown trend kind '" + std::string(s) + "'");
}

inline std::size_t kind_index(TrendKind k) noexcept { return static_cast<std::size_t>(k); }

/// A maximal run of one trend kind, indices inclusive.
struct TrendSegment {
    TrendKind kind = TrendKind::Stable;
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    double start_time_s = 0.0;
    double end_time_s = 0.0;

    std::size_t steps() const noexcept { return end_index - start_index; }

    friend bool operator==(const TrendSegment&, const TrendSegment&) = default;
};

/// Per-kind tallies indexed by kind_index().
template <typename T>
using PerKind = std::array<T, 3>;

struct TrendReport {
    double sample_rate_hz = 1.0;
    std::size_t num_points = 0;
    std::vector<TrendSegment> segments;
    PerKind<std::size_t> counts{};
    /// Sample steps spent in each kind; seconds = steps / sample_rate_hz.
    PerKind<std::size_t> cumulative_steps{};
    std::size_t num_distinct_kinds = 0;
    std::size_t change_count = 0;
    TrendKind overall = TrendKind::Stable;

    double cumulative_seconds(TrendKind k) const noexcept {
        return static_cast<double>(cumulative_steps[kind_index(k)]) / sample_rate_hz;
    }
    std::size_t count(TrendKind k) const noexcept { return counts[kind_index(k)]; }
    double start_time_s() const noexcept { return 0.0; }
    double end_time_s() const noexcept { return static_cast<double>(num_points - 1) / sample_rate_hz; }

    /// Kinds in order of first appearance.
    std::vector<TrendKind> kinds_in_order() const {
        std::vector<TrendKind> out;
        for (const auto& s : segments)
            if (std::find(out.begin(), out.end(), s.kind) == out.end()) out.push_back(s.kind);
        return out;
    }

    friend bool operator==(const TrendReport&, const TrendReport&) = default;
};

/// One kind per adjacent pair: growing if the step exceeds epsilon, declining
/// if it is below -epsilon, stable otherwise.
inline std::vector<TrendKind> classify_deltas(std::span<const double> values, double epsilon = 0.0) {
    if (values.size() < 2) throw DomainError("classify_deltas: need at least 2 readings");
    if (!(epsilon >= 0.0)) throw RangeError("classify_deltas: epsilon must be >= 0");
    std::vector<TrendKind> out(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double d = values[i + 1] - values[i];
        out[i] = d > epsilon ? TrendKind::Growing : d < -epsilon ? TrendKind::Declining : TrendKind::Stable;
    }
    return out;
}

inline std::vector<TrendKind> classify_deltas(const TimeSeries& series, double epsilon = 0.0) {
    return classify_deltas(series.values(), epsilon);
}

/// Sign of last - first.
inline TrendKind overall_trend(std::span<const double> values) {
    if (values.empty()) throw DomainError("overall_trend: empty input");
    const double net = values.back() - values.front();
    return net > 0 ? TrendKind::Growing : net < 0 ? TrendKind::Declining : TrendKind::Stable;
}

inline TrendKind overall_trend(const TimeSeries& series) { return overall_trend(series.values()); }

/// Assembles a report from maximal runs over `kinds`.
inline TrendReport make_report(const std::vector<TrendKind>& kinds, double sample_rate_hz, TrendKind overall) {
    TrendReport r;
    r.sample_rate_hz = sample_rate_hz;
    r.num_points = kinds.size() + 1;
    r.overall = overall;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= kinds.size(); ++i) {
        if (i == kinds.size() || kinds[i] != kinds[start]) {
            TrendSegment s;
            s.kind = kinds[start];
            s.start_index = start;
            s.end_index = i;
            s.start_time_s = static_cast<double>(start) / sample_rate_hz;
            s.end_time_s = static_cast<double>(i) / sample_rate_hz;
            r.counts[kind_index(s.kind)] += 1;
            r.cumulative_steps[kind_index(s.kind)] += s.steps();
            r.segments.push_back(s);
            start = i;
        }
    }
    for (auto c : r.counts) r.num_distinct_kinds += c > 0 ? 1 : 0;
    r.change_count = r.segments.size();
    return r;
}

inline TrendReport segment_trends(const TimeSeries& series, double epsilon = 0.0) {
    return make_report(classify_deltas(series, epsilon), series.sample_rate_hz(), overall_trend(series));
}

inline nlohmann::json to_json(const TrendReport& r) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : r.segments) {
        segs.push_back({{"kind", to_string(s.kind)},
                        {"start_index", s.start_index},
                        {"end_index", s.end_index},
                        {"start_time_s", s.start_time_s},
                        {"end_time_s", s.end_time_s}});
    }
    nlohmann::json counts = nlohmann::json::object();
    nlohmann::json cumulative = nlohmann::json::object();
    for (TrendKind k : kAllTrendKinds) {
        counts[std::string(to_string(k))] = r.count(k);
        cumulative[std::string(to_string(k))] = r.cumulative_seconds(k);
    }
    return {{"sample_rate_hz", r.sample_rate_hz},
            {"num_points", r.num_points},
            {"segments", std::move(segs)},
            {"counts", std::move(counts)},
            {"cumulative_seconds", std::move(cumulative)},
            {"num_distinct_kinds", r.num_distinct_kinds},
            {"change_count", r.change_count},
            {"overall", to_string(r.overall)}};
}

/// Rebuilds a report from its JSON form. Segment indices are authoritative;
/// every derived field is recomputed and must agree with the document.
inline TrendReport trend_report_from_json(const nlohmann::json& j) {
    try {
        const double rate = j.at("sample_rate_hz").get<double>();
        const auto n = j.at("num_points").get<std::size_t>();
        if (n < 2) throw FormatError("TrendReport: num_points < 2");
        std::vector<TrendKind> kinds(n - 1, TrendKind::Stable);
        std::size_t expect = 0;
        for (const auto& s : j.at("segments")) {
            const auto a = s.at("start_index").get<std::size_t>();
            const auto b = s.at("end_index").get<std::size_t>();
            if (a != expect || b <= a || b > n - 1) throw FormatError("TrendReport: segments do not tile");
            const TrendKind k = trend_kind_from_string(s.at("kind").get<std::string>());
            for (std::size_t i = a; i < b; ++i) kinds[i] = k;
            expect = b;
        }
        if (expect != n - 1) throw FormatError("TrendReport: segments do not cover the series");
        TrendReport r = make_report(kinds, rate, trend_kind_from_string(j.at("overall").get<std::string>()));
        if (r.segments.size() != j.at("segments").size())
            throw FormatError("TrendReport: adjacent segments share a kind");
        return r;
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("TrendReport: ") + ex.what());
    }
}

}  // namespace sensortext
