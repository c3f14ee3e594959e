#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "golden_data.hpp"
#include "sensortext/rng.hpp"
#include "sensortext/trend.hpp"

using namespace sensortext;

namespace {

TimeSeries series(std::vector<double> v, double hz = 50.0) { return TimeSeries(std::move(v), hz); }

// Independent segmenter: for every pair of cut positions, checks maximality
// directly from the definition instead of scanning runs.
std::vector<std::tuple<TrendKind, std::size_t, std::size_t>> brute_force_segments(const std::vector<double>& v) {
    auto kind_at = [&](std::size_t i) {
        return v[i + 1] > v[i] ? TrendKind::Growing : v[i + 1] < v[i] ? TrendKind::Declining : TrendKind::Stable;
    };
    std::vector<std::tuple<TrendKind, std::size_t, std::size_t>> out;
    const std::size_t n = v.size();
    for (std::size_t a = 0; a + 1 < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            bool uniform = true;
            for (std::size_t i = a; i < b; ++i) uniform = uniform && kind_at(i) == kind_at(a);
            const bool left_max = a == 0 || kind_at(a - 1) != kind_at(a);
            const bool right_max = b == n - 1 || kind_at(b) != kind_at(a);
            if (uniform && left_max && right_max) out.emplace_back(kind_at(a), a, b);
        }
    }
    return out;
}

}  // namespace

TEST(ClassifyDeltas, Examples) {
    EXPECT_EQ(classify_deltas(series({1, 2, 1})), (std::vector{TrendKind::Growing, TrendKind::Declining}));
    EXPECT_EQ(classify_deltas(series({0.53137, 0.53137})), (std::vector{TrendKind::Stable}));
    EXPECT_EQ(classify_deltas(series({-9.8237, -9.4551, -10.007})),
              (std::vector{TrendKind::Growing, TrendKind::Declining}));
}

TEST(ClassifyDeltas, EpsilonAbsorbsJitter) {
    EXPECT_EQ(classify_deltas(series({1.0, 1.05, 0.97, 2.0}), 0.1),
              (std::vector{TrendKind::Stable, TrendKind::Stable, TrendKind::Growing}));
}

TEST(ClassifyDeltas, SingletonIsDomainError) {
    EXPECT_THROW(classify_deltas(series({1.0})), DomainError);
    EXPECT_THROW(segment_trends(series({1.0})), DomainError);
    EXPECT_THROW(classify_deltas(series({1.0, 2.0}), -1.0), RangeError);
}

TEST(SegmentTrends, LeftAnkleGolden) {
    const TrendReport r = segment_trends(series(golden::kLeftAnkleReadings, 50.0));
    const std::vector<std::pair<double, double>> bounds = {{0.0, 0.02}, {0.02, 0.06}, {0.06, 0.08}, {0.08, 0.12},
                                                           {0.12, 0.2}, {0.2, 0.3},   {0.3, 0.34},  {0.34, 0.38},
                                                           {0.38, 0.42}, {0.42, 0.44}, {0.44, 0.62}};
    ASSERT_EQ(r.segments.size(), 11u);
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        EXPECT_EQ(r.segments[i].kind, i % 2 == 0 ? TrendKind::Growing : TrendKind::Declining);
        EXPECT_NEAR(r.segments[i].start_time_s, bounds[i].first, 1e-9);
        EXPECT_NEAR(r.segments[i].end_time_s, bounds[i].second, 1e-9);
    }
    EXPECT_EQ(r.count(TrendKind::Growing), 6u);
    EXPECT_EQ(r.count(TrendKind::Declining), 5u);
    EXPECT_NEAR(r.cumulative_seconds(TrendKind::Growing), 0.38, 1e-9);
    EXPECT_NEAR(r.cumulative_seconds(TrendKind::Declining), 0.24, 1e-9);
    EXPECT_EQ(r.change_count, 11u);
    EXPECT_EQ(r.num_distinct_kinds, 2u);
    EXPECT_EQ(r.overall, TrendKind::Growing);
}

TEST(SegmentTrends, RightArmGolden) {
    const TrendReport r = segment_trends(series(golden::kRightArmGyroReadings, 50.0));
    const std::vector<TrendKind> kinds = {TrendKind::Stable, TrendKind::Declining, TrendKind::Stable,
                                          TrendKind::Declining, TrendKind::Stable, TrendKind::Growing,
                                          TrendKind::Stable};
    ASSERT_EQ(r.segments.size(), kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) EXPECT_EQ(r.segments[i].kind, kinds[i]);
    EXPECT_EQ(r.count(TrendKind::Stable), 4u);
    EXPECT_EQ(r.count(TrendKind::Declining), 2u);
    EXPECT_EQ(r.count(TrendKind::Growing), 1u);
    EXPECT_NEAR(r.cumulative_seconds(TrendKind::Stable), 0.18, 1e-9);
    EXPECT_NEAR(r.cumulative_seconds(TrendKind::Declining), 0.04, 1e-9);
    EXPECT_NEAR(r.cumulative_seconds(TrendKind::Growing), 0.02, 1e-9);
    EXPECT_EQ(r.change_count, 7u);
    EXPECT_EQ(r.num_distinct_kinds, 3u);
    EXPECT_EQ(r.overall, TrendKind::Declining);
}

TEST(SegmentTrends, ConstantSeriesIsOneStableSegment) {
    const TrendReport r = segment_trends(series(std::vector<double>(9, 4.2), 10.0));
    ASSERT_EQ(r.segments.size(), 1u);
    EXPECT_EQ(r.segments[0].kind, TrendKind::Stable);
    EXPECT_EQ(r.segments[0].start_index, 0u);
    EXPECT_EQ(r.segments[0].end_index, 8u);
    EXPECT_EQ(r.overall, TrendKind::Stable);
}

TEST(OverallTrend, NetChangeSign) {
    EXPECT_EQ(overall_trend(series(golden::kLeftAnkleReadings)), TrendKind::Growing);
    EXPECT_EQ(overall_trend(series(golden::kRightArmGyroReadings)), TrendKind::Declining);
    EXPECT_EQ(overall_trend(series({3, 1, 5, 3})), TrendKind::Stable);
    EXPECT_EQ(overall_trend(series({7})), TrendKind::Stable);
}

TEST(SegmentTrends, TilingAndConservationProperty) {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.index(200);
        std::vector<double> v(n);
        for (auto& x : v) x = static_cast<double>(rng.index(5)) - 2.0;
        const double hz = 1.0 + static_cast<double>(rng.index(200));
        const TrendReport r = segment_trends(series(v, hz));
        ASSERT_EQ(r.segments.front().start_index, 0u);
        ASSERT_EQ(r.segments.back().end_index, n - 1);
        std::size_t total = 0;
        for (std::size_t i = 0; i < r.segments.size(); ++i) {
            EXPECT_LT(r.segments[i].start_index, r.segments[i].end_index);
            if (i > 0) {
                EXPECT_EQ(r.segments[i].start_index, r.segments[i - 1].end_index);
                EXPECT_NE(r.segments[i].kind, r.segments[i - 1].kind);
            }
            EXPECT_DOUBLE_EQ(r.segments[i].start_time_s, static_cast<double>(r.segments[i].start_index) / hz);
        }
        double secs = 0.0;
        for (TrendKind k : kAllTrendKinds) {
            total += r.count(k);
            secs += r.cumulative_seconds(k);
        }
        EXPECT_EQ(total, r.segments.size());
        EXPECT_EQ(r.change_count, r.segments.size());
        EXPECT_NEAR(secs, static_cast<double>(n - 1) / hz, 1e-9);
    }
}

TEST(SegmentTrends, ReversalAntisymmetry) {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.index(40);
        std::vector<double> v(n);
        for (auto& x : v) x = static_cast<double>(rng.index(4));
        std::vector<double> rev(v.rbegin(), v.rend());
        const TrendReport a = segment_trends(series(v));
        const TrendReport b = segment_trends(series(rev));
        ASSERT_EQ(a.segments.size(), b.segments.size());
        const std::size_t m = a.segments.size();
        for (std::size_t i = 0; i < m; ++i) {
            const auto& s = a.segments[i];
            const auto& t = b.segments[m - 1 - i];
            EXPECT_EQ(t.start_index, n - 1 - s.end_index);
            EXPECT_EQ(t.end_index, n - 1 - s.start_index);
            const TrendKind flipped = s.kind == TrendKind::Growing    ? TrendKind::Declining
                                      : s.kind == TrendKind::Declining ? TrendKind::Growing
                                                                       : TrendKind::Stable;
            EXPECT_EQ(t.kind, flipped);
        }
        if (a.overall == TrendKind::Stable)
            EXPECT_EQ(b.overall, TrendKind::Stable);
        else
            EXPECT_NE(a.overall, b.overall);
    }
}

TEST(SegmentTrends, ExhaustiveAgreementWithBruteForce) {
    // Every series of length 2..8 over {-1, 0, 1}.
    std::size_t checked = 0;
    for (std::size_t n = 2; n <= 8; ++n) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<double> v(n);
            std::size_t c = code;
            for (std::size_t i = 0; i < n; ++i, c /= 3) v[i] = static_cast<double>(c % 3) - 1.0;
            const auto expected = brute_force_segments(v);
            const TrendReport r = segment_trends(series(v));
            ASSERT_EQ(r.segments.size(), expected.size());
            for (std::size_t i = 0; i < expected.size(); ++i) {
                EXPECT_EQ(r.segments[i].kind, std::get<0>(expected[i]));
                EXPECT_EQ(r.segments[i].start_index, std::get<1>(expected[i]));
                EXPECT_EQ(r.segments[i].end_index, std::get<2>(expected[i]));
            }
            ++checked;
        }
    }
    EXPECT_EQ(checked, 9837u);
}

TEST(TrendReportJson, RoundTrip) {
    const TrendReport r = segment_trends(series(golden::kRightArmGyroReadings));
    const auto j = to_json(r);
    EXPECT_EQ(j["counts"]["stable"], 4);
    EXPECT_EQ(j["overall"], "declining");
    EXPECT_EQ(trend_report_from_json(j), r);
}

TEST(TrendReportJson, RejectsGapsAndUnmergedRuns) {
    auto j = to_json(segment_trends(series({1, 2, 1})));
    auto gap = j;
    gap["segments"][1]["start_index"] = 2;
    EXPECT_THROW(trend_report_from_json(gap), FormatError);
    auto same = j;
    same["segments"][1]["kind"] = "growing";
    EXPECT_THROW(trend_report_from_json(same), FormatError);
}
