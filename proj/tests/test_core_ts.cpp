#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sensortext/timeseries.hpp"

using namespace sensortext;

TEST(TimeSeries, Invariants) {
    EXPECT_THROW(TimeSeries({}, 50.0), DomainError);
    EXPECT_THROW(TimeSeries({1.0}, 0.0), RangeError);
    EXPECT_THROW(TimeSeries({1.0}, -3.0), RangeError);
    const TimeSeries t({1, 2, 3, 4, 5}, 50.0, "chest x-axis accelerometer", "acc_chest_x");
    EXPECT_DOUBLE_EQ(t.duration_seconds(), 0.08);
    EXPECT_DOUBLE_EQ(TimeSeries({1.0}, 50.0).duration_seconds(), 0.0);
}

TEST(MultiChannelSeries, Invariants) {
    EXPECT_THROW(MultiChannelSeries({TimeSeries({1, 2}, 50, "", "a"), TimeSeries({1, 2, 3}, 50, "", "b")}),
                 DomainError);
    EXPECT_THROW(MultiChannelSeries({TimeSeries({1, 2}, 50, "", "a"), TimeSeries({1, 2}, 100, "", "b")}),
                 DomainError);
    EXPECT_THROW(MultiChannelSeries({TimeSeries({1, 2}, 50, "", "a"), TimeSeries({1, 2}, 50, "", "a")}),
                 DomainError);
}

TEST(InstanceNormalize, Examples) {
    const TimeSeries out = instance_normalize(TimeSeries({1, 2, 3}, 50.0, "s", "c"));
    const double sd = std::sqrt(2.0 / 3.0);
    EXPECT_NEAR(out[0], -1.0 / sd, 1e-12);
    EXPECT_NEAR(out[0], -1.2247, 1e-4);
    EXPECT_NEAR(out[1], 0.0, 1e-12);
    EXPECT_NEAR(out[2], 1.2247, 1e-4);
    EXPECT_EQ(out.channel_id(), "c");
    EXPECT_EQ(out.sample_rate_hz(), 50.0);
    const TimeSeries constant = instance_normalize(TimeSeries({5, 5, 5}, 50.0));
    for (double v : constant.values()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(instance_normalize(TimeSeries({3.7}, 50.0))[0], 0.0);
}

TEST(InstanceNormalize, ZeroMeanUnitStdAndIdempotent) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(300);
        std::vector<double> v(n);
        for (auto& x : v) x = (rng.unit() - 0.5) * 40.0 + 7.0;
        const TimeSeries once = instance_normalize(TimeSeries(v, 50.0));
        const ChannelStats st = channel_stats(once);
        EXPECT_NEAR(st.mean, 0.0, 1e-12);
        EXPECT_NEAR(st.variance, 1.0, 1e-12);
        const TimeSeries twice = instance_normalize(once);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(twice[i], once[i], 1e-9);
    }
}

TEST(SegmentRandomly, ForcedLengths) {
    EXPECT_EQ(segment_randomly(10, 5, 5, 1), (std::vector<SegmentSpec>{{0, 5}, {5, 5}}));
    EXPECT_EQ(segment_randomly(10, 5, 5, 999), (std::vector<SegmentSpec>{{0, 5}, {5, 5}}));
    EXPECT_EQ(segment_randomly(7, 5, 5, 3), (std::vector<SegmentSpec>{{0, 5}}));
}

TEST(SegmentRandomly, RangeErrors) {
    EXPECT_THROW(segment_randomly(10, 0, 5, 1), RangeError);
    EXPECT_THROW(segment_randomly(10, 6, 5, 1), RangeError);
    EXPECT_THROW(segment_randomly(10, 5, 11, 1), RangeError);
}

TEST(SegmentRandomly, DeterministicPartitionProperty) {
    EXPECT_EQ(segment_randomly(200, 5, 200, 42), segment_randomly(200, 5, 200, 42));
    SplitMix64 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng.index(1000);
        const std::size_t lo = 1 + rng.index(n);
        const std::size_t hi = lo + rng.index(n - lo + 1);
        const std::uint64_t seed = rng.next();
        const auto segs = segment_randomly(n, lo, hi, seed);
        std::size_t pos = 0;
        for (const auto& s : segs) {
            EXPECT_EQ(s.start_index, pos);
            EXPECT_GE(s.length, lo);
            EXPECT_LE(s.length, hi);
            pos += s.length;
        }
        EXPECT_LE(pos, n);
        EXPECT_LT(n - pos, lo);
        EXPECT_EQ(segs, segment_randomly(n, lo, hi, seed));
    }
}

TEST(SegmentRandomly, LengthsCoverRange) {
    std::vector<int> seen(11, 0);
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        for (const auto& s : segment_randomly(1000, 5, 10, seed))
            if (s.start_index + 10 <= 1000) seen[s.length]++;
    for (std::size_t len = 5; len <= 10; ++len) EXPECT_GT(seen[len], 0) << len;
}

namespace {
MultiChannelSeries ramp(std::size_t n) {
    std::vector<double> a(n), b(n);
    std::iota(a.begin(), a.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) b[i] = -static_cast<double>(i);
    return MultiChannelSeries({TimeSeries(a, 50.0, "", "a"), TimeSeries(b, 50.0, "", "b")});
}
}  // namespace

TEST(Window, Counts) {
    const auto w = window(ramp(250), 100, 50);
    ASSERT_EQ(w.size(), 4u);
    EXPECT_EQ(w[0][0][0], 0.0);
    EXPECT_EQ(w[1][0][0], 50.0);
    EXPECT_EQ(w[2][0][0], 100.0);
    EXPECT_EQ(w[3][0][0], 150.0);
    EXPECT_EQ(w[3][1][99], -249.0);
    EXPECT_EQ(window(ramp(100), 100, 50).size(), 1u);
    EXPECT_TRUE(window(ramp(99), 100, 50).empty());
    EXPECT_THROW(window(ramp(10), 0, 1), RangeError);
    EXPECT_THROW(window(ramp(10), 5, 0), RangeError);
}

TEST(Window, ClosedFormCountAndCoverage) {
    for (std::size_t n = 1; n < 120; ++n) {
        for (std::size_t len = 1; len <= n; len += 7) {
            for (std::size_t stride = 1; stride < 40; stride += 5) {
                EXPECT_EQ(window_starts(n, len, stride).size(), (n - len) / stride + 1);
            }
        }
    }
    const auto series = ramp(103);
    const auto tiles = window(series, 10, 10);
    std::vector<double> joined;
    for (const auto& t : tiles)
        for (double v : t[0].values()) joined.push_back(v);
    ASSERT_EQ(joined.size(), 100u);
    for (std::size_t i = 0; i < joined.size(); ++i) EXPECT_EQ(joined[i], series[0][i]);
}

TEST(ChannelStats, Examples) {
    const auto s = channel_stats(TimeSeries({1, 2, 3}, 1.0));
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_DOUBLE_EQ(s.variance, 2.0 / 3.0);
    const auto c = channel_stats(TimeSeries({4.5, 4.5, 4.5}, 1.0));
    EXPECT_DOUBLE_EQ(c.mean, 4.5);
    EXPECT_DOUBLE_EQ(c.variance, 0.0);
    const auto z = channel_stats(TimeSeries({0.0}, 1.0));
    EXPECT_EQ(z.mean, 0.0);
    EXPECT_EQ(z.variance, 0.0);
}

TEST(SplitMix64, KnownSequenceAndUniformBounds) {
    // Reference values of SplitMix64 seeded with 0.
    SplitMix64 r(0);
    EXPECT_EQ(r.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(r.next(), 0x6e789e6aa1b965f4ULL);
    SplitMix64 u(7);
    for (int i = 0; i < 1000; ++i) {
        const auto v = u.uniform(3, 9);
        EXPECT_GE(v, 3u);
        EXPECT_LE(v, 9u);
        const double d = u.unit();
        EXPECT_GE(d, 0.0);
        EXPECT_LT(d, 1.0);
    }
}
