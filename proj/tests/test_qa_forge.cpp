#include <gtest/gtest.h>

#include <set>
#include <string>

#include "golden_data.hpp"
#include "sensortext/qa_forge.hpp"
#include "sensortext/verifier.hpp"

using namespace sensortext;

namespace {

// The template instances and synonyms that produced the right-lower-arm
// ground-truth answer.
TemplateBank right_arm_bank() {
    TemplateBank b = TemplateBank::defaults();
    b.answer_segment_line = {"{start_time} seconds to {end_time} seconds: {trend}"};
    b.answer_trend_count = {"Number of {trend} trends: {num}"};
    b.answer_context = {
        "The {data_name} represents readings taken from a {sensor_name} sensor between {start_time} and "
        "{end_time} seconds."};
    b.answer_change_stats = {
        "Analysis reveals {trend_num:word} separate trends within the data, undergoing a cumulative total of "
        "{change_num:word} shifts in direction."};
    b.answer_cumulative_lead = {
        "Encapsulating the outcomes, the data's {trend_type} trend stretched across a total time of {total_time} "
        "seconds"};
    b.answer_cumulative_continue = {", came after a {trend_type} pattern observed over {total_time} seconds"};
    b.answer_cumulative_final = {", and a {trend_type} trend for {total_time} seconds in total."};
    b.answer_overall = {"The dominant trend is {overall_trend}."};
    b.synonyms = {std::vector<std::string>{"increasing"}, {"decreasing"}, {"stable"}};
    return b;
}

TemplateBank left_ankle_bank() {
    TemplateBank b = TemplateBank::defaults();
    b.answer_segment_line = {"{start_time} seconds to {end_time} seconds: {trend}"};
    b.answer_trend_count = {"Total {trend} trends: {num}"};
    b.answer_context = {"From {start_time}s to {end_time}s, {sensor_name} data is showcased in the {data_name}."};
    b.answer_change_stats = {
        "Examining the data, we notice {trend_num} clear trend characteristics, with the trend fluctuating a total "
        "of {change_num:word} times."};
    b.answer_cumulative_lead = {
        "The analysis reveals that the data's {trend_type} inclination persisted for a total of {total_time} "
        "seconds"};
    b.answer_cumulative_continue = {", then a {trend_type} trend for {total_time} seconds"};
    b.answer_cumulative_final = {", and a {trend_type} trend within a span of {total_time} seconds."};
    b.answer_overall = {"The general trend observed is {overall_trend}."};
    b.synonyms = {std::vector<std::string>{"growing"}, {"declining"}, {"stable"}};
    return b;
}

AnswerPlan chained_plan(std::vector<TrendKind> order) {
    AnswerPlan p;
    p.cumulative_order = std::move(order);
    p.cumulative_chained = true;
    return p;
}

}  // namespace

TEST(RenderAnswer, ReproducesRightArmGroundTruthVerbatim) {
    const TrendReport r = segment_trends(TimeSeries(golden::kRightArmGyroReadings, 50.0));
    const TemplateBank bank = right_arm_bank();
    bank.validate();
    const AnswerPlan plan = chained_plan({TrendKind::Declining, TrendKind::Growing, TrendKind::Stable});
    const std::string text =
        render_answer_sections(r, bank, {"sensor data", "normalized right-lower-arm x-axis gyroscope"}, plan).text();
    EXPECT_EQ(text, golden::kRightArmTruth);
}

TEST(RenderAnswer, ReproducesLeftAnkleGroundTruthVerbatim) {
    const TrendReport r = segment_trends(TimeSeries(golden::kLeftAnkleReadings, 50.0));
    const TemplateBank bank = left_ankle_bank();
    bank.validate();
    const AnswerPlan plan = chained_plan({TrendKind::Declining, TrendKind::Growing});
    const std::string text =
        render_answer_sections(r, bank, {"sensor data", "normalized left-ankle y-axis accelerometer"}, plan).text();
    EXPECT_EQ(text, golden::kLeftAnkleTruth);
}

TEST(RenderAnswer, SingleStableSegment) {
    const TrendReport r = segment_trends(TimeSeries(std::vector<double>(6, 1.0), 50.0));
    const TemplateBank bank = TemplateBank::defaults();
    const std::string text = render_trend_answer(r, bank, {"sensor data", "chest x-axis accelerometer"}, 3);
    const auto sections = render_answer_sections(r, bank, {"sensor data", "chest x-axis accelerometer"},
                                                 draw_answer_plan(r, bank, 3));
    EXPECT_EQ(sections.segment_lines.size(), 1u);
    EXPECT_EQ(sections.count_lines.size(), 1u);
    const auto claims = extract_claims(text);
    ASSERT_TRUE(claims.distinct_kinds.has_value());
    EXPECT_EQ(*claims.distinct_kinds, 1);
    EXPECT_EQ(verify_trend_text(text, r).score, 5);
}

TEST(RenderAnswer, DeterministicForSeed) {
    const TrendReport r = segment_trends(TimeSeries(golden::kLeftAnkleReadings, 50.0));
    const TemplateBank bank = TemplateBank::defaults();
    const AnswerContext ctx{"sensor data", "left-ankle y-axis accelerometer"};
    EXPECT_EQ(render_trend_answer(r, bank, ctx, 17), render_trend_answer(r, bank, ctx, 17));
    std::set<std::string> distinct;
    for (std::uint64_t s = 0; s < 20; ++s) distinct.insert(render_trend_answer(r, bank, ctx, s));
    EXPECT_GT(distinct.size(), 10u);
}

TEST(RenderAnswer, OneSynonymPerKindWithinAnswer) {
    const TrendReport r = segment_trends(TimeSeries(golden::kLeftAnkleReadings, 50.0));
    const TemplateBank bank = TemplateBank::defaults();
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto plan = draw_answer_plan(r, bank, s);
        const std::string text = render_trend_answer(r, bank, {"sensor data", "x"}, s);
        const auto& growing = bank.synonyms[kind_index(TrendKind::Growing)];
        for (std::size_t i = 0; i < growing.size(); ++i) {
            const bool used = text.find(": " + growing[i] + "\n") != std::string::npos;
            EXPECT_EQ(used, i == plan.synonym[kind_index(TrendKind::Growing)]) << text;
        }
    }
}

TEST(RenderAnswer, ArticleAgreesWithTrendWord) {
    EXPECT_EQ(render_template("a {trend_type} trend", {{"trend_type", "increasing"}}), "an increasing trend");
    EXPECT_EQ(render_template("a {trend_type} trend", {{"trend_type", "stable"}}), "a stable trend");
    EXPECT_EQ(render_template("data {trend_type}", {{"trend_type", "upward"}}), "data upward");
}

TEST(RenderTemplate, MissingBindingNamesPlaceholder) {
    try {
        render_template("{start_time}s to {end_time}s", {{"start_time", "0.0"}});
        FAIL() << "expected TemplateError";
    } catch (const TemplateError& e) {
        EXPECT_EQ(e.placeholder(), "end_time");
    }
    EXPECT_THROW(render_template("{num:word}", {{"num", "x"}}), TemplateError);
    EXPECT_THROW(render_template("oops }", {}), TemplateError);
    EXPECT_THROW(validate_template("{bogus}"), TemplateError);
    EXPECT_EQ(render_template("{num:word} and {num}", {{"num", 7}}), "seven and 7");
}

TEST(TemplateBank, DefaultsMatchPrintedTables) {
    const TemplateBank b = TemplateBank::defaults();
    b.validate();
    EXPECT_EQ(b.question_trend.size(), 9u);
    EXPECT_EQ(b.question_summary.size(), 8u);
    EXPECT_EQ(b.answer_segment_line.size(), 6u);
    EXPECT_EQ(b.answer_trend_count.size(), 4u);
    EXPECT_EQ(b.answer_context.size(), 3u);
    EXPECT_EQ(b.answer_change_stats.size(), 3u);
    EXPECT_EQ(b.answer_cumulative.size(), 3u);
    EXPECT_EQ(b.answer_overall.size(), 3u);
}

TEST(TemplateBank, JsonRoundTripAndValidation) {
    const TemplateBank b = TemplateBank::defaults();
    const TemplateBank c = TemplateBank::from_json(b.to_json());
    EXPECT_EQ(c.to_json(), b.to_json());
    auto bad = b.to_json();
    bad["question_trend"] = nlohmann::json::array();
    EXPECT_THROW(TemplateBank::from_json(bad), ConfigError);
    bad = b.to_json();
    bad["answer_overall"] = {"The trend is {mood}."};
    EXPECT_THROW(TemplateBank::from_json(bad), TemplateError);
}

TEST(TemplateBank, ShippedFileMatchesDefaults) {
    const TemplateBank file = TemplateBank::load(SENSORTEXT_SOURCE_DIR "/configs/templates.json");
    EXPECT_EQ(file.to_json(), TemplateBank::defaults().to_json());
}

TEST(RenderQuestion, DrawsFromBank) {
    const TemplateBank b = TemplateBank::defaults();
    std::set<std::string> seen;
    for (std::uint64_t s = 0; s < 400; ++s) {
        const std::string q = render_question(QuestionKind::Trend, b, "sensor data", s);
        EXPECT_NE(q.find("sensor data"), std::string::npos);
        EXPECT_EQ(q.find('{'), std::string::npos);
        seen.insert(q);
    }
    EXPECT_EQ(seen.size(), 9u);
    seen.clear();
    for (std::uint64_t s = 0; s < 400; ++s) seen.insert(render_question(QuestionKind::Summary, b, "sensor data", s));
    EXPECT_EQ(seen.size(), 8u);
    EXPECT_EQ(render_question(QuestionKind::Trend, b, "d", 5), render_question(QuestionKind::Trend, b, "d", 5));
}

TEST(RenderSystemPrompt, Formatting) {
    const std::string p = render_system_prompt(32, 50.0);
    EXPECT_NE(p.find("(32 points, sampled at 50Hz)"), std::string::npos);
    EXPECT_NE(render_system_prompt(1, 50.0).find("(1 points"), std::string::npos);
    EXPECT_NE(render_system_prompt(10, 12.5).find("12.5Hz"), std::string::npos);
    EXPECT_THROW(render_system_prompt(0, 50.0), DomainError);
}

TEST(DiversityFloor, EveryTemplateUsedOverThousandRenders) {
    const TemplateBank b = TemplateBank::defaults();
    // A report with all three kinds so every synonym slot is exercised.
    const TrendReport r = segment_trends(TimeSeries(golden::kRightArmGyroReadings, 50.0));
    std::set<std::size_t> seg, cnt, ctx, chg, cum, ovr;
    PerKind<std::set<std::size_t>> syn;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto p = draw_answer_plan(r, b, s * 7919 + 1);
        seg.insert(p.segment_line);
        cnt.insert(p.trend_count);
        ctx.insert(p.context);
        chg.insert(p.change_stats);
        for (auto c : p.cumulative_sentence) cum.insert(c);
        ovr.insert(p.overall);
        for (TrendKind k : kAllTrendKinds) syn[kind_index(k)].insert(p.synonym[kind_index(k)]);
    }
    EXPECT_EQ(seg.size(), b.answer_segment_line.size());
    EXPECT_EQ(cnt.size(), b.answer_trend_count.size());
    EXPECT_EQ(ctx.size(), b.answer_context.size());
    EXPECT_EQ(chg.size(), b.answer_change_stats.size());
    EXPECT_EQ(cum.size(), b.answer_cumulative.size());
    EXPECT_EQ(ovr.size(), b.answer_overall.size());
    for (TrendKind k : kAllTrendKinds) EXPECT_EQ(syn[kind_index(k)].size(), b.synonyms[kind_index(k)].size());
}

TEST(ForgeChannel, ToySeriesYieldsTwoPairs) {
    std::vector<double> v(20);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>((i * 7) % 5);
    const TimeSeries ch(v, 50.0, "chest x-axis accelerometer", "acc_chest_x");
    GenerationConfig cfg;
    cfg.min_len = cfg.max_len = 10;
    const auto pairs = forge_channel(ch, TemplateBank::defaults(), cfg, "toy", "s1", 42);
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_EQ(pairs[0].source.start_index, 0u);
    EXPECT_EQ(pairs[1].source.start_index, 10u);
    for (const auto& qa : pairs) {
        EXPECT_EQ(verify_trend_text(qa.answer, qa.report).score, 5) << qa.answer;
        EXPECT_EQ(qa.answer.find('{'), std::string::npos);
        EXPECT_NE(qa.system_prompt.find("10 points"), std::string::npos);
        EXPECT_NE(qa.answer.find("normalized chest x-axis accelerometer"), std::string::npos);
    }
    const auto again = forge_channel(ch, TemplateBank::defaults(), cfg, "toy", "s1", 42);
    for (std::size_t i = 0; i < pairs.size(); ++i) EXPECT_EQ(to_json(pairs[i]).dump(), to_json(again[i]).dump());
}

TEST(ForgeChannel, RejectsDegenerateRange) {
    const TimeSeries ch(std::vector<double>(20, 1.0), 50.0);
    GenerationConfig cfg;
    cfg.min_len = 1;
    cfg.max_len = 5;
    EXPECT_THROW(forge_channel(ch, TemplateBank::defaults(), cfg, "d", "s", 1), RangeError);
}
