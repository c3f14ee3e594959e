#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "format.hpp"
#include "rng.hpp"
#include "templates.hpp"
#include "timeseries.hpp"
#include "trend.hpp"

namespace sensortext {

enum class QuestionKind { Trend, Summary };

inline std::string_view to_string(QuestionKind k) noexcept {
    return k == QuestionKind::Trend ? "trend" : "summary";
}

/// Text bound to the descriptive placeholders of an answer.
struct AnswerContext {
    std::string data_name = "sensor data";
    std::string sensor_name;
};

/// Every choice that shapes one rendered answer. Drawing a plan is the only
/// random step; rendering a plan is deterministic.
struct AnswerPlan {
    PerKind<std::size_t> synonym{};
    std::size_t segment_line = 0;
    std::size_t trend_count = 0;
    std::size_t context = 0;
    std::size_t change_stats = 0;
    /// Kinds in the order their cumulative durations are stated.
    std::vector<TrendKind> cumulative_order;
    bool cumulative_chained = false;
    /// Sentence mode: one template per entry of cumulative_order.
    std::vector<std::size_t> cumulative_sentence;
    std::size_t cumulative_lead = 0;
    std::size_t cumulative_continue = 0;
    std::size_t cumulative_final = 0;
    std::size_t overall = 0;
};

/// Kinds present in `report`, longest cumulative duration first (ties keep
/// first-appearance order).
inline std::vector<TrendKind> kinds_by_duration(const TrendReport& report) {
    std::vector<TrendKind> kinds = report.kinds_in_order();
    std::stable_sort(kinds.begin(), kinds.end(), [&](TrendKind a, TrendKind b) {
        return report.cumulative_steps[kind_index(a)] > report.cumulative_steps[kind_index(b)];
    });
    return kinds;
}

inline AnswerPlan draw_answer_plan(const TrendReport& report, const TemplateBank& bank, std::uint64_t seed) {
    SplitMix64 rng(seed);
    AnswerPlan p;
    for (TrendKind k : kAllTrendKinds) p.synonym[kind_index(k)] = rng.index(bank.synonyms[kind_index(k)].size());
    p.segment_line = rng.index(bank.answer_segment_line.size());
    p.trend_count = rng.index(bank.answer_trend_count.size());
    p.context = rng.index(bank.answer_context.size());
    p.change_stats = rng.index(bank.answer_change_stats.size());
    p.cumulative_order = kinds_by_duration(report);
    const bool can_chain = bank.has_cumulative_chain();
    const bool can_sentence = !bank.answer_cumulative.empty();
    const bool coin = (rng.next() & 1U) != 0;
    p.cumulative_chained = can_chain && (!can_sentence || coin);
    for (std::size_t i = 0; i < p.cumulative_order.size(); ++i)
        p.cumulative_sentence.push_back(can_sentence ? rng.index(bank.answer_cumulative.size()) : 0);
    if (can_chain) {
        p.cumulative_lead = rng.index(bank.answer_cumulative_lead.size());
        p.cumulative_continue = rng.index(bank.answer_cumulative_continue.size());
        p.cumulative_final = rng.index(bank.answer_cumulative_final.size());
    }
    p.overall = rng.index(bank.answer_overall.size());
    return p;
}

namespace detail {
inline const std::string& pick(const std::vector<std::string>& list, std::size_t i, const char* name) {
    if (i >= list.size()) throw RangeError(std::string("answer plan index out of range for ") + name);
    return list[i];
}
}  // namespace detail

/// Sections of an answer rendered from a fixed plan.
struct RenderedAnswer {
    std::vector<std::string> segment_lines;
    std::vector<std::string> count_lines;
    std::vector<std::string> paragraph;

    std::string text(bool with_segments = true) const {
        std::string out;
        auto join = [&](const std::vector<std::string>& lines, const char* sep) {
            for (std::size_t i = 0; i < lines.size(); ++i) {
                if (i) out += sep;
                out += lines[i];
            }
        };
        if (with_segments) {
            join(segment_lines, "\n");
            out += "\n\n";
        }
        join(count_lines, "\n");
        out += "\n\n";
        join(paragraph, " ");
        return out;
    }
};

inline RenderedAnswer render_answer_sections(const TrendReport& report, const TemplateBank& bank,
                                             const AnswerContext& ctx, const AnswerPlan& plan) {
    auto word = [&](TrendKind k) -> const std::string& {
        return detail::pick(bank.synonyms[kind_index(k)], plan.synonym[kind_index(k)], "synonyms");
    };
    RenderedAnswer out;
    const std::string& seg_tpl = detail::pick(bank.answer_segment_line, plan.segment_line, "answer_segment_line");
    for (const auto& s : report.segments) {
        out.segment_lines.push_back(render_template(seg_tpl, {{"start_time", format_seconds(s.start_time_s)},
                                                              {"end_time", format_seconds(s.end_time_s)},
                                                              {"trend", word(s.kind)}}));
    }
    const std::string& count_tpl = detail::pick(bank.answer_trend_count, plan.trend_count, "answer_trend_count");
    for (TrendKind k : report.kinds_in_order())
        out.count_lines.push_back(render_template(count_tpl, {{"trend", word(k)}, {"num", report.count(k)}}));

    out.paragraph.push_back(render_template(detail::pick(bank.answer_context, plan.context, "answer_context"),
                                            {{"data_name", ctx.data_name},
                                             {"data", ctx.data_name},
                                             {"sensor_name", ctx.sensor_name},
                                             {"start_time", format_seconds(report.start_time_s())},
                                             {"end_time", format_seconds(report.end_time_s())}}));
    out.paragraph.push_back(
        render_template(detail::pick(bank.answer_change_stats, plan.change_stats, "answer_change_stats"),
                        {{"trend_num", report.num_distinct_kinds}, {"change_num", report.change_count}}));

    auto cumulative_bindings = [&](TrendKind k) -> TemplateBindings {
        return {{"trend_type", word(k)}, {"total_time", format_seconds(report.cumulative_seconds(k))}};
    };
    const auto& order = plan.cumulative_order;
    if (plan.cumulative_chained) {
        std::string sentence;
        for (std::size_t i = 0; i < order.size(); ++i) {
            const std::string* tpl;
            if (i == 0)
                tpl = &detail::pick(bank.answer_cumulative_lead, plan.cumulative_lead, "answer_cumulative_lead");
            else if (i + 1 == order.size())
                tpl = &detail::pick(bank.answer_cumulative_final, plan.cumulative_final, "answer_cumulative_final");
            else
                tpl = &detail::pick(bank.answer_cumulative_continue, plan.cumulative_continue,
                                    "answer_cumulative_continue");
            sentence += render_template(*tpl, cumulative_bindings(order[i]));
        }
        if (order.size() == 1) sentence += ".";
        out.paragraph.push_back(std::move(sentence));
    } else {
        if (plan.cumulative_sentence.size() < order.size())
            throw RangeError("answer plan lists fewer cumulative templates than kinds");
        for (std::size_t i = 0; i < order.size(); ++i) {
            out.paragraph.push_back(render_template(
                detail::pick(bank.answer_cumulative, plan.cumulative_sentence[i], "answer_cumulative"),
                cumulative_bindings(order[i])));
        }
    }
    out.paragraph.push_back(render_template(detail::pick(bank.answer_overall, plan.overall, "answer_overall"),
                                            {{"overall_trend", word(report.overall)}}));
    return out;
}

/// Full trend-description answer: segment lines, count lines, summary
/// paragraph. Identical inputs give byte-identical text.
inline std::string render_trend_answer(const TrendReport& report, const TemplateBank& bank,
                                       const AnswerContext& ctx, std::uint64_t seed) {
    return render_answer_sections(report, bank, ctx, draw_answer_plan(report, bank, seed)).text(true);
}

/// Summary answer: count lines and summary paragraph only.
inline std::string render_summary_answer(const TrendReport& report, const TemplateBank& bank,
                                         const AnswerContext& ctx, std::uint64_t seed) {
    return render_answer_sections(report, bank, ctx, draw_answer_plan(report, bank, seed)).text(false);
}

inline std::string render_question(QuestionKind kind, const TemplateBank& bank, const std::string& data_name,
                                   std::uint64_t seed) {
    const auto& list = kind == QuestionKind::Trend ? bank.question_trend : bank.question_summary;
    if (list.empty()) throw ConfigError("template bank has no questions of this kind");
    SplitMix64 rng(seed);
    return render_template(list[rng.index(list.size())], {{"data", data_name}, {"data_name", data_name}});
}

inline std::string render_system_prompt(const TemplateBank& bank, std::size_t n_points, double sample_rate_hz) {
    if (n_points < 1) throw DomainError("render_system_prompt: n_points must be >= 1");
    return render_template(bank.system_prompt, {{"N", n_points}, {"sample_rate", format_rate(sample_rate_hz)}});
}

inline std::string render_system_prompt(std::size_t n_points, double sample_rate_hz) {
    static const TemplateBank bank = TemplateBank::defaults();
    return render_system_prompt(bank, n_points, sample_rate_hz);
}

/// Knobs of stage-1 corpus generation.
struct GenerationConfig {
    std::size_t min_len = 5;
    std::size_t max_len = 200;
    double trend_question_ratio = 0.5;
    std::string data_name = "sensor data";
    bool normalize = true;
    double epsilon = 0.0;
    /// Fraction of segments kept (1 keeps all).
    double subsample_fraction = 1.0;
};

/// Where a QA pair came from.
struct Provenance {
    std::string dataset;
    std::string subject;
    std::string channel_id;
    std::string sensor_name;
    std::size_t start_index = 0;
    std::size_t length = 0;
    std::uint64_t seed = 0;
};

struct QAPair {
    std::string system_prompt;
    std::string question;
    std::string answer;
    QuestionKind kind = QuestionKind::Trend;
    TrendReport report;
    Provenance source;
    std::vector<double> readings;
    double sample_rate_hz = 1.0;
    bool normalized = false;

    std::string id() const {
        char idx[32];
        std::snprintf(idx, sizeof idx, "%08zu", source.start_index);
        return source.dataset + "/" + source.subject + "/" + source.channel_id + "/" + idx;
    }
};

inline constexpr int kSchemaVersion = 1;

inline nlohmann::json to_json(const QAPair& qa) {
    return {{"schema_version", kSchemaVersion},
            {"id", qa.id()},
            {"dataset", qa.source.dataset},
            {"subject", qa.source.subject},
            {"channel_id", qa.source.channel_id},
            {"sensor_name", qa.source.sensor_name},
            {"start_index", qa.source.start_index},
            {"length", qa.source.length},
            {"sample_rate_hz", qa.sample_rate_hz},
            {"readings", qa.readings},
            {"normalized", qa.normalized},
            {"question_type", to_string(qa.kind)},
            {"system_prompt", qa.system_prompt},
            {"question", qa.question},
            {"answer", qa.answer},
            {"report", to_json(qa.report)},
            {"seed", qa.source.seed}};
}

/// Builds one QA pair for already-prepared readings.
inline QAPair forge_pair(const TimeSeries& readings, bool normalized, const TemplateBank& bank,
                         const GenerationConfig& cfg, Provenance source) {
    QAPair qa;
    qa.report = segment_trends(readings, cfg.epsilon);
    qa.readings.assign(readings.values().begin(), readings.values().end());
    qa.sample_rate_hz = readings.sample_rate_hz();
    qa.normalized = normalized;
    SplitMix64 root(source.seed);
    qa.kind = root.split(10).unit() < cfg.trend_question_ratio ? QuestionKind::Trend : QuestionKind::Summary;
    AnswerContext ctx{cfg.data_name, (normalized ? "normalized " : "") + source.sensor_name};
    qa.system_prompt = render_system_prompt(bank, readings.size(), readings.sample_rate_hz());
    qa.question = render_question(qa.kind, bank, cfg.data_name, root.split(11).next());
    qa.answer = qa.kind == QuestionKind::Trend ? render_trend_answer(qa.report, bank, ctx, source.seed)
                                               : render_summary_answer(qa.report, bank, ctx, source.seed);
    qa.source = std::move(source);
    return qa;
}

/// Stage-1 generation for one channel: random segmentation, optional
/// instance normalization, trend analysis and template rendering.
/// `channel_seed` fully determines the output.
inline std::vector<QAPair> forge_channel(const TimeSeries& channel, const TemplateBank& bank,
                                         const GenerationConfig& cfg, const std::string& dataset,
                                         const std::string& subject, std::uint64_t channel_seed) {
    if (cfg.min_len < 2 || cfg.min_len > cfg.max_len)
        throw RangeError("forge: require 2 <= min_len <= max_len (a trend needs two readings)");
    std::vector<QAPair> out;
    if (channel.size() < cfg.min_len) return out;
    const std::size_t max_len = std::min(cfg.max_len, channel.size());
    SplitMix64 root(channel_seed);
    const auto segments = segment_randomly(channel, cfg.min_len, max_len, root.split(1).next());
    SplitMix64 pair_seeds = root.split(2);
    SplitMix64 keep = root.split(3);
    for (const auto& seg : segments) {
        const std::uint64_t seed = pair_seeds.next();
        const bool kept = keep.unit() < cfg.subsample_fraction;
        if (!kept) continue;
        TimeSeries piece = channel.slice(seg.start_index, seg.length);
        if (cfg.normalize) piece = instance_normalize(piece);
        Provenance src{dataset, subject, channel.channel_id(), channel.sensor_name(), seg.start_index, seg.length, seed};
        out.push_back(forge_pair(piece, cfg.normalize, bank, cfg, std::move(src)));
    }
    return out;
}

}  // namespace sensortext
