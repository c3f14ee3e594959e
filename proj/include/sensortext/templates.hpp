#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "format.hpp"
#include "trend.hpp"

namespace sensortext {

/// Placeholder names a template may reference.
inline const std::set<std::string, std::less<>>& placeholder_vocabulary() {
    static const std::set<std::string, std::less<>> vocab = {
        "start_time", "end_time", "trend",      "data",       "num",           "data_name",   "sensor_name",
        "trend_num",  "change_num", "trend_type", "total_time", "overall_trend", "sample_rate", "N"};
    return vocab;
}

/// A value bound to a placeholder. Integers may be rendered as words via
/// the `{name:word}` modifier.
struct TemplateValue {
    std::string text;
    std::optional<long long> integer;

    TemplateValue() = default;
    TemplateValue(std::string s) : text(std::move(s)) {}                       // NOLINT
    TemplateValue(const char* s) : text(s) {}                                  // NOLINT
    TemplateValue(long long n) : text(std::to_string(n)), integer(n) {}        // NOLINT
    TemplateValue(std::size_t n) : TemplateValue(static_cast<long long>(n)) {} // NOLINT
    TemplateValue(int n) : TemplateValue(static_cast<long long>(n)) {}         // NOLINT
};

using TemplateBindings = std::map<std::string, TemplateValue, std::less<>>;

struct PlaceholderRef {
    std::string name;
    std::string modifier;
};

/// Lists the placeholders of `tpl` in order of appearance.
inline std::vector<PlaceholderRef> scan_placeholders(std::string_view tpl) {
    std::vector<PlaceholderRef> out;
    for (std::size_t i = 0; i < tpl.size(); ++i) {
        if (tpl[i] == '}') throw TemplateError("}", "template has unmatched '}': " + std::string(tpl));
        if (tpl[i] != '{') continue;
        const std::size_t close = tpl.find('}', i + 1);
        if (close == std::string_view::npos || tpl.substr(i + 1, close - i - 1).find('{') != std::string_view::npos)
            throw TemplateError("{", "template has unmatched '{': " + std::string(tpl));
        std::string_view body = tpl.substr(i + 1, close - i - 1);
        PlaceholderRef ref;
        const std::size_t colon = body.find(':');
        ref.name = std::string(body.substr(0, colon));
        if (colon != std::string_view::npos) ref.modifier = std::string(body.substr(colon + 1));
        out.push_back(std::move(ref));
        i = close;
    }
    return out;
}

/// Checks that `tpl` is well formed and only uses known placeholders.
inline void validate_template(std::string_view tpl) {
    for (const auto& ref : scan_placeholders(tpl)) {
        if (!placeholder_vocabulary().contains(ref.name))
            throw TemplateError(ref.name, "unknown placeholder {" + ref.name + "} in template: " + std::string(tpl));
        if (!ref.modifier.empty() && ref.modifier != "word")
            throw TemplateError(ref.name, "unknown modifier '" + ref.modifier + "' on {" + ref.name + "}");
    }
}

namespace detail {
inline bool is_trend_placeholder(std::string_view name) {
    return name == "trend" || name == "trend_type" || name == "overall_trend";
}

inline bool starts_with_vowel(std::string_view s) {
    if (s.empty()) return false;
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s.front())));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

/// "a" -> "an" when the rendered text so far ends with the article "a ".
inline void fix_article(std::string& out) {
    const std::size_t n = out.size();
    if (n < 2 || out[n - 1] != ' ' || (out[n - 2] != 'a' && out[n - 2] != 'A')) return;
    if (n >= 3 && std::isalnum(static_cast<unsigned char>(out[n - 3]))) return;
    out.insert(n - 1, "n");
}
}  // namespace detail

/// Substitutes every placeholder of `tpl`. A placeholder without a binding
/// raises TemplateError naming it.
inline std::string render_template(std::string_view tpl, const TemplateBindings& bindings) {
    std::string out;
    out.reserve(tpl.size() + 32);
    std::size_t i = 0;
    while (i < tpl.size()) {
        const std::size_t open = tpl.find('{', i);
        const std::size_t stray = tpl.find('}', i);
        if (stray < open) throw TemplateError("}", "template has unmatched '}': " + std::string(tpl));
        if (open == std::string_view::npos) {
            out.append(tpl.substr(i));
            break;
        }
        out.append(tpl.substr(i, open - i));
        const std::size_t close = tpl.find('}', open + 1);
        if (close == std::string_view::npos) throw TemplateError("{", "template has unmatched '{': " + std::string(tpl));
        std::string_view body = tpl.substr(open + 1, close - open - 1);
        const std::size_t colon = body.find(':');
        std::string_view name = body.substr(0, colon);
        std::string_view modifier = colon == std::string_view::npos ? std::string_view{} : body.substr(colon + 1);
        auto it = bindings.find(name);
        if (it == bindings.end())
            throw TemplateError(std::string(name), "no binding for placeholder {" + std::string(name) + "}");
        std::string value;
        if (modifier == "word") {
            if (!it->second.integer)
                throw TemplateError(std::string(name), "{" + std::string(name) + ":word} needs an integer value");
            value = number_word(*it->second.integer);
        } else if (modifier.empty()) {
            value = it->second.text;
        } else {
            throw TemplateError(std::string(name), "unknown modifier '" + std::string(modifier) + "'");
        }
        if (detail::is_trend_placeholder(name) && detail::starts_with_vowel(value)) detail::fix_article(out);
        out += value;
        i = close + 1;
    }
    return out;
}

/// Question, answer and system-prompt templates plus the surface words used
/// for each trend kind.
struct TemplateBank {
    std::string system_prompt;
    std::vector<std::string> question_trend;
    std::vector<std::string> question_summary;
    std::vector<std::string> answer_segment_line;
    std::vector<std::string> answer_trend_count;
    std::vector<std::string> answer_context;
    std::vector<std::string> answer_change_stats;
    std::vector<std::string> answer_cumulative;
    /// Optional clause chain for a single multi-kind cumulative sentence:
    /// lead clause, middle clauses, final clause (ending the sentence).
    std::vector<std::string> answer_cumulative_lead;
    std::vector<std::string> answer_cumulative_continue;
    std::vector<std::string> answer_cumulative_final;
    std::vector<std::string> answer_overall;
    PerKind<std::vector<std::string>> synonyms;

    bool has_cumulative_chain() const noexcept {
        return !answer_cumulative_lead.empty() && !answer_cumulative_continue.empty() &&
               !answer_cumulative_final.empty();
    }

    void validate() const {
        auto check_list = [](const std::vector<std::string>& list, const char* name, bool required) {
            if (required && list.empty()) throw ConfigError(std::string("template bank: '") + name + "' is empty");
            for (const auto& t : list) validate_template(t);
        };
        validate_template(system_prompt);
        check_list(question_trend, "question_trend", true);
        check_list(question_summary, "question_summary", true);
        check_list(answer_segment_line, "answer_segment_line", true);
        check_list(answer_trend_count, "answer_trend_count", true);
        check_list(answer_context, "answer_context", true);
        check_list(answer_change_stats, "answer_change_stats", true);
        check_list(answer_cumulative, "answer_cumulative", !has_cumulative_chain());
        check_list(answer_cumulative_lead, "answer_cumulative_lead", false);
        check_list(answer_cumulative_continue, "answer_cumulative_continue", false);
        check_list(answer_cumulative_final, "answer_cumulative_final", false);
        check_list(answer_overall, "answer_overall", true);
        for (TrendKind k : kAllTrendKinds) {
            const auto& words = synonyms[kind_index(k)];
            if (words.empty())
                throw ConfigError("template bank: no synonyms for '" + std::string(to_string(k)) + "'");
            for (const auto& w : words)
                if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) {
                        return std::islower(static_cast<unsigned char>(c)) || c == '-';
                    }))
                    throw ConfigError("template bank: bad synonym '" + w + "'");
        }
    }

    /// The templates printed in the source tables.
    static TemplateBank defaults();

    nlohmann::json to_json() const {
        nlohmann::json syn = nlohmann::json::object();
        for (TrendKind k : kAllTrendKinds) syn[std::string(to_string(k))] = synonyms[kind_index(k)];
        return {{"system_prompt", system_prompt},
                {"question_trend", question_trend},
                {"question_summary", question_summary},
                {"answer_segment_line", answer_segment_line},
                {"answer_trend_count", answer_trend_count},
                {"answer_context", answer_context},
                {"answer_change_stats", answer_change_stats},
                {"answer_cumulative", answer_cumulative},
                {"answer_cumulative_lead", answer_cumulative_lead},
                {"answer_cumulative_continue", answer_cumulative_continue},
                {"answer_cumulative_final", answer_cumulative_final},
                {"answer_overall", answer_overall},
                {"synonyms", std::move(syn)}};
    }

    static TemplateBank from_json(const nlohmann::json& j) {
        TemplateBank b;
        try {
            auto list = [&](const char* key) {
                return j.contains(key) ? j.at(key).get<std::vector<std::string>>() : std::vector<std::string>{};
            };
            b.system_prompt = j.at("system_prompt").get<std::string>();
            b.question_trend = list("question_trend");
            b.question_summary = list("question_summary");
            b.answer_segment_line = list("answer_segment_line");
            b.answer_trend_count = list("answer_trend_count");
            b.answer_context = list("answer_context");
            b.answer_change_stats = list("answer_change_stats");
            b.answer_cumulative = list("answer_cumulative");
            b.answer_cumulative_lead = list("answer_cumulative_lead");
            b.answer_cumulative_continue = list("answer_cumulative_continue");
            b.answer_cumulative_final = list("answer_cumulative_final");
            b.answer_overall = list("answer_overall");
            const auto& syn = j.at("synonyms");
            for (TrendKind k : kAllTrendKinds)
                b.synonyms[kind_index(k)] = syn.at(std::string(to_string(k))).get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError(std::string("template bank: ") + ex.what());
        }
        b.validate();
        return b;
    }

    static TemplateBank load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open template bank '" + path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError("template bank '" + path + "': " + ex.what());
        }
        return from_json(j);
    }
};

inline TemplateBank TemplateBank::defaults() {
    TemplateBank b;
    b.system_prompt =
        "A dialogue between a researcher and an AI assistant. The AI analyzes a sensor time-series dataset "
        "({N} points, sampled at {sample_rate}Hz) to answer specific questions, demonstrating its analytical "
        "capabilities and the potential for human-AI collaboration in interpreting sensor data.";
    b.question_trend = {
        "Kindly provide a detailed analysis of the trend changes observed in the {data}.",
        "Please offer a comprehensive description of how the trends in the {data} have evolved.",
        "I would appreciate a thorough explanation of the trend fluctuations that occurred within the {data}.",
        "Could you examine the {data} in depth and explain the trend shifts observed step by step?",
        "Detail the {data}'s trend transitions.",
        "Could you assess the {data} and describe the trend transformations step by step?",
        "Could you analyze the trends observed in the {data} over the specified period step by step?",
        "Can you dissect the {data} and explain the trend changes in a detailed manner?",
        "What trend changes can be seen in the {data}?",
    };
    b.question_summary = {
        "Could you provide a summary of the main features of the input {data} and the distribution of the trends?",
        "Please give an overview of the essential attributes of the input {data} and the spread of the trends.",
        "Describe the salient features and trend distribution within the {data}.",
        "Give a summary of the {data}'s main elements and trend apportionment.",
        "Summarize the {data}'s core features and trend dissemination.",
        "Outline the principal aspects and trend allocation of the {data}.",
        "Summarize the key features and trend distribution of the {data}.",
        "I need a summary of {data}'s main elements and their trend distributions.",
    };
    b.answer_segment_line = {
        "{start_time}s to {end_time}s: {trend}",
        "{start_time} seconds to {end_time} seconds: {trend}",
        "{start_time} to {end_time} seconds: {trend}",
        "{start_time}-{end_time} seconds: {trend}",
        "{start_time}-{end_time}s: {trend}",
        "{start_time}s-{end_time}s: {trend}",
    };
    b.answer_trend_count = {
        "Number of {trend} trends: {num}",
        "Count of {trend} trends: {num}",
        "Number of {trend} segments: {num}",
        "Count of {trend} segments: {num}",
    };
    b.answer_context = {
        "The given {data_name} represents {sensor_name} sensor readings from {start_time}s to {end_time}s.",
        "The {data_name} contains {sensor_name} sensor readings recorded between {start_time} and {end_time} seconds.",
        "The {sensor_name} sensor readings collected from {start_time} to {end_time} seconds are presented in this "
        "{data_name}.",
    };
    b.answer_change_stats = {
        "The data exhibits {trend_num} distinct trends, with {change_num} trend changes observed.",
        "Across {trend_num} trends, the data shows {change_num} occurrences of trend shifts.",
        "{trend_num} trends are present, with {change_num} instances of trend changes.",
    };
    b.answer_cumulative = {
        "To sum up, the data exhibited a {trend_type} trend for a total duration of {total_time} seconds.",
        "Overall, the data showed a {trend_type} trend spanning {total_time} seconds.",
        "In conclusion, the trend was {trend_type} over {total_time} seconds.",
    };
    b.answer_overall = {
        "The overall trend is {overall_trend}.",
        "The primary trend detected is {overall_trend}.",
        "Looking at the broader pattern, the trend is {overall_trend}.",
    };
    b.synonyms[kind_index(TrendKind::Growing)] = {"growing", "increasing", "ascending", "upward"};
    b.synonyms[kind_index(TrendKind::Declining)] = {"declining", "decreasing", "descending", "downward"};
    b.synonyms[kind_index(TrendKind::Stable)] = {"stable", "consistent"};
    return b;
}

}  // namespace sensortext
