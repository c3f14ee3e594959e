#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "format.hpp"
#include "templates.hpp"
#include "trend.hpp"

namespace sensortext {

/// Surface words recognised as each trend kind.
class TrendLexicon {
public:
    TrendLexicon() = default;

    /// Shipped synonyms plus common alternatives seen in free-form model output.
    static TrendLexicon standard() {
        TrendLexicon lex;
        lex.add_bank(TemplateBank::defaults());
        for (const char* w : {"rising", "climbing", "upwards", "uptrend", "increase"})
            lex.add(w, TrendKind::Growing);
        for (const char* w : {"falling", "dropping", "downwards", "downtrend", "decrease"})
            lex.add(w, TrendKind::Declining);
        for (const char* w : {"steady", "constant", "flat", "unchanged", "unchanging"})
            lex.add(w, TrendKind::Stable);
        return lex;
    }

    void add(std::string word, TrendKind kind) { words_[std::move(word)] = kind; }

    void add_bank(const TemplateBank& bank) {
        for (TrendKind k : kAllTrendKinds)
            for (const auto& w : bank.synonyms[kind_index(k)]) add(w, k);
    }

    std::optional<TrendKind> lookup(std::string_view word) const {
        auto it = words_.find(word);
        if (it == words_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::map<std::string, TrendKind, std::less<>> words_;
};

/// Claims recovered from a trend description. Absent sections stay empty.
struct ExtractedClaims {
    struct Segment {
        std::optional<TrendKind> kind;
        std::string word;
        double start_s = 0.0;
        double end_s = 0.0;
    };
    std::vector<Segment> segments;
    std::vector<std::pair<TrendKind, long long>> counts;
    std::optional<std::pair<double, double>> span;
    std::optional<long long> distinct_kinds;
    std::optional<long long> change_count;
    std::vector<std::pair<TrendKind, double>> cumulative;
    std::optional<TrendKind> overall;

    bool empty() const noexcept {
        return segments.empty() && counts.empty() && !span && !distinct_kinds && !change_count &&
               cumulative.empty() && !overall;
    }
};

struct Discrepancy {
    std::string field;
    std::string claimed;
    std::string actual;
    bool structural = false;
};

struct VerifierVerdict {
    std::optional<ExtractedClaims> extracted;  // nullopt = parse failure
    bool faithful = false;
    std::vector<Discrepancy> discrepancies;
    int score = 1;
    std::string reason;

    /// Compact "score#reason" line.
    std::string line() const { return std::to_string(score) + "#" + reason; }
};

namespace verify_detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Cursor over one line for the segment-line grammar.
struct Scanner {
    std::string_view s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    bool eat(std::string_view lit) {
        if (s.substr(i, lit.size()) == lit) {
            i += lit.size();
            return true;
        }
        return false;
    }
    bool at_word_end() const { return i >= s.size() || !std::isalpha(static_cast<unsigned char>(s[i])); }

    std::optional<double> number() {
        const std::size_t b = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == b) return std::nullopt;
        if (i + 1 < s.size() && s[i] == '.' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
            ++i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
        double v = 0;
        std::from_chars(s.data() + b, s.data() + i, v);
        return v;
    }

    /// Optional "s", "sec", "second(s)" after a time value.
    void unit() {
        const std::size_t save = i;
        skip_ws();
        for (std::string_view u : {"seconds", "second", "secs", "sec", "s"}) {
            if (eat(u)) {
                if (at_word_end()) return;
                i -= u.size();
            }
        }
        i = save;
    }
};

/// "<t1>[s| seconds] (-|–|to) <t2>[s| seconds]: <trend>"
inline std::optional<ExtractedClaims::Segment> parse_segment_line(std::string_view line, const TrendLexicon& lex) {
    Scanner sc{line};
    sc.skip_ws();
    auto a = sc.number();
    if (!a) return std::nullopt;
    sc.unit();
    sc.skip_ws();
    if (!(sc.eat("-") || sc.eat("\xE2\x80\x93") || sc.eat("\xE2\x80\x94") || sc.eat("to"))) return std::nullopt;
    sc.skip_ws();
    auto b = sc.number();
    if (!b) return std::nullopt;
    sc.unit();
    sc.skip_ws();
    if (!sc.eat(":")) return std::nullopt;
    std::string word = lower(trim(line.substr(sc.i)));
    while (!word.empty() && (word.back() == '.' || word.back() == ',')) word.pop_back();
    ExtractedClaims::Segment seg;
    seg.kind = lex.lookup(word);
    seg.word = word;
    seg.start_s = *a;
    seg.end_s = *b;
    return seg;
}

/// "<...> <trend> (trends|segments): <int>"
inline std::optional<std::pair<TrendKind, long long>> parse_count_line(std::string_view line,
                                                                       const TrendLexicon& lex) {
    const std::size_t colon = line.rfind(':');
    if (colon == std::string_view::npos) return std::nullopt;
    std::string_view rhs = trim(line.substr(colon + 1));
    if (rhs.empty() || !std::all_of(rhs.begin(), rhs.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return std::nullopt;
    std::vector<std::string> words;
    std::string cur;
    for (char c : lower(line.substr(0, colon))) {
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '-') {
            cur += c;
        } else if (!cur.empty()) {
            words.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    if (words.size() < 2) return std::nullopt;
    const std::string& noun = words.back();
    if (noun != "trends" && noun != "segments" && noun != "trend" && noun != "segment") return std::nullopt;
    auto kind = lex.lookup(words[words.size() - 2]);
    if (!kind) return std::nullopt;
    long long n = 0;
    std::from_chars(rhs.data(), rhs.data() + rhs.size(), n);
    return std::make_pair(*kind, n);
}

struct Token {
    enum Type { Word, Integer, Decimal, Comma } type;
    std::string text;
    double value = 0.0;
};

inline std::vector<Token> tokenize_sentence(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isdigit(c)) {
            const std::size_t b = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            bool dec = false;
            if (i + 1 < s.size() && s[i] == '.' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
                dec = true;
                ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            }
            Token t{dec ? Token::Decimal : Token::Integer, std::string(s.substr(b, i - b))};
            std::from_chars(s.data() + b, s.data() + i, t.value);
            out.push_back(std::move(t));
        } else if (std::isalpha(c)) {
            const std::size_t b = i;
            while (i < s.size() && (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '-' || s[i] == '\'')) ++i;
            out.push_back({Token::Word, lower(s.substr(b, i - b))});
        } else {
            if (c == ',' || c == ';') out.push_back({Token::Comma, ","});
            ++i;
        }
    }
    return out;
}

inline std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        cur += c;
        const bool end = (c == '.' || c == '!' || c == '?') &&
                         (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])));
        if (end) {
            if (!trim(cur).empty()) out.emplace_back(trim(cur));
            cur.clear();
        }
    }
    if (!trim(cur).empty()) out.emplace_back(trim(cur));
    return out;
}

inline bool is_change_word(std::string_view w) {
    return w.starts_with("change") || w.starts_with("shift") || w == "times" || w.starts_with("occurrence") ||
           w.starts_with("instance") || w.starts_with("transition") || w.starts_with("fluctuation");
}

inline void parse_paragraph(std::string_view text, const TrendLexicon& lex, ExtractedClaims& out) {
    for (const auto& sentence : split_sentences(text)) {
        const auto toks = tokenize_sentence(sentence);
        std::vector<double> decimals;
        std::vector<std::size_t> integers;  // token positions of counts
        std::vector<long long> integer_values;
        bool mentions_trend = false, has_kind = false;
        for (std::size_t t = 0; t < toks.size(); ++t) {
            const auto& tok = toks[t];
            if (tok.type == Token::Decimal) decimals.push_back(tok.value);
            if (tok.type == Token::Integer) {
                integers.push_back(t);
                integer_values.push_back(static_cast<long long>(tok.value));
            }
            if (tok.type == Token::Word) {
                if (tok.text.starts_with("trend")) mentions_trend = true;
                if (lex.lookup(tok.text)) has_kind = true;
                if (auto n = parse_number_word(tok.text)) {
                    integers.push_back(t);
                    integer_values.push_back(*n);
                }
            }
        }
        if (!decimals.empty()) {
            if (!has_kind && decimals.size() >= 2 && !out.span) {
                out.span = std::make_pair(decimals[0], decimals[1]);
                continue;
            }
            // Cumulative clauses: one trend word and one duration per clause.
            std::optional<TrendKind> kind;
            std::optional<double> secs;
            auto flush = [&] {
                if (kind && secs) out.cumulative.emplace_back(*kind, *secs);
                kind.reset();
                secs.reset();
            };
            for (const auto& tok : toks) {
                if (tok.type == Token::Comma || (tok.type == Token::Word && tok.text == "and" && kind && secs)) {
                    flush();
                    continue;
                }
                if (tok.type == Token::Word && !kind) kind = lex.lookup(tok.text);
                if (tok.type == Token::Decimal && !secs) secs = tok.value;
            }
            flush();
            continue;
        }
        if (!integers.empty() && mentions_trend && !has_kind) {
            if (integer_values.size() >= 2) {
                out.distinct_kinds = integer_values[0];
                out.change_count = integer_values[1];
            } else {
                bool change = false;
                for (std::size_t t = integers[0] + 1; t < std::min(toks.size(), integers[0] + 4); ++t)
                    if (toks[t].type == Token::Word && is_change_word(toks[t].text)) change = true;
                if (change)
                    out.change_count = integer_values[0];
                else
                    out.distinct_kinds = integer_values[0];
            }
            continue;
        }
        if (has_kind && integers.empty()) {
            for (const auto& tok : toks)
                if (tok.type == Token::Word)
                    if (auto k = lex.lookup(tok.text)) out.overall = *k;
        }
    }
}

}  // namespace verify_detail

/// Recovers segment lines, count lines and summary claims from free text.
inline ExtractedClaims extract_claims(std::string_view text, const TrendLexicon& lex = TrendLexicon::standard()) {
    using namespace verify_detail;
    ExtractedClaims out;
    std::string paragraph;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty()) continue;
        if (auto seg = parse_segment_line(line, lex)) {
            out.segments.push_back(*seg);
        } else if (auto cnt = parse_count_line(line, lex)) {
            out.counts.push_back(*cnt);
        } else {
            if (!paragraph.empty()) paragraph += ' ';
            paragraph += line;
        }
    }
    parse_paragraph(paragraph, lex, out);
    return out;
}

namespace verify_detail {
inline bool same_time(double claimed, double truth) { return std::fabs(round2(claimed) - round2(truth)) < 1e-9; }
}  // namespace verify_detail

/// Compares a description against the true report and grades it 1-5:
/// exact = 5; one value-level slip costs 1, several cost 2; any structural
/// error (segment count, segment kinds, overall trend) costs 2; at most 3 is
/// deducted, so 1 is reserved for text with no recognisable claims.
inline VerifierVerdict verify_trend_text(std::string_view text, const TrendReport& truth,
                                         const TrendLexicon& lex = TrendLexicon::standard()) {
    using verify_detail::same_time;
    VerifierVerdict v;
    ExtractedClaims c = extract_claims(text, lex);
    if (c.empty()) {
        v.reason = "No trend description could be parsed.";
        v.score = 1;
        v.discrepancies.push_back({"parse", "unparseable", "trend description", true});
        return v;
    }
    auto add = [&](std::string field, std::string claimed, std::string actual, bool structural = false) {
        v.discrepancies.push_back({std::move(field), std::move(claimed), std::move(actual), structural});
    };
    auto secs = [](double s) { return format_seconds(s); };
    auto name = [](TrendKind k) { return std::string(to_string(k)); };

    if (c.span) {
        if (!same_time(c.span->first, truth.start_time_s()))
            add("span.start", secs(c.span->first), secs(truth.start_time_s()));
        if (!same_time(c.span->second, truth.end_time_s()))
            add("span.end", secs(c.span->second), secs(truth.end_time_s()));
    }
    if (!c.segments.empty()) {
        const auto& ts = truth.segments;
        if (c.segments.size() != ts.size()) {
            add("segments.count", std::to_string(c.segments.size()), std::to_string(ts.size()), true);
        } else {
            bool kinds_ok = true;
            for (std::size_t i = 0; i < ts.size(); ++i)
                if (c.segments[i].kind != ts[i].kind) kinds_ok = false;
            if (!kinds_ok) {
                std::string claimed, actual;
                for (std::size_t i = 0; i < ts.size(); ++i) {
                    claimed += (i ? "," : "") + (c.segments[i].kind ? name(*c.segments[i].kind) : c.segments[i].word);
                    actual += (i ? "," : "") + name(ts[i].kind);
                }
                add("segments.kinds", claimed, actual, true);
            }
            // Each boundary once: start of segment 0, then every end.
            if (!same_time(c.segments[0].start_s, ts[0].start_time_s))
                add("segments[0].start", secs(c.segments[0].start_s), secs(ts[0].start_time_s));
            for (std::size_t i = 0; i < ts.size(); ++i) {
                const bool end_ok = same_time(c.segments[i].end_s, ts[i].end_time_s);
                const bool next_ok = i + 1 == ts.size() || same_time(c.segments[i + 1].start_s, ts[i].end_time_s);
                if (!end_ok || !next_ok)
                    add("segments[" + std::to_string(i) + "].end",
                        secs(end_ok ? c.segments[i + 1].start_s : c.segments[i].end_s), secs(ts[i].end_time_s));
            }
        }
    }
    if (!c.counts.empty()) {
        PerKind<bool> seen{};
        for (auto [k, n] : c.counts) {
            seen[kind_index(k)] = true;
            if (n < 0 || static_cast<std::size_t>(n) != truth.count(k))
                add("counts." + name(k), std::to_string(n), std::to_string(truth.count(k)));
        }
        for (TrendKind k : kAllTrendKinds)
            if (!seen[kind_index(k)] && truth.count(k) > 0)
                add("counts." + name(k), "missing", std::to_string(truth.count(k)));
    }
    if (c.distinct_kinds && *c.distinct_kinds != static_cast<long long>(truth.num_distinct_kinds))
        add("num_distinct_kinds", std::to_string(*c.distinct_kinds), std::to_string(truth.num_distinct_kinds));
    if (c.change_count && *c.change_count != static_cast<long long>(truth.change_count))
        add("change_count", std::to_string(*c.change_count), std::to_string(truth.change_count));
    if (!c.cumulative.empty()) {
        PerKind<bool> seen{};
        for (auto [k, s] : c.cumulative) {
            seen[kind_index(k)] = true;
            if (!same_time(s, truth.cumulative_seconds(k)))
                add("cumulative_seconds." + name(k), secs(s), secs(truth.cumulative_seconds(k)));
        }
        for (TrendKind k : kAllTrendKinds)
            if (!seen[kind_index(k)] && truth.count(k) > 0)
                add("cumulative_seconds." + name(k), "missing", secs(truth.cumulative_seconds(k)));
    }
    if (c.overall && *c.overall != truth.overall) add("overall", name(*c.overall), name(truth.overall), true);

    std::size_t value_errors = 0, structural_errors = 0;
    for (const auto& d : v.discrepancies) (d.structural ? structural_errors : value_errors) += 1;
    const int value_penalty = value_errors == 0 ? 0 : value_errors == 1 ? 1 : 2;
    const int structural_penalty = structural_errors == 0 ? 0 : 2;
    v.score = 5 - std::min(3, value_penalty + structural_penalty);
    v.faithful = v.discrepancies.empty();
    v.extracted = std::move(c);

    if (v.faithful) {
        v.reason = "The description matches the ground truth accurately.";
    } else {
        std::string fields;
        for (std::size_t i = 0; i < v.discrepancies.size() && i < 4; ++i)
            fields += (i ? ", " : "") + v.discrepancies[i].field;
        if (v.discrepancies.size() > 4) fields += ", ...";
        const char* band = v.score == 4 ? "Minor error" : v.score == 3 ? "Moderate errors" : "Significant discrepancies";
        v.reason = std::string(band) + " compared to ground truth (" + std::to_string(v.discrepancies.size()) +
                   " discrepancies: " + fields + ").";
    }
    return v;
}

inline nlohmann::json to_json(const ExtractedClaims& c) {
    nlohmann::json j = nlohmann::json::object();
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : c.segments)
        segs.push_back({{"kind", s.kind ? std::string(to_string(*s.kind)) : s.word},
                        {"start_time_s", s.start_s},
                        {"end_time_s", s.end_s}});
    j["segments"] = std::move(segs);
    nlohmann::json counts = nlohmann::json::object();
    for (auto [k, n] : c.counts) counts[std::string(to_string(k))] = n;
    j["counts"] = std::move(counts);
    nlohmann::json cum = nlohmann::json::object();
    for (auto [k, s] : c.cumulative) cum[std::string(to_string(k))] = s;
    j["cumulative_seconds"] = std::move(cum);
    j["span"] = c.span ? nlohmann::json{c.span->first, c.span->second} : nlohmann::json(nullptr);
    j["num_distinct_kinds"] = c.distinct_kinds ? nlohmann::json(*c.distinct_kinds) : nlohmann::json(nullptr);
    j["change_count"] = c.change_count ? nlohmann::json(*c.change_count) : nlohmann::json(nullptr);
    j["overall"] = c.overall ? nlohmann::json(std::string(to_string(*c.overall))) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json to_json(const VerifierVerdict& v) {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& x : v.discrepancies)
        d.push_back({{"field", x.field}, {"claimed", x.claimed}, {"actual", x.actual}, {"structural", x.structural}});
    return {{"score", v.score},
            {"faithful", v.faithful},
            {"parse_failure", !v.extracted.has_value()},
            {"discrepancies", std::move(d)},
            {"extracted", v.extracted ? to_json(*v.extracted) : nlohmann::json(nullptr)},
            {"line", v.line()}};
}

}  // namespace sensortext
