#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sensortext/error.hpp"
#include "sensortext/porter_stemmer.hpp"

namespace sensortext {

inline constexpr const char* kTextTokenizerId = "lower-alnum-v1";

/// Lowercases and splits into maximal runs of ASCII letters/digits. A '.'
/// between two digits stays inside the token so "2.36" is one token.
inline std::vector<std::string> tokenize_text(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto is_alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (is_alnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (c == '.' && !cur.empty() && is_digit(cur.back()) && i + 1 < text.size() &&
                   is_digit(text[i + 1])) {
            cur.push_back(c);
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

using Tokens = std::vector<std::string>;

namespace detail {

inline std::map<std::string, int> unigram_counts(const Tokens& t) {
    std::map<std::string, int> m;
    for (const auto& w : t) ++m[w];
    return m;
}

inline double f1(double p, double r) { return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

inline std::size_t lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace detail

/// Sentence BLEU with n = 1: clipped unigram precision times brevity penalty,
/// no smoothing. Effective reference length is the closest one (shorter on ties).
inline double bleu1(const Tokens& candidate, const std::vector<Tokens>& references) {
    if (candidate.empty() || references.empty()) return 0.0;
    std::map<std::string, int> max_ref;
    for (const auto& ref : references)
        for (const auto& [w, n] : detail::unigram_counts(ref)) max_ref[w] = std::max(max_ref[w], n);
    int clipped = 0;
    for (const auto& [w, n] : detail::unigram_counts(candidate)) {
        auto it = max_ref.find(w);
        if (it != max_ref.end()) clipped += std::min(n, it->second);
    }
    const double c = static_cast<double>(candidate.size());
    std::size_t r = references.front().size();
    for (const auto& ref : references) {
        const auto d = [&](std::size_t len) { return len > candidate.size() ? len - candidate.size() : candidate.size() - len; };
        if (d(ref.size()) < d(r) || (d(ref.size()) == d(r) && ref.size() < r)) r = ref.size();
    }
    const double bp = c > static_cast<double>(r) ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);
    return bp * static_cast<double>(clipped) / c;
}

inline double bleu1(std::string_view candidate, const std::vector<std::string>& references) {
    std::vector<Tokens> refs;
    refs.reserve(references.size());
    for (const auto& r : references) refs.push_back(tokenize_text(r));
    return bleu1(tokenize_text(candidate), refs);
}

enum class RougeVariant { Rouge1, RougeL };

inline double rouge(const Tokens& candidate, const Tokens& reference, RougeVariant variant) {
    if (candidate.empty() || reference.empty()) return 0.0;
    double overlap = 0.0;
    if (variant == RougeVariant::Rouge1) {
        const auto ref_counts = detail::unigram_counts(reference);
        for (const auto& [w, n] : detail::unigram_counts(candidate)) {
            auto it = ref_counts.find(w);
            if (it != ref_counts.end()) overlap += std::min(n, it->second);
        }
    } else {
        overlap = static_cast<double>(detail::lcs_length(candidate, reference));
    }
    return detail::f1(overlap / static_cast<double>(candidate.size()),
                      overlap / static_cast<double>(reference.size()));
}

inline double rouge(std::string_view candidate, std::string_view reference, RougeVariant variant) {
    return rouge(tokenize_text(candidate), tokenize_text(reference), variant);
}

struct MeteorParams {
    double alpha = 0.9;
    double beta = 3.0;
    double gamma = 0.5;
};

struct MeteorAlignment {
    std::vector<std::pair<std::size_t, std::size_t>> matches;  // (hyp, ref), sorted by hyp
    std::size_t chunks = 0;
};

/// Exact stage then Porter-stem stage. Within a stage, hypothesis words are
/// visited right to left and take the rightmost unused equal reference word.
inline MeteorAlignment meteor_align(const Tokens& hyp, const Tokens& ref) {
    MeteorAlignment a;
    std::vector<bool> hyp_used(hyp.size(), false), ref_used(ref.size(), false);
    auto stage = [&](auto&& key) {
        std::map<std::string, std::vector<std::size_t>> positions;
        for (std::size_t j = 0; j < ref.size(); ++j)
            if (!ref_used[j]) positions[key(ref[j])].push_back(j);
        for (std::size_t i = hyp.size(); i-- > 0;) {
            if (hyp_used[i]) continue;
            auto it = positions.find(key(hyp[i]));
            if (it == positions.end() || it->second.empty()) continue;
            const std::size_t j = it->second.back();
            it->second.pop_back();
            hyp_used[i] = true;
            ref_used[j] = true;
            a.matches.emplace_back(i, j);
        }
    };
    stage([](const std::string& w) { return w; });
    PorterStemmer stemmer;
    stage([&](const std::string& w) { return stemmer.stem(w); });
    std::sort(a.matches.begin(), a.matches.end());
    if (!a.matches.empty()) {
        a.chunks = 1;
        for (std::size_t k = 1; k < a.matches.size(); ++k)
            if (!(a.matches[k].first == a.matches[k - 1].first + 1 &&
                  a.matches[k].second == a.matches[k - 1].second + 1))
                ++a.chunks;
    }
    return a;
}

/// Unigram METEOR. A complete alignment that forms a single chunk has zero
/// fragmentation, so identical token sequences score 1.
inline double meteor(const Tokens& hyp, const Tokens& ref, const MeteorParams& params = {}) {
    if (hyp.empty() || ref.empty()) return 0.0;
    const auto a = meteor_align(hyp, ref);
    const double m = static_cast<double>(a.matches.size());
    if (m == 0.0) return 0.0;
    const double p = m / static_cast<double>(hyp.size());
    const double r = m / static_cast<double>(ref.size());
    const double fmean = p * r / (params.alpha * p + (1.0 - params.alpha) * r);
    const bool whole = a.matches.size() == hyp.size() && a.matches.size() == ref.size() && a.chunks == 1;
    const double frag = whole ? 0.0 : static_cast<double>(a.chunks) / m;
    return fmean * (1.0 - params.gamma * std::pow(frag, params.beta));
}

inline double meteor(std::string_view candidate, std::string_view reference, const MeteorParams& params = {}) {
    return meteor(tokenize_text(candidate), tokenize_text(reference), params);
}

struct PairScores {
    std::string id;
    double bleu1 = 0.0;
    double rouge1 = 0.0;
    double rougeL = 0.0;
    double meteor = 0.0;
};

inline PairScores score_pair(std::string id, std::string_view candidate, std::string_view reference) {
    const auto c = tokenize_text(candidate);
    const auto r = tokenize_text(reference);
    PairScores s;
    s.id = std::move(id);
    s.bleu1 = bleu1(c, {r});
    s.rouge1 = rouge(c, r, RougeVariant::Rouge1);
    s.rougeL = rouge(c, r, RougeVariant::RougeL);
    s.meteor = meteor(c, r);
    return s;
}

/// Corpus-level scores are means of the per-pair scores.
struct MetricReport {
    double bleu1 = 0.0;
    double rouge1 = 0.0;
    double rougeL = 0.0;
    double meteor = 0.0;
    std::vector<PairScores> pairs;

    void add(PairScores s) { pairs.push_back(std::move(s)); }

    void merge(const MetricReport& other) {
        pairs.insert(pairs.end(), other.pairs.begin(), other.pairs.end());
    }

    void finalize() {
        bleu1 = rouge1 = rougeL = meteor = 0.0;
        if (pairs.empty()) return;
        for (const auto& p : pairs) {
            bleu1 += p.bleu1;
            rouge1 += p.rouge1;
            rougeL += p.rougeL;
            meteor += p.meteor;
        }
        const double n = static_cast<double>(pairs.size());
        bleu1 /= n;
        rouge1 /= n;
        rougeL /= n;
        meteor /= n;
    }

    std::string table() const {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-8s %8s %8s %8s %8s\n%-8zu %8.2f %8.2f %8.2f %8.2f\n", "pairs",
                      "BLEU-1", "ROUGE-1", "ROUGE-L", "METEOR", pairs.size(), bleu1 * 100.0,
                      rouge1 * 100.0, rougeL * 100.0, meteor * 100.0);
        return buf;
    }
};

inline nlohmann::json to_json(const MetricReport& r) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : r.pairs)
        pairs.push_back({{"id", p.id}, {"bleu1", p.bleu1}, {"rouge1", p.rouge1}, {"rougeL", p.rougeL},
                         {"meteor", p.meteor}});
    return {{"tokenizer", kTextTokenizerId},
            {"bleu_smoothing", "none"},
            {"meteor_params", {{"stages", {"exact", "porter_stem"}}, {"alpha", 0.9}, {"beta", 3.0}, {"gamma", 0.5}}},
            {"count", r.pairs.size()},
            {"bleu1", r.bleu1},
            {"rouge1", r.rouge1},
            {"rougeL", r.rougeL},
            {"meteor", r.meteor},
            {"pairs", std::move(pairs)}};
}

}  // namespace sensortext
