#pragma once

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sensortext/classification.hpp"
#include "sensortext/dataset.hpp"
#include "sensortext/judge.hpp"
#include "sensortext/jsonl.hpp"
#include "sensortext/manifest.hpp"
#include "sensortext/parallel.hpp"
#include "sensortext/qa_forge.hpp"
#include "sensortext/text_metrics.hpp"
#include "sensortext/tokenizer.hpp"
#include "sensortext/verifier.hpp"

namespace sensortext::cli {

using nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kRuntime = 1, kUsage = 2 };

class UsageError : public Error {
public:
    using Error::Error;
};

enum class Kind { Path, String, U64, Double, Bool, Paths };

struct OptSpec {
    std::string name;
    Kind kind;
    json fallback;
    std::string help;
    bool required = false;
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<OptSpec> options;
};

inline const std::vector<CommandSpec>& command_specs() {
    static const std::vector<CommandSpec> specs = {
        {"forge-stage1",
         "Generate trend question-answer pairs from per-subject CSV data",
         {{"config", Kind::Path, nullptr, "dataset config JSON", true},
          {"templates", Kind::Path, nullptr, "template bank JSON (default: built-in bank)"},
          {"data", Kind::Path, nullptr, "dataset root (default: $SENSORTEXT_DATA_ROOT)"},
          {"seed", Kind::U64, 0, "master seed"},
          {"out", Kind::Path, nullptr, "output JSONL", true},
          {"workers", Kind::U64, 1, "parallel workers (output is identical for any value)"},
          {"split", Kind::String, "all", "subjects to use: all, train or test"},
          {"trend-ratio", Kind::Double, 0.5, "fraction of trend (vs summary) questions"},
          {"normalize", Kind::Bool, true, "instance-normalize segments (true/false)"},
          {"epsilon", Kind::Double, 0.0, "steady threshold on consecutive differences"},
          {"data-name", Kind::String, "sensor data", "noun used for the data in answers"},
          {"min-len", Kind::U64, nullptr, "minimum segment length (default: config)"},
          {"max-len", Kind::U64, nullptr, "maximum segment length (default: config)"},
          {"subsample", Kind::Double, 1.0, "fraction of segments kept"}}},
        {"emit-stage2",
         "Window per-subject CSV data into labelled classification examples",
         {{"config", Kind::Path, nullptr, "dataset config JSON", true},
          {"data", Kind::Path, nullptr, "dataset root (default: $SENSORTEXT_DATA_ROOT)"},
          {"seed", Kind::U64, nullptr, "subsample seed (default: config subsample_seed)"},
          {"out", Kind::Path, nullptr, "output JSONL", true},
          {"workers", Kind::U64, 1, "parallel workers (output is identical for any value)"},
          {"split", Kind::String, "all", "subjects to use: all, train or test"},
          {"subsample", Kind::Double, nullptr, "fraction of windows kept (default: config)"}}},
        {"tokenize",
         "Mean-scale and quantize the readings of a stage-1 or stage-2 corpus",
         {{"in", Kind::Path, nullptr, "input corpus JSONL", true},
          {"config", Kind::Path, nullptr, "quantizer config JSON (default: 4094 uniform bins on [-15, 15])"},
          {"seed", Kind::U64, 0, "unused; recorded in the manifest"},
          {"out", Kind::Path, nullptr, "output JSONL", true}}},
        {"metrics",
         "Score predictions against a corpus (text overlap or classification)",
         {{"truth", Kind::Path, nullptr, "ground-truth corpus JSONL", true},
          {"pred", Kind::Path, nullptr, "predictions JSONL ({id, generated_text} or {id, pred_label})", true},
          {"config", Kind::Path, nullptr, "dataset config JSON (class names for classification)"},
          {"task", Kind::String, "auto", "auto, text or classification"},
          {"seed", Kind::U64, 0, "unused; recorded in the manifest"},
          {"out", Kind::Path, nullptr, "output report JSON", true}}},
        {"verify",
         "Check generated trend descriptions against the true trend reports",
         {{"truth", Kind::Path, nullptr, "stage-1 corpus JSONL", true},
          {"pred", Kind::Path, nullptr, "predictions JSONL ({id, generated_text})", true},
          {"config", Kind::Path, nullptr, "unused; recorded in the manifest"},
          {"seed", Kind::U64, 0, "unused; recorded in the manifest"},
          {"out", Kind::Path, nullptr, "output verdict JSONL", true}}},
        {"judge",
         "Score generated descriptions with a remote chat model",
         {{"truth", Kind::Path, nullptr, "stage-1 corpus JSONL", true},
          {"pred", Kind::Path, nullptr, "predictions JSONL ({id, generated_text})", true},
          {"config", Kind::Path, nullptr, "judge config JSON"},
          {"cassette", Kind::Path, nullptr, "replay recorded responses instead of calling the endpoint"},
          {"record", Kind::Path, nullptr, "append live exchanges to this cassette"},
          {"concurrency", Kind::U64, nullptr, "requests in flight (default: config)"},
          {"seed", Kind::U64, 0, "unused; recorded in the manifest"},
          {"out", Kind::Path, nullptr, "output JSONL", true}}},
        {"report",
         "Combine metric, verdict and judge outputs into one table",
         {{"metrics", Kind::Paths, json::array(), "metric report JSON files"},
          {"verdicts", Kind::Paths, json::array(), "verdict JSONL files"},
          {"judge", Kind::Paths, json::array(), "judge JSONL files"},
          {"config", Kind::Path, nullptr, "unused; recorded in the manifest"},
          {"seed", Kind::U64, 0, "unused; recorded in the manifest"},
          {"out", Kind::Path, nullptr, "output summary JSON", true}}},
    };
    return specs;
}

inline json convert(const OptSpec& spec, const std::vector<std::string>& raw) {
    const std::string flag = "--" + spec.name;
    if (spec.kind == Kind::Paths) {
        json a = json::array();
        for (const auto& r : raw) a.push_back(fs::absolute(r).lexically_normal().string());
        return a;
    }
    const std::string& s = raw.back();
    switch (spec.kind) {
        case Kind::Path: return fs::absolute(s).lexically_normal().string();
        case Kind::String: return s;
        case Kind::U64: {
            std::uint64_t v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size()) throw UsageError(flag + " expects a non-negative integer");
            return v;
        }
        case Kind::Double: {
            double v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size()) throw UsageError(flag + " expects a number");
            return v;
        }
        case Kind::Bool:
            if (s == "true" || s == "1" || s == "yes") return true;
            if (s == "false" || s == "0" || s == "no") return false;
            throw UsageError(flag + " expects true or false");
        default: break;
    }
    return nullptr;
}

/// Resolved options plus helpers for typed access.
class Options {
public:
    explicit Options(json j) : j_(std::move(j)) {}
    const json& raw() const noexcept { return j_; }
    bool has(const std::string& k) const { return j_.contains(k) && !j_[k].is_null(); }
    std::string str(const std::string& k) const { return has(k) ? j_[k].get<std::string>() : std::string(); }
    std::uint64_t u64(const std::string& k) const { return j_.at(k).get<std::uint64_t>(); }
    double num(const std::string& k) const { return j_.at(k).get<double>(); }
    bool flag(const std::string& k) const { return j_.at(k).get<bool>(); }
    std::vector<std::string> paths(const std::string& k) const {
        return has(k) ? j_[k].get<std::vector<std::string>>() : std::vector<std::string>{};
    }

private:
    json j_;
};

struct Context {
    std::ostream& out;
    std::ostream& err;
};

// ---------------------------------------------------------------- helpers

inline std::vector<std::string> selected_subjects(const Dataset& ds, const std::string& split) {
    if (split != "all" && split != "train" && split != "test") throw UsageError("--split must be all, train or test");
    std::vector<std::string> out;
    for (const auto& s : ds.subjects())
        if (split == "all" || ds.split_of(s) == split) out.push_back(s);
    return out;
}

inline void record_dataset_inputs(RunManifest& m, const fs::path& root, const std::vector<std::string>& subjects) {
    for (const auto& s : subjects) m.add_input("data/" + s + ".csv", root / (s + ".csv"));
}

inline json read_json_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open " + p.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(p.string() + ": " + e.what());
    }
}

/// Predictions keyed by id; duplicates are an error.
inline std::map<std::string, json> load_predictions(const fs::path& p) {
    std::map<std::string, json> preds;
    for_each_jsonl(p, [&](const json& j, std::size_t line) {
        const auto id = j.at("id").get<std::string>();
        if (!preds.emplace(id, j).second) throw ParseError(p.string(), line, "duplicate prediction id '" + id + "'");
    });
    return preds;
}

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// ---------------------------------------------------------------- commands

inline void run_forge(const Options& o, RunManifest& m, Context& ctx) {
    const auto cfg = load_dataset_config(o.str("config"));
    const TemplateBank bank = o.has("templates") ? TemplateBank::load(o.str("templates")) : TemplateBank::defaults();
    const fs::path root = resolve_data_root(o.str("data"));
    const Dataset ds(root, cfg);
    GenerationConfig gen;
    gen.min_len = o.has("min-len") ? o.u64("min-len") : cfg.stage1_min_len;
    gen.max_len = o.has("max-len") ? o.u64("max-len") : cfg.stage1_max_len;
    gen.trend_question_ratio = o.num("trend-ratio");
    gen.normalize = o.flag("normalize");
    gen.epsilon = o.num("epsilon");
    gen.data_name = o.str("data-name");
    gen.subsample_fraction = o.num("subsample");
    if (!(gen.trend_question_ratio >= 0.0 && gen.trend_question_ratio <= 1.0)) throw UsageError("--trend-ratio must be in [0, 1]");
    if (!(gen.subsample_fraction > 0.0 && gen.subsample_fraction <= 1.0)) throw UsageError("--subsample must be in (0, 1]");
    const auto subjects = selected_subjects(ds, o.str("split"));
    const std::uint64_t seed = o.u64("seed");
    const std::size_t workers = std::max<std::uint64_t>(1, o.u64("workers"));

    JsonlWriter writer{fs::path(o.str("out"))};
    const std::size_t nch = cfg.channels.size();
    for (std::size_t b = 0; b < subjects.size(); b += workers) {
        const std::size_t batch = std::min(workers, subjects.size() - b);
        const auto loaded = parallel_map<std::shared_ptr<SubjectData>>(batch, workers, [&](std::size_t i) {
            return std::make_shared<SubjectData>(ds.load(subjects[b + i]));
        });
        const auto lines = parallel_map<std::vector<json>>(batch * nch, workers, [&](std::size_t t) {
            const auto& data = *loaded[t / nch];
            const auto& channel = data.series[t % nch];
            const auto pairs = forge_channel(channel, bank, gen, cfg.name, data.subject,
                                             derive_seed(seed, data.subject, channel.channel_id()));
            std::vector<json> out;
            out.reserve(pairs.size());
            for (const auto& qa : pairs) {
                auto j = to_json(qa);
                j["split"] = ds.split_of(data.subject);
                out.push_back(std::move(j));
            }
            return out;
        });
        for (const auto& chunk : lines)
            for (const auto& j : chunk) writer.write(j);
    }
    writer.flush();
    m.add_input("config", o.str("config"));
    if (o.has("templates")) m.add_input("templates", o.str("templates"));
    record_dataset_inputs(m, root, subjects);
    ctx.out << "forge-stage1: wrote " << writer.count() << " QA pairs from " << subjects.size() << " subjects to "
            << o.str("out") << "\n";
}

inline void run_stage2(const Options& o, RunManifest& m, Context& ctx) {
    auto cfg = load_dataset_config(o.str("config"));
    if (o.has("seed")) cfg.subsample_seed = o.u64("seed");
    if (o.has("subsample")) cfg.subsample_fraction = o.num("subsample");
    cfg.validate();
    const fs::path root = resolve_data_root(o.str("data"));
    const Dataset ds(root, cfg);
    const auto subjects = selected_subjects(ds, o.str("split"));
    const std::size_t workers = std::max<std::uint64_t>(1, o.u64("workers"));
    JsonlWriter writer{fs::path(o.str("out"))};
    for (std::size_t b = 0; b < subjects.size(); b += workers) {
        const std::size_t batch = std::min(workers, subjects.size() - b);
        const auto lines = parallel_map<std::vector<json>>(batch, workers, [&](std::size_t i) {
            const auto& s = subjects[b + i];
            std::vector<json> out;
            for (const auto& ex : emit_stage2(ds.load(s), cfg, ds.split_of(s))) out.push_back(to_json(ex));
            return out;
        });
        for (const auto& chunk : lines)
            for (const auto& j : chunk) writer.write(j);
    }
    writer.flush();
    m.add_input("config", o.str("config"));
    record_dataset_inputs(m, root, subjects);
    ctx.out << "emit-stage2: wrote " << writer.count() << " windows from " << subjects.size() << " subjects to "
            << o.str("out") << "\n";
}

inline void run_tokenize(const Options& o, RunManifest& m, Context& ctx) {
    const QuantizerConfig q = o.has("config") ? QuantizerConfig::from_json(read_json_file(o.str("config")))
                                              : QuantizerConfig::uniform();
    JsonlWriter writer{fs::path(o.str("out"))};
    for_each_jsonl(fs::path(o.str("in")), [&](const json& j, std::size_t) {
        json rec = {{"id", j.at("id")}, {"config_id", q.config_id()}};
        if (j.contains("readings")) {
            const TimeSeries ts(j["readings"].get<std::vector<double>>(), j.at("sample_rate_hz").get<double>());
            rec.update(to_json(tokenize(ts, q)));
        } else if (j.contains("window")) {
            json channels = json::array();
            const auto ids = j.value("channel_ids", std::vector<std::string>{});
            for (std::size_t c = 0; c < j["window"].size(); ++c) {
                const TimeSeries ts(j["window"][c].get<std::vector<double>>(), j.at("sample_rate_hz").get<double>());
                auto t = to_json(tokenize(ts, q));
                if (c < ids.size()) t["channel_id"] = ids[c];
                channels.push_back(std::move(t));
            }
            rec["channels"] = std::move(channels);
        } else {
            throw FormatError("record has neither 'readings' nor 'window'");
        }
        writer.write(rec);
    });
    writer.flush();
    m.add_input("in", o.str("in"));
    if (o.has("config")) m.add_input("config", o.str("config"));
    ctx.out << "tokenize: wrote " << writer.count() << " token records (quantizer " << q.config_id() << ")\n";
}

inline void run_metrics(const Options& o, RunManifest& m, Context& ctx) {
    const auto preds = load_predictions(o.str("pred"));
    std::string task = o.str("task");
    if (task != "auto" && task != "text" && task != "classification")
        throw UsageError("--task must be auto, text or classification");
    std::optional<DatasetConfig> dcfg;
    if (o.has("config")) dcfg = load_dataset_config(o.str("config"));

    MetricReport text;
    std::vector<std::size_t> gold, pred;
    std::vector<std::string> names = dcfg ? dcfg->labels : std::vector<std::string>{};
    std::size_t missing = 0, matched = 0;
    auto label_of = [&](const json& v) -> std::size_t {
        if (v.is_number_integer()) return v.get<std::size_t>();
        const auto s = v.get<std::string>();
        auto it = std::find(names.begin(), names.end(), s);
        if (it == names.end()) throw FormatError("unknown class name '" + s + "'");
        return static_cast<std::size_t>(it - names.begin());
    };
    for_each_jsonl(fs::path(o.str("truth")), [&](const json& j, std::size_t) {
        const auto id = j.at("id").get<std::string>();
        auto it = preds.find(id);
        if (it == preds.end()) {
            ++missing;
            return;
        }
        ++matched;
        const json& p = it->second;
        if (task == "auto") task = p.contains("pred_label") ? "classification" : "text";
        if (task == "text") {
            text.add(score_pair(id, p.at("generated_text").get<std::string>(), j.at("answer").get<std::string>()));
        } else {
            if (!dcfg && j.contains("label_name")) {
                const auto l = j.at("label").get<std::size_t>();
                if (names.size() <= l) names.resize(l + 1);
                names[l] = j["label_name"].get<std::string>();
            }
            gold.push_back(j.at("label").get<std::size_t>());
            pred.push_back(label_of(p.at("pred_label")));
        }
    });
    json report;
    if (task == "classification") {
        std::size_t c = dcfg ? dcfg->num_classes() : 0;
        for (auto v : gold) c = std::max(c, v + 1);
        for (auto v : pred) c = std::max(c, v + 1);
        const auto r = classification_report(pred, gold, c);
        report = to_json(r, names);
        ctx.out << "accuracy  f1_macro  precision  recall   n\n"
                << fmt2(r.accuracy * 100) << "     " << fmt2(r.f1_macro * 100) << "     " << fmt2(r.precision_macro * 100)
                << "      " << fmt2(r.recall_macro * 100) << "   " << r.total << "\n";
    } else {
        text.finalize();
        report = to_json(text);
        ctx.out << text.table();
    }
    report["task"] = task == "auto" ? "text" : task;
    report["matched"] = matched;
    report["missing_predictions"] = missing;
    report["unmatched_predictions"] = preds.size() - matched;
    std::ofstream(o.str("out"), std::ios::binary) << report.dump(2) << '\n';
    m.add_input("truth", o.str("truth"));
    m.add_input("pred", o.str("pred"));
    if (o.has("config")) m.add_input("config", o.str("config"));
}

inline void run_verify(const Options& o, RunManifest& m, Context& ctx) {
    const auto preds = load_predictions(o.str("pred"));
    JsonlWriter writer{fs::path(o.str("out"))};
    std::array<std::size_t, 6> hist{};
    std::size_t faithful = 0, missing = 0, n = 0;
    double total = 0;
    for_each_jsonl(fs::path(o.str("truth")), [&](const json& j, std::size_t) {
        const auto id = j.at("id").get<std::string>();
        auto it = preds.find(id);
        if (it == preds.end()) {
            ++missing;
            return;
        }
        const auto truth = trend_report_from_json(j.at("report"));
        const auto v = verify_trend_text(it->second.at("generated_text").get<std::string>(), truth);
        json rec = to_json(v);
        rec["id"] = id;
        rec["line"] = v.line();
        writer.write(rec);
        ++hist[static_cast<std::size_t>(v.score)];
        faithful += v.faithful ? 1 : 0;
        total += v.score;
        ++n;
    });
    writer.flush();
    ctx.out << "pairs  mean_score  faithful%  s1  s2  s3  s4  s5\n"
            << n << "  " << fmt2(n ? total / static_cast<double>(n) : 0.0) << "  "
            << fmt2(n ? 100.0 * static_cast<double>(faithful) / static_cast<double>(n) : 0.0);
    for (int s = 1; s <= 5; ++s) ctx.out << "  " << hist[static_cast<std::size_t>(s)];
    ctx.out << "\n";
    if (missing) ctx.err << "verify: " << missing << " truth records had no prediction\n";
    m.add_input("truth", o.str("truth"));
    m.add_input("pred", o.str("pred"));
}

inline void run_judge(const Options& o, RunManifest& m, Context& ctx) {
    JudgeConfig cfg = o.has("config") ? judge_config_from_json(read_json_file(o.str("config"))) : JudgeConfig{};
    if (o.has("concurrency")) cfg.max_concurrency = o.u64("concurrency");
    cfg.validate();
    const auto preds = load_predictions(o.str("pred"));
    std::vector<JudgePair> pairs;
    for_each_jsonl(fs::path(o.str("truth")), [&](const json& j, std::size_t) {
        const auto id = j.at("id").get<std::string>();
        auto it = preds.find(id);
        if (it == preds.end()) return;
        pairs.push_back({id, it->second.at("generated_text").get<std::string>(), j.at("answer").get<std::string>()});
    });
    std::unique_ptr<Transport> base;
    if (o.has("cassette"))
        base = std::make_unique<CassetteTransport>(o.str("cassette"));
    else
        base = HttpTransport::from_env(cfg);
    std::unique_ptr<RecordingTransport> rec;
    Transport* transport = base.get();
    if (o.has("record")) {
        rec = std::make_unique<RecordingTransport>(*base, o.str("record"));
        transport = rec.get();
    }
    const auto outcomes = judge_batch(pairs, cfg, *transport);
    JsonlWriter writer{fs::path(o.str("out"))};
    std::size_t ok = 0;
    double total = 0;
    for (const auto& oc : outcomes) {
        writer.write(to_json(oc, cfg));
        if (oc.result) {
            ++ok;
            total += oc.result->score;
        }
    }
    writer.flush();
    ctx.out << "pairs  scored  errors  mean_score\n"
            << outcomes.size() << "  " << ok << "  " << outcomes.size() - ok << "  "
            << fmt2(ok ? total / static_cast<double>(ok) : 0.0) << "\n";
    m.add_input("truth", o.str("truth"));
    m.add_input("pred", o.str("pred"));
    if (o.has("config")) m.add_input("config", o.str("config"));
    if (o.has("cassette")) m.add_input("cassette", o.str("cassette"));
    m.options["judge_config"] = to_json(cfg);
    if (ok != outcomes.size()) throw Error(std::to_string(outcomes.size() - ok) + " judge requests failed; see " + o.str("out"));
}

inline void run_report(const Options& o, RunManifest& m, Context& ctx) {
    json summary = {{"metrics", json::array()}, {"verdicts", json::array()}, {"judge", json::array()}};
    std::ostringstream table;
    table << std::left;
    auto row = [&](const std::string& source, const std::string& k, const std::string& v) {
        table << std::setw(40) << source << std::setw(16) << k << v << "\n";
    };
    std::size_t k = 0;
    for (const auto& p : o.paths("metrics")) {
        const auto j = read_json_file(p);
        json s = {{"path", p}, {"task", j.value("task", "text")}};
        for (const char* key : {"bleu1", "rouge1", "rougeL", "meteor", "accuracy", "f1_macro"})
            if (j.contains(key)) {
                s[key] = j[key];
                row(fs::path(p).filename().string(), key, fmt2(j[key].get<double>() * 100.0));
            }
        summary["metrics"].push_back(s);
        m.add_input("metrics/" + std::to_string(k++), p);
    }
    auto score_file = [&](const std::string& p, const char* section) {
        std::size_t n = 0, scored = 0, faithful = 0;
        double total = 0;
        for_each_jsonl(fs::path(p), [&](const json& j, std::size_t) {
            ++n;
            if (j.contains("score") && j["score"].is_number_integer()) {
                ++scored;
                total += j["score"].get<double>();
            }
            if (j.value("faithful", false)) ++faithful;
        });
        const double mean = scored ? total / static_cast<double>(scored) : 0.0;
        json s = {{"path", p}, {"records", n}, {"scored", scored}, {"mean_score", mean}};
        if (std::string(section) == "verdicts") s["faithful"] = faithful;
        summary[section].push_back(s);
        row(fs::path(p).filename().string(), "mean_score", fmt2(mean) + " (" + std::to_string(scored) + "/" + std::to_string(n) + ")");
        m.add_input(std::string(section) + "/" + std::to_string(k++), p);
    };
    for (const auto& p : o.paths("verdicts")) score_file(p, "verdicts");
    for (const auto& p : o.paths("judge")) score_file(p, "judge");
    std::ofstream(o.str("out"), std::ios::binary) << summary.dump(2) << '\n';
    ctx.out << table.str();
}

// ---------------------------------------------------------------- driver

inline void print_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
    err << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump() << "\n";
}

/// Entry point shared by the binary and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"sensortext: sensor trend QA corpora, tokenization and evaluation", "sensortext"};
    app.set_version_flag("--version", std::string(SENSORTEXT_VERSION));
    app.require_subcommand(1);
    std::map<std::string, std::map<std::string, std::vector<std::string>>> raw;
    std::map<std::string, std::string> from_manifest;
    std::map<std::string, CLI::App*> subs;
    for (const auto& spec : command_specs()) {
        auto* sub = app.add_subcommand(spec.name, spec.help);
        subs[spec.name] = sub;
        for (const auto& opt : spec.options) {
            auto& slot = raw[spec.name][opt.name];
            auto* o = sub->add_option("--" + opt.name, slot, opt.help + (opt.required ? " [required]" : ""));
            if (opt.kind == Kind::Paths) o->expected(1, -1);
            else o->expected(1);
        }
        sub->add_option("--from-manifest", from_manifest[spec.name], "rerun from a manifest (explicit flags override)");
    }
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << SENSORTEXT_VERSION << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << app.help();
        print_error(err, "usage", e.what(), kUsage);
        return kUsage;
    }
    std::string name;
    for (const auto& [n, sub] : subs)
        if (sub->parsed()) name = n;
    const auto& spec = *std::find_if(command_specs().begin(), command_specs().end(),
                                     [&](const CommandSpec& s) { return s.name == name; });
    Context ctx{out, err};
    try {
        json opts = json::object();
        for (const auto& o : spec.options) opts[o.name] = o.fallback;
        if (!from_manifest[name].empty()) {
            const auto man = RunManifest::load(from_manifest[name]);
            if (man.subcommand != name)
                throw UsageError("manifest was written by '" + man.subcommand + "', not '" + name + "'");
            for (const auto& o : spec.options)
                if (man.options.contains(o.name)) opts[o.name] = man.options[o.name];
        }
        for (const auto& o : spec.options) {
            const auto& r = raw[name][o.name];
            if (!r.empty()) opts[o.name] = convert(o, r);
        }
        for (const auto& o : spec.options)
            if (o.required && opts[o.name].is_null()) throw UsageError("--" + o.name + " is required");
        const Options options(opts);
        RunManifest manifest;
        manifest.subcommand = name;
        manifest.options = opts;
        if (name == "forge-stage1") run_forge(options, manifest, ctx);
        else if (name == "emit-stage2") run_stage2(options, manifest, ctx);
        else if (name == "tokenize") run_tokenize(options, manifest, ctx);
        else if (name == "metrics") run_metrics(options, manifest, ctx);
        else if (name == "verify") run_verify(options, manifest, ctx);
        else if (name == "judge") run_judge(options, manifest, ctx);
        else run_report(options, manifest, ctx);
        manifest.add_output("out", options.str("out"));
        manifest.timestamp = utc_timestamp();
        manifest.write(manifest_path_for(options.str("out")));
        return kOk;
    } catch (const UsageError& e) {
        err << subs[name]->help();
        print_error(err, "usage", e.what(), kUsage);
        return kUsage;
    } catch (const ParseError& e) {
        print_error(err, "parse_error", e.what(), kRuntime);
    } catch (const ConfigError& e) {
        print_error(err, "config_error", e.what(), kRuntime);
    } catch (const HttpError& e) {
        print_error(err, "http_error", e.what(), kRuntime);
    } catch (const std::exception& e) {
        print_error(err, "runtime_error", e.what(), kRuntime);
    }
    return kRuntime;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace sensortext::cli
