#pragma once

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sensortext/error.hpp"
#include "sensortext/rng.hpp"
#include "sensortext/timeseries.hpp"

namespace sensortext {

inline constexpr const char* kDataRootEnv = "SENSORTEXT_DATA_ROOT";

struct ChannelSpec {
    std::string id;
    std::string sensor_name;
};

/// Subject partition: either an explicit test list (everyone else trains) or
/// the first N subjects in natural order train and the rest test.
struct SplitRule {
    std::vector<std::string> test_subjects;
    std::optional<std::size_t> train_first_n;
};

/// Numeric ids compare as numbers, everything else lexicographically.
inline bool subject_less(const std::string& a, const std::string& b) {
    auto as_num = [](const std::string& s) -> std::optional<unsigned long long> {
        unsigned long long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
        return v;
    };
    const auto na = as_num(a), nb = as_num(b);
    if (na && nb) return *na != *nb ? *na < *nb : a < b;
    if (na != nb) return na.has_value();
    return a < b;
}

struct DatasetConfig {
    std::string name;
    double native_rate_hz = 0.0;
    double target_rate_hz = 0.0;
    std::vector<ChannelSpec> channels;
    std::vector<std::string> labels;
    std::size_t stage1_min_len = 5;
    std::size_t stage1_max_len = 200;
    std::size_t stage2_window = 0;
    std::size_t stage2_stride = 0;
    SplitRule split;
    double subsample_fraction = 1.0;
    std::uint64_t subsample_seed = 0;
    std::string decimation_filter = "none";

    std::size_t num_classes() const noexcept { return labels.size(); }

    std::size_t decimation_factor() const {
        const double f = native_rate_hz / target_rate_hz;
        const auto k = static_cast<std::size_t>(std::llround(f));
        if (k < 1 || std::abs(f - static_cast<double>(k)) > 1e-9)
            throw ConfigError(name + ": target rate must divide native rate");
        return k;
    }

    std::size_t label_index(const std::string& label) const {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) throw DomainError("unknown label '" + label + "'");
        return static_cast<std::size_t>(it - labels.begin());
    }

    /// "train" or "test" given the full list of subjects present.
    std::string split_of(const std::string& subject, std::vector<std::string> all_subjects = {}) const {
        if (split.train_first_n) {
            std::sort(all_subjects.begin(), all_subjects.end(), subject_less);
            const auto it = std::find(all_subjects.begin(), all_subjects.end(), subject);
            if (it == all_subjects.end()) throw DomainError("subject '" + subject + "' not in subject list");
            return static_cast<std::size_t>(it - all_subjects.begin()) < *split.train_first_n ? "train" : "test";
        }
        return std::find(split.test_subjects.begin(), split.test_subjects.end(), subject) != split.test_subjects.end()
                   ? "test"
                   : "train";
    }

    void validate() const {
        if (name.empty()) throw ConfigError("dataset config: empty name");
        if (!(native_rate_hz > 0.0) || !(target_rate_hz > 0.0)) throw ConfigError(name + ": rates must be positive");
        decimation_factor();
        if (channels.empty()) throw ConfigError(name + ": no channels");
        std::set<std::string> ids;
        for (const auto& c : channels)
            if (c.id.empty() || c.id == "label" || !ids.insert(c.id).second)
                throw ConfigError(name + ": invalid or duplicate channel id '" + c.id + "'");
        std::set<std::string> ls(labels.begin(), labels.end());
        if (labels.empty() || ls.size() != labels.size()) throw ConfigError(name + ": labels must be unique and non-empty");
        if (stage1_min_len < 2 || stage1_min_len > stage1_max_len) throw ConfigError(name + ": bad stage-1 length range");
        if (stage2_window < 1 || stage2_stride < 1) throw ConfigError(name + ": bad stage-2 window");
        if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0))
            throw ConfigError(name + ": subsample_fraction must be in (0, 1]");
    }
};

inline DatasetConfig dataset_config_from_json(const nlohmann::json& j) {
    try {
        DatasetConfig c;
        c.name = j.at("name").get<std::string>();
        c.native_rate_hz = j.at("native_rate_hz").get<double>();
        c.target_rate_hz = j.at("target_rate_hz").get<double>();
        for (const auto& ch : j.at("channels"))
            c.channels.push_back({ch.at("id").get<std::string>(), ch.at("sensor_name").get<std::string>()});
        c.labels = j.at("labels").get<std::vector<std::string>>();
        const auto range = j.at("stage1_len_range").get<std::vector<std::size_t>>();
        if (range.size() != 2) throw ConfigError("stage1_len_range must have two entries");
        c.stage1_min_len = range[0];
        c.stage1_max_len = range[1];
        c.stage2_window = j.at("stage2_window").get<std::size_t>();
        c.stage2_stride = j.at("stage2_stride").get<std::size_t>();
        const auto& s = j.at("split");
        if (s.contains("test_subjects")) c.split.test_subjects = s["test_subjects"].get<std::vector<std::string>>();
        if (s.contains("train_first_n")) c.split.train_first_n = s["train_first_n"].get<std::size_t>();
        c.subsample_fraction = j.value("subsample_fraction", 1.0);
        c.subsample_seed = j.value("subsample_seed", std::uint64_t{0});
        c.decimation_filter = j.value("decimation_filter", std::string("none"));
        c.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("dataset config: ") + e.what());
    }
}

inline nlohmann::json to_json(const DatasetConfig& c) {
    nlohmann::json channels = nlohmann::json::array();
    for (const auto& ch : c.channels) channels.push_back({{"id", ch.id}, {"sensor_name", ch.sensor_name}});
    nlohmann::json split = nlohmann::json::object();
    if (!c.split.test_subjects.empty()) split["test_subjects"] = c.split.test_subjects;
    if (c.split.train_first_n) split["train_first_n"] = *c.split.train_first_n;
    return {{"name", c.name},
            {"native_rate_hz", c.native_rate_hz},
            {"target_rate_hz", c.target_rate_hz},
            {"channels", std::move(channels)},
            {"labels", c.labels},
            {"stage1_len_range", {c.stage1_min_len, c.stage1_max_len}},
            {"stage2_window", c.stage2_window},
            {"stage2_stride", c.stage2_stride},
            {"split", std::move(split)},
            {"subsample_fraction", c.subsample_fraction},
            {"subsample_seed", c.subsample_seed},
            {"decimation_filter", c.decimation_filter}};
}

inline DatasetConfig load_dataset_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return dataset_config_from_json(j);
}

/// One subject's recording: channels in config order plus per-sample labels.
struct SubjectData {
    std::string subject;
    MultiChannelSeries series;
    std::vector<std::size_t> labels;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline bool parse_double(std::string_view s, double& v) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size() && std::isfinite(v);
}

}  // namespace detail

/// Reads a per-subject CSV: header naming channel ids plus a "label" column
/// holding class names. Extra columns are ignored.
inline SubjectData load_subject_csv(const std::filesystem::path& path, const DatasetConfig& cfg,
                                    std::string subject = {}) {
    const std::string file = path.string();
    std::ifstream in(path);
    if (!in) throw ParseError(file, 0, "cannot open file");
    if (subject.empty()) subject = path.stem().string();
    std::string line;
    if (!std::getline(in, line)) throw ParseError(file, 1, "missing header row");
    const auto header = detail::split_csv_line(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col.emplace(header[i], i);
    std::vector<std::size_t> channel_cols;
    for (const auto& ch : cfg.channels) {
        auto it = col.find(ch.id);
        if (it == col.end()) throw ParseError(file, 1, "missing channel column '" + ch.id + "'");
        channel_cols.push_back(it->second);
    }
    const auto label_it = col.find("label");
    if (label_it == col.end()) throw ParseError(file, 1, "missing 'label' column");
    const std::size_t label_col = label_it->second;

    std::vector<std::vector<double>> values(cfg.channels.size());
    std::vector<std::size_t> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError(file, line_no,
                             "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
        for (std::size_t c = 0; c < channel_cols.size(); ++c) {
            double v = 0.0;
            if (!detail::parse_double(cells[channel_cols[c]], v))
                throw ParseError(file, line_no,
                                 "invalid number '" + cells[channel_cols[c]] + "' in column '" + cfg.channels[c].id + "'");
            values[c].push_back(v);
        }
        const auto& label = cells[label_col];
        auto it = std::find(cfg.labels.begin(), cfg.labels.end(), label);
        if (it == cfg.labels.end()) throw ParseError(file, line_no, "unknown label '" + label + "'");
        labels.push_back(static_cast<std::size_t>(it - cfg.labels.begin()));
    }
    if (labels.empty()) throw ParseError(file, line_no, "no data rows");
    std::vector<TimeSeries> channels;
    for (std::size_t c = 0; c < cfg.channels.size(); ++c)
        channels.emplace_back(std::move(values[c]), cfg.native_rate_hz, cfg.channels[c].sensor_name, cfg.channels[c].id);
    return {std::move(subject), MultiChannelSeries(std::move(channels)), std::move(labels)};
}

/// Keeps samples 0, k, 2k, ...; no anti-alias filtering.
inline MultiChannelSeries decimate(const MultiChannelSeries& series, std::size_t factor) {
    if (factor < 1) throw RangeError("decimate: factor must be >= 1");
    if (factor == 1) return series;
    std::vector<TimeSeries> out;
    for (const auto& ch : series.channels()) {
        std::vector<double> v;
        for (std::size_t i = 0; i < ch.size(); i += factor) v.push_back(ch[i]);
        out.emplace_back(std::move(v), ch.sample_rate_hz() / static_cast<double>(factor), ch.sensor_name(), ch.channel_id());
    }
    return MultiChannelSeries(std::move(out));
}

inline SubjectData decimate(const SubjectData& data, std::size_t factor) {
    if (factor < 1) throw RangeError("decimate: factor must be >= 1");
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < data.labels.size(); i += factor) labels.push_back(data.labels[i]);
    return {data.subject, decimate(data.series, factor), std::move(labels)};
}

/// Handle over a directory of per-subject CSV files (`<subject>.csv`).
/// Subjects are loaded on demand, already decimated to the target rate.
class Dataset {
public:
    Dataset(std::filesystem::path root, DatasetConfig cfg) : root_(std::move(root)), cfg_(std::move(cfg)) {
        cfg_.validate();
        std::error_code ec;
        if (!std::filesystem::is_directory(root_, ec)) throw ConfigError("dataset root is not a directory: " + root_.string());
        for (const auto& e : std::filesystem::directory_iterator(root_))
            if (e.is_regular_file() && e.path().extension() == ".csv") subjects_.push_back(e.path().stem().string());
        std::sort(subjects_.begin(), subjects_.end(), subject_less);
        if (subjects_.empty()) throw ConfigError("no <subject>.csv files under " + root_.string());
    }

    const DatasetConfig& config() const noexcept { return cfg_; }
    const std::filesystem::path& root() const noexcept { return root_; }
    const std::vector<std::string>& subjects() const noexcept { return subjects_; }
    std::string split_of(const std::string& subject) const { return cfg_.split_of(subject, subjects_); }

    SubjectData load_native(const std::string& subject) const {
        return load_subject_csv(root_ / (subject + ".csv"), cfg_, subject);
    }

    SubjectData load(const std::string& subject) const {
        return decimate(load_native(subject), cfg_.decimation_factor());
    }

private:
    std::filesystem::path root_;
    DatasetConfig cfg_;
    std::vector<std::string> subjects_;
};

inline Dataset load_dataset(const std::filesystem::path& root, const DatasetConfig& cfg) { return Dataset(root, cfg); }

/// Data root from an explicit value, else the environment.
inline std::filesystem::path resolve_data_root(const std::string& explicit_root) {
    if (!explicit_root.empty()) return explicit_root;
    if (const char* env = std::getenv(kDataRootEnv); env && *env) return env;
    throw ConfigError(std::string("no data root given (pass --data or set ") + kDataRootEnv + ")");
}

struct WindowedExample {
    std::string dataset;
    std::string subject;
    std::string split;
    std::size_t label = 0;
    std::string label_name;
    MultiChannelSeries window;
    std::vector<ChannelStats> stats;
    std::size_t window_index = 0;
    std::size_t start_index = 0;

    std::string id() const {
        char idx[32];
        std::snprintf(idx, sizeof idx, "%08zu", window_index);
        return dataset + "/" + subject + "/w" + idx;
    }

    friend bool operator==(const WindowedExample&, const WindowedExample&) = default;
};

/// Most frequent label; ties go to the smaller class index.
inline std::size_t majority_label(std::span<const std::size_t> labels, std::size_t num_classes) {
    if (labels.empty()) throw DomainError("majority_label: empty window");
    std::vector<std::size_t> counts(num_classes, 0);
    for (auto l : labels) {
        if (l >= num_classes) throw RangeError("majority_label: label out of range");
        ++counts[l];
    }
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

/// Stage-2 windows for one subject (input already at the target rate).
/// With subsample_fraction < 1 each window is kept by an independent draw
/// seeded from (subsample_seed, dataset, subject).
inline std::vector<WindowedExample> emit_stage2(const SubjectData& data, const DatasetConfig& cfg,
                                                const std::string& split = "train") {
    std::vector<WindowedExample> out;
    SplitMix64 keep(derive_seed(cfg.subsample_seed, cfg.name + "/" + data.subject, "stage2-subsample"));
    const auto starts = window_starts(data.series.length(), cfg.stage2_window, cfg.stage2_stride);
    for (std::size_t w = 0; w < starts.size(); ++w) {
        const bool kept = keep.unit() < cfg.subsample_fraction;
        if (!kept) continue;
        const std::size_t s = starts[w];
        WindowedExample ex{cfg.name, data.subject, split, 0, {}, data.series.slice(s, cfg.stage2_window), {}, w, s};
        ex.label = majority_label(std::span(data.labels).subspan(s, cfg.stage2_window), cfg.num_classes());
        ex.label_name = cfg.labels[ex.label];
        for (const auto& ch : ex.window.channels()) ex.stats.push_back(channel_stats(ch));
        out.push_back(std::move(ex));
    }
    return out;
}

inline constexpr int kStage2SchemaVersion = 1;

inline nlohmann::json to_json(const WindowedExample& ex) {
    nlohmann::json window = nlohmann::json::array(), stats = nlohmann::json::array(), ids = nlohmann::json::array(),
                   names = nlohmann::json::array();
    for (const auto& ch : ex.window.channels()) {
        window.push_back(std::vector<double>(ch.values().begin(), ch.values().end()));
        ids.push_back(ch.channel_id());
        names.push_back(ch.sensor_name());
    }
    for (const auto& s : ex.stats) stats.push_back({{"mean", s.mean}, {"variance", s.variance}});
    return {{"schema_version", kStage2SchemaVersion},
            {"id", ex.id()},
            {"dataset", ex.dataset},
            {"subject", ex.subject},
            {"split", ex.split},
            {"label", ex.label},
            {"label_name", ex.label_name},
            {"window_index", ex.window_index},
            {"start_index", ex.start_index},
            {"sample_rate_hz", ex.window.sample_rate_hz()},
            {"channel_ids", std::move(ids)},
            {"sensor_names", std::move(names)},
            {"stats_source", "raw"},
            {"stats", std::move(stats)},
            {"window", std::move(window)}};
}

inline WindowedExample windowed_example_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema_version").get<int>() != kStage2SchemaVersion)
            throw FormatError("unsupported stage-2 schema_version");
        const auto rate = j.at("sample_rate_hz").get<double>();
        const auto ids = j.at("channel_ids").get<std::vector<std::string>>();
        const auto names = j.at("sensor_names").get<std::vector<std::string>>();
        const auto& win = j.at("window");
        if (win.size() != ids.size() || names.size() != ids.size())
            throw FormatError("stage-2 record: channel count mismatch");
        std::vector<TimeSeries> channels;
        for (std::size_t c = 0; c < ids.size(); ++c)
            channels.emplace_back(win[c].get<std::vector<double>>(), rate, names[c], ids[c]);
        WindowedExample ex{j.at("dataset").get<std::string>(),
                           j.at("subject").get<std::string>(),
                           j.value("split", std::string("train")),
                           j.at("label").get<std::size_t>(),
                           j.value("label_name", std::string()),
                           MultiChannelSeries(std::move(channels)),
                           {},
                           j.at("window_index").get<std::size_t>(),
                           j.value("start_index", std::size_t{0})};
        for (const auto& s : j.at("stats")) ex.stats.push_back({s.at("mean").get<double>(), s.at("variance").get<double>()});
        return ex;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("stage-2 record: ") + e.what());
    }
}

}  // namespace sensortext
