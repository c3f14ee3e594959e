#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "sensortext/error.hpp"
#include "sensortext/format.hpp"
#include "sensortext/jsonl.hpp"
#include "sensortext/rng.hpp"
#include "sensortext/timeseries.hpp"

namespace sensortext {

inline constexpr const char* kJudgeApiKeyEnv = "SENSORTEXT_JUDGE_API_KEY";

struct JudgeConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4o";
    std::string api_key_env = kJudgeApiKeyEnv;
    double timeout_seconds = 60.0;
    int max_retries = 3;
    double temperature = 0.0;
    std::size_t max_concurrency = 4;
    double backoff_initial_seconds = 1.0;
    double backoff_factor = 2.0;

    void validate() const {
        if (!(timeout_seconds > 0.0)) throw ConfigError("judge: timeout must be > 0");
        if (max_retries < 0) throw ConfigError("judge: max_retries must be >= 0");
        if (max_concurrency < 1) throw ConfigError("judge: max_concurrency must be >= 1");
        if (endpoint.empty() || model.empty()) throw ConfigError("judge: endpoint and model are required");
    }
};

inline JudgeConfig judge_config_from_json(const nlohmann::json& j) {
    JudgeConfig c;
    try {
        c.endpoint = j.value("endpoint", c.endpoint);
        c.model = j.value("model", c.model);
        c.api_key_env = j.value("api_key_env", c.api_key_env);
        c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
        c.max_retries = j.value("max_retries", c.max_retries);
        c.temperature = j.value("temperature", c.temperature);
        c.max_concurrency = j.value("max_concurrency", c.max_concurrency);
        c.backoff_initial_seconds = j.value("backoff_initial_seconds", c.backoff_initial_seconds);
        c.backoff_factor = j.value("backoff_factor", c.backoff_factor);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("judge config: ") + e.what());
    }
    c.validate();
    return c;
}

inline nlohmann::json to_json(const JudgeConfig& c) {
    return {{"endpoint", c.endpoint},
            {"model", c.model},
            {"api_key_env", c.api_key_env},
            {"timeout_seconds", c.timeout_seconds},
            {"max_retries", c.max_retries},
            {"temperature", c.temperature},
            {"max_concurrency", c.max_concurrency},
            {"backoff_initial_seconds", c.backoff_initial_seconds},
            {"backoff_factor", c.backoff_factor}};
}

inline std::string build_eval_prompt(const std::string& model_output, const std::string& ground_truth) {
    if (model_output.empty()) throw DomainError("build_eval_prompt: empty model output");
    if (ground_truth.empty()) throw DomainError("build_eval_prompt: empty ground truth");
    return "Please evaluate the model-generated trend descriptions against the ground truth. Rate each pair based "
           "on the degree of accuracy, using a scale from 1 to 5, where 1 represents the lowest correctness and 5 "
           "represents the highest. Deduct 1 point for minor errors in the trend description, and 2-3 points for "
           "moderate errors.\n"
           "\n"
           "Provide your score (1-5) and a brief explanation in the format: \"score#reason\" (e.g., 4#The "
           "description of trend changes slightly differs from the ground truth).\n"
           "\n"
           "Now, please proceed to score the following:\n"
           "Model: " +
           model_output +
           "\n"
           "Human: " +
           ground_truth +
           "\n"
           "Output:";
}

/// Readings as "[v1, v2, ...]". Pass the original text tokens to keep the
/// exact precision they were read with.
inline std::string serialize_readings(const std::vector<std::string>& tokens) {
    std::string s = "[";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) s += ", ";
        s += tokens[i];
    }
    return s + "]";
}

inline std::string serialize_readings(std::span<const double> values) {
    std::vector<std::string> tokens;
    tokens.reserve(values.size());
    for (double v : values) tokens.push_back(shortest_repr(v));
    return serialize_readings(tokens);
}

inline std::string build_gen_prompt(std::size_t n_points, double sample_rate_hz, const std::string& readings,
                                    const std::string& exemplar) {
    if (n_points == 0) throw DomainError("build_gen_prompt: empty series");
    return "A dialogue between a curious researcher and an AI assistant. The AI analyzes a sensor time-series "
           "dataset (" +
           std::to_string(n_points) + " points, " + format_rate(sample_rate_hz) +
           "Hz sampling rate) to answer specific questions.\n"
           "\n"
           "Please output your answer in the format like this example:\n" +
           exemplar +
           "\n"
           "\n"
           "Now, analyze the following:\n"
           "Input: " +
           readings +
           " How trends in the given sensor data evolve?\n"
           "Output:";
}

inline std::string build_gen_prompt(const TimeSeries& readings, const std::string& exemplar) {
    return build_gen_prompt(readings.size(), readings.sample_rate_hz(), serialize_readings(readings.values()), exemplar);
}

struct JudgeResult {
    int score = 0;
    std::string reason;
    std::string raw;
};

/// A reply that is not "<int 1-5>#<reason>".
class JudgeParseError : public FormatError {
public:
    JudgeParseError(const std::string& message, std::string raw)
        : FormatError(message), raw_(std::move(raw)) {}
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

class HttpError : public Error {
public:
    HttpError(int status, const std::string& body)
        : Error("HTTP " + std::to_string(status) + ": " + body.substr(0, 300)), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

/// Connection-level failure (no HTTP status).
class TransportError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Splits at the first '#'; the left side must be a bare integer 1-5.
inline JudgeResult parse_judge_reply(const std::string& raw) {
    const auto hash = raw.find('#');
    if (hash == std::string::npos) throw JudgeParseError("judge reply has no '#' separator", raw);
    const std::string head = detail::trim(std::string_view(raw).substr(0, hash));
    if (head.empty() || head.size() > 3 || head.find_first_not_of("0123456789") != std::string::npos)
        throw JudgeParseError("judge reply score is not an integer: '" + head + "'", raw);
    const int score = std::stoi(head);
    if (score < 1 || score > 5) throw JudgeParseError("judge score out of range 1-5: " + head, raw);
    return {score, detail::trim(std::string_view(raw).substr(hash + 1)), raw};
}

struct HttpResponse {
    int status = 0;
    std::string body;
};

class Transport {
public:
    virtual ~Transport() = default;
    /// POSTs a JSON body; throws TransportError when no response arrives.
    virtual HttpResponse post(const std::string& body) = 0;
};

inline nlohmann::json chat_request(const JudgeConfig& cfg, const std::string& prompt) {
    return {{"model", cfg.model},
            {"temperature", cfg.temperature},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
}

inline std::string request_hash(const std::string& body) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(body)));
    return buf;
}

inline std::string chat_reply_content(const std::string& body) {
    try {
        const auto j = nlohmann::json::parse(body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw JudgeParseError(std::string("malformed chat response: ") + e.what(), body);
    }
}

struct Endpoint {
    std::string scheme_host_port;
    std::string path;
};

inline Endpoint split_endpoint(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw ConfigError("judge endpoint must start with http:// or https://");
    const auto path = url.find('/', scheme + 3);
    if (path == std::string::npos) return {url, "/"};
    return {url.substr(0, path), url.substr(path)};
}

class HttpTransport : public Transport {
public:
    HttpTransport(const JudgeConfig& cfg, std::string api_key)
        : endpoint_(split_endpoint(cfg.endpoint)), api_key_(std::move(api_key)), timeout_(cfg.timeout_seconds) {}

    /// Reads the key from the configured environment variable.
    static std::unique_ptr<HttpTransport> from_env(const JudgeConfig& cfg) {
        const char* key = std::getenv(cfg.api_key_env.c_str());
        if (!key || !*key) throw ConfigError("judge API key not set (environment variable " + cfg.api_key_env + ")");
        return std::make_unique<HttpTransport>(cfg, key);
    }

    HttpResponse post(const std::string& body) override {
        httplib::Client client(endpoint_.scheme_host_port);
        const auto secs = static_cast<time_t>(timeout_);
        const auto usecs = static_cast<time_t>((timeout_ - static_cast<double>(secs)) * 1e6);
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client.Post(endpoint_.path, headers, body, "application/json");
        if (!res) throw TransportError("request to " + endpoint_.scheme_host_port + " failed: " + httplib::to_string(res.error()));
        return {res->status, res->body};
    }

private:
    Endpoint endpoint_;
    std::string api_key_;
    double timeout_;
};

/// No recorded response for a request; never retried.
class CassetteMiss : public Error {
public:
    using Error::Error;
};

/// Replays recorded responses keyed by request hash. Cassette lines:
/// {"request_hash": "...", "request": {...}, "response": {"status": 200, "body": "..."}}
class CassetteTransport : public Transport {
public:
    explicit CassetteTransport(const std::filesystem::path& path) {
        for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t) {
            const auto& r = j.at("response");
            entries_[j.at("request_hash").get<std::string>()] = {r.at("status").get<int>(), r.at("body").get<std::string>()};
        });
    }

    HttpResponse post(const std::string& body) override {
        const auto h = request_hash(body);
        auto it = entries_.find(h);
        if (it == entries_.end()) throw CassetteMiss("cassette has no response for request " + h);
        return it->second;
    }

    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::map<std::string, HttpResponse> entries_;
};

/// Forwards to an inner transport and appends every exchange to a cassette.
class RecordingTransport : public Transport {
public:
    RecordingTransport(Transport& inner, const std::filesystem::path& path)
        : inner_(inner), out_(path, std::ios::binary | std::ios::app) {
        if (!out_) throw Error("cannot open cassette " + path.string());
    }

    HttpResponse post(const std::string& body) override {
        auto res = inner_.post(body);
        nlohmann::json line = {{"request_hash", request_hash(body)},
                               {"request", nlohmann::json::parse(body)},
                               {"response", {{"status", res.status}, {"body", res.body}}}};
        std::lock_guard lock(mu_);
        out_ << line.dump() << '\n';
        out_.flush();
        return res;
    }

private:
    Transport& inner_;
    std::ofstream out_;
    std::mutex mu_;
};

inline bool is_transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

using Sleeper = std::function<void(double seconds)>;

inline void real_sleep(double seconds) {
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

/// Scores one (model output, ground truth) pair. Transient failures are
/// retried with exponential backoff; other HTTP errors surface immediately.
inline JudgeResult judge(const std::string& model_output, const std::string& ground_truth, const JudgeConfig& cfg,
                         Transport& transport, const Sleeper& sleep = real_sleep) {
    const std::string body = chat_request(cfg, build_eval_prompt(model_output, ground_truth)).dump();
    double delay = cfg.backoff_initial_seconds;
    for (int attempt = 0;; ++attempt) {
        try {
            const auto res = transport.post(body);
            if (res.status >= 200 && res.status < 300) return parse_judge_reply(chat_reply_content(res.body));
            if (!is_transient_status(res.status) || attempt >= cfg.max_retries) throw HttpError(res.status, res.body);
        } catch (const TransportError&) {
            if (attempt >= cfg.max_retries) throw;
        }
        sleep(delay);
        delay *= cfg.backoff_factor;
    }
}

struct JudgePair {
    std::string id;
    std::string model_output;
    std::string ground_truth;
};

struct JudgeOutcome {
    std::string id;
    std::optional<JudgeResult> result;
    std::string error;
};

/// Scores all pairs with at most cfg.max_concurrency requests in flight.
/// Output order follows input order regardless of completion order.
inline std::vector<JudgeOutcome> judge_batch(const std::vector<JudgePair>& pairs, const JudgeConfig& cfg,
                                             Transport& transport, const Sleeper& sleep = real_sleep) {
    cfg.validate();
    std::vector<JudgeOutcome> out(pairs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < pairs.size();) {
            out[i].id = pairs[i].id;
            try {
                out[i].result = judge(pairs[i].model_output, pairs[i].ground_truth, cfg, transport, sleep);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    const std::size_t n = std::min(cfg.max_concurrency, std::max<std::size_t>(pairs.size(), 1));
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    return out;
}

inline nlohmann::json to_json(const JudgeOutcome& o, const JudgeConfig& cfg) {
    nlohmann::json j = {{"id", o.id}, {"model", cfg.model}, {"temperature", cfg.temperature}};
    if (o.result) {
        j["score"] = o.result->score;
        j["reason"] = o.result->reason;
        j["raw"] = o.result->raw;
        j["line"] = std::to_string(o.result->score) + "#" + o.result->reason;
    } else {
        j["score"] = nullptr;
        j["error"] = o.error;
    }
    return j;
}

}  // namespace sensortext
