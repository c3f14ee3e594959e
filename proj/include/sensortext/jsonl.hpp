#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <json.hpp>

#include "sensortext/error.hpp"

namespace sensortext {

/// One compact JSON object per line. Non-finite numbers are rejected rather
/// than silently written as null.
class JsonlWriter {
public:
    explicit JsonlWriter(std::ostream& out) : out_(&out) {}
    explicit JsonlWriter(const std::filesystem::path& path) : file_(path, std::ios::binary), out_(&file_) {
        if (!file_) throw Error("cannot open " + path.string() + " for writing");
    }

    void write(const nlohmann::json& record) {
        *out_ << record.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict) << '\n';
        if (!*out_) throw Error("write failed");
        ++count_;
    }

    std::size_t count() const noexcept { return count_; }
    void flush() { out_->flush(); }

private:
    std::ofstream file_;
    std::ostream* out_;
    std::size_t count_ = 0;
};

/// Streams records to `fn(record, line_number)`. Blank lines are skipped.
inline std::size_t for_each_jsonl(std::istream& in, const std::string& name,
                                  const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
    std::string line;
    std::size_t line_no = 0, n = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(name, line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) throw ParseError(name, line_no, "expected a JSON object");
        try {
            fn(j, line_no);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(name, line_no, e.what());
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(name, line_no, e.what());
        }
        ++n;
    }
    return n;
}

inline std::size_t for_each_jsonl(const std::filesystem::path& path,
                                  const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    return for_each_jsonl(in, path.string(), fn);
}

}  // namespace sensortext
