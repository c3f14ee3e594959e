#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sensortext/cli.hpp"
#include "sensortext/synthetic.hpp"

namespace testing_util {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

inline CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = sensortext::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path dataset_config_path(const std::string& file) {
    return std::filesystem::path(SENSORTEXT_SOURCE_DIR) / "configs" / "datasets" / file;
}

}  // namespace testing_util
