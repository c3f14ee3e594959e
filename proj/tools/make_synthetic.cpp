#include <iostream>

#include <CLI11.hpp>

#include "sensortext/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write synthetic per-subject CSV files for a dataset config", "sensortext-synth"};
    std::string config, out;
    std::vector<std::string> subjects;
    std::size_t length = 1000;
    std::uint64_t seed = 0;
    app.add_option("--config", config, "dataset config JSON")->required();
    app.add_option("--out", out, "output directory")->required();
    app.add_option("--subjects", subjects, "subject ids")->required()->expected(1, -1);
    app.add_option("--length", length, "samples per subject at the native rate");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);
    try {
        sensortext::write_synthetic_dataset(out, sensortext::load_dataset_config(config), subjects, length, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
