#include "sensortext/cli.hpp"

int main(int argc, char** argv) { return sensortext::cli::run(argc, argv); }
