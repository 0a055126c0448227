#pragma once

#include <map>
#include <string>
#include <vector>

namespace tfr {

/// Reproducibility record written alongside every CLI output: the command,
/// every resolved flag, seeds, and content hashes of inputs and outputs.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    std::map<std::string, std::string> config;
    std::map<std::string, std::string> input_hashes;   // path -> sha256
    std::map<std::string, std::string> output_hashes;  // path -> sha256
    double wall_seconds = 0.0;

    void add_input(const std::string& path);
    void add_output(const std::string& path);
    void write(const std::string& path) const;
};

/// `<output path>.manifest.json`
std::string manifest_path_for(const std::string& output_path);

}  // namespace tfr
