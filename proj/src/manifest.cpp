#include "tfr/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tfr/sha256.hpp"

namespace tfr {

void RunManifest::add_input(const std::string& path) { input_hashes[path] = sha256_file(path); }

void RunManifest::add_output(const std::string& path) { output_hashes[path] = sha256_file(path); }

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["command"] = command;
    j["argv"] = argv;
    j["config"] = config;
    j["inputs"] = input_hashes;
    j["outputs"] = output_hashes;
    j["wall_seconds"] = wall_seconds;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
    if (!out.flush()) throw std::runtime_error("failed writing manifest: " + path);
}

std::string manifest_path_for(const std::string& output_path) {
    return output_path + ".manifest.json";
}

}  // namespace tfr
