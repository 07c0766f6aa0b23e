#include "fourcolor/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fourcolor {

uint64_t file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return 0;
    uint64_t h = 14695981039346656037ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    return h;
}

void write_manifest(const JobManifest& m, const std::string& path) {
    nlohmann::json j;
    j["command"] = m.command;
    j["parameters"] = m.parameters;
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [name, hash] : m.input_hashes) {
        std::ostringstream hex;
        hex << std::hex << hash;
        inputs[name] = hex.str();
    }
    j["inputs"] = inputs;
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& [name, hash] : m.outputs) {
        std::ostringstream hex;
        hex << std::hex << hash;
        outputs.push_back({{"file", name}, {"hash", hex.str()}});
    }
    j["outputs"] = outputs;
    j["counts"] = m.counts;
    j["elapsed_ms"] = m.elapsed_ms;
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

JobManifest make_manifest(const std::string& command,
                          const std::map<std::string, std::string>& parameters,
                          const std::vector<std::string>& input_files,
                          const std::vector<std::string>& output_files,
                          const std::map<std::string, int64_t>& counts, int64_t elapsed_ms) {
    JobManifest m;
    m.command = command;
    m.parameters = parameters;
    for (const std::string& f : input_files)
        m.input_hashes.emplace_back(std::filesystem::path(f).filename().string(), file_hash(f));
    for (const std::string& f : output_files)
        m.outputs.emplace_back(std::filesystem::path(f).filename().string(), file_hash(f));
    std::sort(m.outputs.begin(), m.outputs.end());
    m.counts = counts;
    m.elapsed_ms = elapsed_ms;
    return m;
}

}  // namespace fourcolor
