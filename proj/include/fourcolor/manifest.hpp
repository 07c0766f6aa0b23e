#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fourcolor {

/// Job record: command, input hashes, parameters, outputs, counts, timing.
/// Reruns with identical inputs produce identical output multisets; the
/// elapsed time is informational and excluded from that guarantee.
struct JobManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::vector<std::pair<std::string, uint64_t>> input_hashes;
    std::vector<std::pair<std::string, uint64_t>> outputs;  // sorted by name
    std::map<std::string, int64_t> counts;
    int64_t elapsed_ms = 0;
};

uint64_t file_hash(const std::string& path);
JobManifest make_manifest(const std::string& command,
                          const std::map<std::string, std::string>& parameters,
                          const std::vector<std::string>& input_files,
                          const std::vector<std::string>& output_files,
                          const std::map<std::string, int64_t>& counts, int64_t elapsed_ms);
void write_manifest(const JobManifest& m, const std::string& path);

}  // namespace fourcolor
