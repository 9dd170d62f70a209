#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace curvlab::cli {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);
std::string utc_now();

struct RunManifest {
  std::vector<std::string> command_line;
  bool deterministic = true;  // no seeds or clocks feed any numeric output
  std::string tool_version;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::pair<std::string, std::string>> input_digests;  // name -> fnv1a64 hex
  std::vector<std::string> outputs;

  void digest(const std::string& name, const std::string& bytes);
  Json to_json() const;
};

/// Writes to `path.tmp` and renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace curvlab::cli
