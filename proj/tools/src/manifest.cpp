#include "manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace curvlab::cli {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void RunManifest::digest(const std::string& name, const std::string& bytes) {
  input_digests.emplace_back(name, hex64(fnv1a64(bytes)));
}

Json RunManifest::to_json() const {
  Json j;
  j["command_line"] = command_line;
  j["deterministic"] = deterministic;
  j["tool_version"] = tool_version;
  j["started_utc"] = started_utc;
  j["finished_utc"] = finished_utc;
  Json d = Json::object();
  for (const auto& [k, v] : input_digests) d[k] = v;
  j["input_digests"] = d;
  j["outputs"] = outputs;
  return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << contents;
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace curvlab::cli
