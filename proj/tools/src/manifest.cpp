#include "targetlab/app/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>

#include "targetlab/error.hpp"

#ifndef TARGETLAB_VERSION
#define TARGETLAB_VERSION "unknown"
#endif

namespace targetlab::app {
namespace {

constexpr const char* kManifestName = "manifest.json";

std::vector<fs::path> output_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir);
    if (rel == kManifestName) continue;
    out.push_back(rel);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string version_string() { return TARGETLAB_VERSION; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest::RunManifest(std::string command, json config)
    : command_(std::move(command)), config_(std::move(config)), started_(utc_timestamp()) {}

json RunManifest::finish(const fs::path& dir) {
  fs::create_directories(dir);
  json files = json::array();
  for (const fs::path& rel : output_files(dir)) {
    const fs::path full = dir / rel;
    files.push_back({{"path", rel.generic_string()},
                     {"sha256", sha256_file(full)},
                     {"bytes", fs::file_size(full)}});
  }
  json m = {
      {"command", command_},
      {"version", version_string()},
      {"started", started_},
      {"finished", utc_timestamp()},
      {"status", status_},
      {"config", config_},
      {"conventions", conventions_},
      {"notes", notes_},
      {"files", files},
  };
  write_json(dir / kManifestName, m);
  return m;
}

ManifestCheck verify_manifest(const fs::path& dir) {
  ManifestCheck check;
  const json m = read_json(dir / kManifestName);
  std::set<std::string> listed;
  for (const auto& f : m.at("files")) {
    const std::string rel = f.at("path").get<std::string>();
    listed.insert(rel);
    const fs::path full = dir / rel;
    if (!fs::exists(full)) {
      check.problems.push_back("missing: " + rel);
      continue;
    }
    if (sha256_file(full) != f.at("sha256").get<std::string>()) {
      check.problems.push_back("hash mismatch: " + rel);
    }
  }
  for (const fs::path& rel : output_files(dir)) {
    if (!listed.count(rel.generic_string())) check.problems.push_back("unlisted: " + rel.generic_string());
  }
  check.ok = check.problems.empty();
  return check;
}

}  // namespace targetlab::app
