#pragma once

#include <string>
#include <vector>

#include "targetlab/app/io.hpp"

namespace targetlab::app {

std::string version_string();

struct ManifestEntry {
  std::string path;  // relative to the run directory, '/' separated
  std::string sha256;
  std::uintmax_t bytes = 0;
};

// Snapshot of a run: configuration, code version, timestamps, and every
// output file with its hash. Written last, as manifest.json.
class RunManifest {
 public:
  RunManifest(std::string command, json config);

  void set_conventions(json conventions) { conventions_ = std::move(conventions); }
  void set_status(std::string status) { status_ = std::move(status); }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  // Hashes every regular file under dir (except manifest.json) and writes
  // dir/manifest.json.
  json finish(const fs::path& dir);

  const json& config() const noexcept { return config_; }

 private:
  std::string command_;
  json config_;
  json conventions_ = json::object();
  std::string status_ = "ok";
  std::vector<std::string> notes_;
  std::string started_;
};

struct ManifestCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Every listed file exists with a matching hash and every file in the
/// directory is listed.
ManifestCheck verify_manifest(const fs::path& dir);

std::string utc_timestamp();

}  // namespace targetlab::app
