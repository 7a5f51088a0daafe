#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace helix::expcli {

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunManifest {
  nlohmann::json config_echo;
  std::string library_version;
  double wall_time_s = 0.0;
  std::vector<Assertion> assertions;
  std::vector<std::string> output_files; // paths relative to out dir

  bool all_pass() const;
  /// Serializes to manifest.json in out_dir, digesting each output file.
  void write(const std::string& out_dir) const;
};

/// FNV-1a 64-bit digest of a file's bytes, as a hex string.
std::string fnv1a64_file(const std::string& path);

} // namespace helix::expcli
