#include "manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "helix/version.hpp"

namespace helix::expcli {

bool RunManifest::all_pass() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read for digest: " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(h));
  return out;
}

void RunManifest::write(const std::string& out_dir) const {
  nlohmann::json j;
  j["config"] = config_echo;
  j["library_version"] = kVersion;
  j["wall_time_s"] = wall_time_s;
  j["assertions"] = nlohmann::json::array();
  for (const auto& a : assertions)
    j["assertions"].push_back(
        {{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  j["outputs"] = nlohmann::json::array();
  for (const auto& f : output_files)
    j["outputs"].push_back(
        {{"path", f}, {"fnv1a64", fnv1a64_file(out_dir + "/" + f)}});
  std::ofstream out(out_dir + "/manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest.json");
  out << j.dump(2) << "\n";
}

} // namespace helix::expcli
