#include "nrms/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nrms {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string resolve_outdir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("NRMS_OUTDIR"); env && *env) return env;
  return ".";
}

void RunManifest::write(const std::string& dir, const std::string& name) const {
  nlohmann::json j;
  j["tool"] = "nrms";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["parameters"] = parameters;
  nlohmann::json ins = nlohmann::json::array();
  for (const auto& path : inputs) {
    char digest[20];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(path)));
    ins.push_back({{"path", path}, {"fnv1a64", digest}});
  }
  j["inputs"] = ins;
  j["outputs"] = outputs;
  j["wall_time_s"] = wall_time_s;
  std::ofstream out(dir + "/" + name);
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << j.dump(2) << "\n";
}

std::vector<std::pair<std::string, std::string>>
read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    // trim
    while (!line.empty() && !notspace(line.back())) line.pop_back();
    size_t start = 0;
    while (start < line.size() && !notspace(line[start])) ++start;
    line.erase(0, start);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back())))
      key.pop_back();
    size_t vs = 0;
    while (vs < value.size() &&
           std::isspace(static_cast<unsigned char>(value[vs])))
      ++vs;
    value.erase(0, vs);
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

} // namespace nrms
