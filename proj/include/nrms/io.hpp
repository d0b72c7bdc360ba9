#ifndef NRMS_IO_HPP
#define NRMS_IO_HPP

// Output plumbing shared by the command-line tools: run manifests, CSV float
// formatting at full round-trip precision, key=value config files, and a
// small stable content digest for manifest entries.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nrms {

inline constexpr const char* kVersion = "0.1.0";

// 17 significant digits: enough to round-trip an IEEE double exactly.
std::string format_g17(double v);

// FNV-1a 64-bit over a file's bytes; throws std::runtime_error if unreadable.
std::uint64_t fnv1a64_file(const std::string& path);

// Output directory resolution: --outdir flag beats the NRMS_OUTDIR
// environment variable beats the current directory.
std::string resolve_outdir(const std::string& flag_value);

struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> parameters; // resolved, post-override
  std::vector<std::string> inputs;               // config files etc.
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;

  // Serializes to <dir>/<name>; input digests are computed here.
  void write(const std::string& dir, const std::string& name) const;
};

// key=value file with '#' comments and blank lines; later keys override
// earlier ones. Returned in file order.
std::vector<std::pair<std::string, std::string>>
read_config_file(const std::string& path);

} // namespace nrms

#endif
