#include "eitsim/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>

namespace eitsim {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_manifest(const std::filesystem::path& dir,
                    const std::string& subcommand, const SystemConfig& cfg,
                    const std::vector<std::string>& outputs) {
  const std::string canonical = config_to_json(cfg);

  char stamp[32];
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                (unsigned long long)fnv1a64(canonical));

  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["version"] = version_string;
  j["timestamp"] = stamp;
  j["input_hash"] = hash;
  j["config"] = nlohmann::json::parse(canonical);
  j["outputs"] = outputs;

  std::ofstream f(dir / "manifest.json", std::ios::binary);
  if (!f) throw config_error("cannot write manifest in " + dir.string());
  f << j.dump(2) << "\n";
}

}  // namespace eitsim
