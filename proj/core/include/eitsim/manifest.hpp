#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eitsim/config.hpp"

namespace eitsim {

inline constexpr const char* version_string = "0.1.0";

std::uint64_t fnv1a64(std::string_view s);

// Written as <dir>/manifest.json, and written last: its presence marks a
// completed run. Embeds the fully resolved config and a hash of its canonical
// serialization.
void write_manifest(const std::filesystem::path& dir,
                    const std::string& subcommand, const SystemConfig& cfg,
                    const std::vector<std::string>& outputs);

}  // namespace eitsim
