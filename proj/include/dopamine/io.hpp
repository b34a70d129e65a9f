#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dopamine/network.hpp"

namespace dopamine {

/// Writes rows as CSV with a header line. Values use the shortest
/// round-trip-exact decimal form.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

/// FNV-1a over the raw bytes of every parameter matrix, in order.
std::uint64_t param_checksum(const NetworkState& net);

/// params.bin: magic, spec (kind + dims), then row-major doubles per layer.
void save_params(const std::filesystem::path& path, const NetworkState& net);
NetworkState load_params(const std::filesystem::path& path);

}  // namespace dopamine
