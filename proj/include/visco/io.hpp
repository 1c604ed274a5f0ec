#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "visco/decay.hpp"
#include "visco/kernel.hpp"
#include "visco/state.hpp"

namespace visco {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

/// Floats at 17 significant digits; non-finite values print as nan/inf.
std::string format_double(double v);

/// Comma-separated table with a header row.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Long-format norm series: columns time, p, value (p = inf for the sup norm).
void write_norm_csv(const std::filesystem::path& path, const DecaySeries& series);

/// Real-space snapshot of U: "VWSNAP01", u32 n, u32 component count, f64 L,
/// f64 time, then per component a u32-length name, then the samples as f64
/// component-major. A JSON sidecar (same stem, .json) repeats the header and
/// carries `meta`.
void write_snapshot(const std::filesystem::path& path, const StateU& u, double time,
                    const nlohmann::json& meta = nlohmann::json::object());

struct Snapshot {
  int n = 0;
  double length = 0.0;
  double time = 0.0;
  std::vector<std::string> components;
  std::vector<double> values;  // component-major
};
/// Throws std::runtime_error on a malformed file.
Snapshot read_snapshot(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace visco
