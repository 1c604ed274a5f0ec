#include "visco/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace visco {

namespace {
constexpr char kMagic[8] = {'V', 'W', 'S', 'N', 'A', 'P', '0', '1'};

const char* const kComponentNames[kStateDim] = {"phi",   "w1",    "w2",    "w3",    "Psi11", "Psi12", "Psi13",
                                                "Psi21", "Psi22", "Psi23", "Psi31", "Psi32", "Psi33"};

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("truncated snapshot");
  return v;
}
}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto os = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::invalid_argument("csv row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

void write_norm_csv(const std::filesystem::path& path, const DecaySeries& series) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    for (const auto& [p, v] : series.norms) rows.push_back({series.times[i], p, v.at(i)});
  }
  write_csv(path, {"time", "p", "value"}, rows);
}

void write_snapshot(const std::filesystem::path& path, const StateU& u, double time, const nlohmann::json& meta) {
  const auto f = to_physical(u);
  const auto& g = u.grid();
  auto os = open_out(path, std::ios::out | std::ios::binary);
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
  put<std::uint32_t>(os, kStateDim);
  put<double>(os, g.length());
  put<double>(os, time);
  for (const char* name : kComponentNames) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(std::strlen(name)));
    os.write(name, static_cast<std::streamsize>(std::strlen(name)));
  }
  auto dump = [&](const Field& x) {
    for (int c = 0; c < x.ncomp(); ++c) {
      os.write(reinterpret_cast<const char*>(x.data(c)), static_cast<std::streamsize>(x.size() * sizeof(double)));
    }
  };
  dump(f.phi);
  dump(f.w);
  dump(f.Psi);
  if (!os) throw std::runtime_error("failed writing " + path.string());

  nlohmann::json side;
  side["format"] = "VWSNAP01";
  side["n"] = g.n();
  side["length"] = g.length();
  side["time"] = time;
  side["components"] = std::vector<std::string>(std::begin(kComponentNames), std::end(kComponentNames));
  side["layout"] = "component-major, index (i*n + j)*n + l, float64 native endian";
  side["meta"] = meta;
  auto sidecar = path;
  write_json(sidecar.replace_extension(".json"), side);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error(path.string() + " is not a snapshot");
  }
  Snapshot s;
  s.n = static_cast<int>(get<std::uint32_t>(is));
  const auto ncomp = get<std::uint32_t>(is);
  s.length = get<double>(is);
  s.time = get<double>(is);
  if (s.n <= 0 || s.n > 4096 || ncomp == 0 || ncomp > 64) throw std::runtime_error("corrupt snapshot header");
  for (std::uint32_t c = 0; c < ncomp; ++c) {
    const auto len = get<std::uint32_t>(is);
    if (len > 256) throw std::runtime_error("corrupt component name");
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw std::runtime_error("truncated snapshot");
    s.components.push_back(name);
  }
  const std::size_t count = static_cast<std::size_t>(s.n) * s.n * s.n * ncomp;
  s.values.resize(count);
  if (!is.read(reinterpret_cast<char*>(s.values.data()), static_cast<std::streamsize>(count * sizeof(double)))) {
    throw std::runtime_error("truncated snapshot data");
  }
  return s;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

}  // namespace visco
