// SPDX-License-Identifier: Apache-2.0
#include "cli_lib.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rwcap::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

Config Config::parse(std::istream& is) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               " is not key=value: " + line);
    std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) + " has an empty key");
    c.set(key, trim(t.substr(eq + 1)));
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  return parse(f);
}

std::string config_hash(const std::string& serialized) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : serialized) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "%010llx", static_cast<unsigned long long>(h & 0xFFFFFFFFFFull));
  return buf;
}

namespace {

std::tm utc_now_tm() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  return tm;
}

}  // namespace

std::string utc_timestamp() {
  std::tm tm = utc_now_tm();
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return buf;
}

std::string utc_iso8601() {
  std::tm tm = utc_now_tm();
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path make_run_dir(const std::string& root, const std::string& subcommand,
                                   const std::string& hash) {
  namespace fs = std::filesystem;
  fs::path base = fs::path(root) / subcommand;
  fs::create_directories(base);
  std::string stem = utc_timestamp() + "-" + hash;
  fs::path dir = base / stem;
  for (int i = 2; fs::exists(dir); ++i) dir = base / (stem + "-" + std::to_string(i));
  fs::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string Csv::serialize() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

std::string fmt_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

PointSet parse_points(int d, const std::string& spec) {
  PointSet s(d);
  std::stringstream ss(spec);
  std::string tuple;
  while (std::getline(ss, tuple, ';')) {
    for (auto& ch : tuple)
      if (ch == ',') ch = ' ';
    std::istringstream ts(tuple);
    LatticePoint p(d);
    long v = 0;
    int j = 0;
    while (ts >> v) {
      if (j >= d) throw std::runtime_error("point has more than " + std::to_string(d) +
                                           " coordinates: " + tuple);
      p[j++] = Coord(v);
    }
    if (j == 0) continue;
    if (j != d)
      throw std::runtime_error("point needs exactly " + std::to_string(d) +
                               " coordinates: " + tuple);
    s.insert(p);
  }
  if (s.empty()) throw std::runtime_error("no points parsed from: " + spec);
  return s;
}

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = trim(item);
    if (!t.empty()) parts.push_back(t);
  }
  return parts;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split_commas(s)) out.push_back(std::stod(p));
  return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& p : split_commas(s)) out.push_back(std::stoull(p));
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& p : split_commas(s)) out.push_back(std::stoi(p));
  return out;
}

nlohmann::json estimate_json(const MCEstimate& e) {
  return {{"mean", e.mean},
          {"se", e.se},
          {"replicas", e.replicas},
          {"bias_lo", e.bias_lo},
          {"bias_hi", e.bias_hi}};
}

nlohmann::json capacity_json(const CapacityResult& c) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& p : c.sites) {
    nlohmann::json coords = nlohmann::json::array();
    for (int j = 0; j < p.dim(); ++j) coords.push_back(p[j]);
    sites.push_back(coords);
  }
  return {{"value", c.value},     {"energy", c.energy},       {"method", c.method},
          {"gap", c.gap},         {"clamped", c.clamped},     {"iterations", c.iterations},
          {"condition", c.condition}, {"sites", sites},       {"measure", c.measure}};
}

}  // namespace rwcap::cli
