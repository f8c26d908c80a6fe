// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwcap/capacity.hpp"
#include "rwcap/lattice.hpp"
#include "rwcap/mc.hpp"

namespace rwcap::cli {

// Effective-configuration map behind every run. Serialized as sorted
// "key=value" lines; parse(serialize(c)) == c, which is what makes a saved
// config.echo re-runnable via --config.
class Config {
 public:
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  const std::string* find(const std::string& key) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? nullptr : &it->second;
  }
  const std::map<std::string, std::string>& items() const { return kv_; }
  bool operator==(const Config& o) const { return kv_ == o.kv_; }

  std::string serialize() const;
  static Config parse(std::istream& is);
  static Config parse_file(const std::string& path);

 private:
  std::map<std::string, std::string> kv_;
};

// FNV-1a over the serialized config; ten hex digits name the run directory.
std::string config_hash(const std::string& serialized);

std::string utc_timestamp();  // YYYYMMDD-HHMMSS, directory names
std::string utc_iso8601();    // record.json metadata

// Creates <root>/<subcommand>/<timestamp>-<confighash>/ (suffixing -2, -3,
// ... on collision) and returns the path.
std::filesystem::path make_run_dir(const std::string& root, const std::string& subcommand,
                                   const std::string& hash);

void write_file(const std::filesystem::path& path, const std::string& content);

// trends.csv: one header, numeric rows in run order.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string serialize() const;
};

std::string fmt_double(double v);  // shortest round-trip decimal

// "x1 x2 .. xd; y1 .. yd" (commas also accepted) -> point set.
PointSet parse_points(int d, const std::string& spec);

// Comma-separated numeric lists for shell/replica/n-grid flags.
std::vector<double> parse_double_list(const std::string& s);
std::vector<std::uint64_t> parse_u64_list(const std::string& s);
std::vector<int> parse_int_list(const std::string& s);

nlohmann::json estimate_json(const MCEstimate& e);
nlohmann::json capacity_json(const CapacityResult& c);

}  // namespace rwcap::cli
