#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace dimerlab::cli {

using Json = nlohmann::ordered_json;

// Resolved experiment configuration: defaults, then the config file, then flags.
struct Config {
  std::string command;
  std::map<std::string, std::string> values;

  const std::string& get(const std::string& key) const;
  bool has(const std::string& key) const { return values.count(key) > 0; }
  double number(const std::string& key) const;
  // Accepts integer or float notation ("2e6").
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::uint64_t seed() const;
  // Multi-valued keys are stored ';'-separated.
  std::vector<std::string> list(const std::string& key) const;

  // FNV-1a over "command\nkey=value\n..." in key order.
  std::uint64_t hash() const;
  // Flat "key = value" text that read_config_file reads back.
  std::string dump() const;
};

std::map<std::string, std::string> read_config_file(const std::string& path);

std::string hex64(std::uint64_t v);
// Shortest round-trip decimal, '.' separator regardless of locale.
std::string format_number(double v);

// {tool, version, config_hash, seed, config}.
Json meta(const Config& c);

// "" or "-" writes to stdout.
void write_output(const std::string& path, const std::string& content);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};
// Leading '#' lines carry the metadata and the resolved config.
std::string csv_document(const Config& c, const CsvTable& t);

struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Index of the first matching column name, or -1.
  int column(const std::vector<std::string>& names) const;
};
CsvData read_csv(const std::string& path);

struct Param {
  std::string key;
  std::string fallback;
  std::string help;
  bool positional = false;
  bool multi = false;    // repeatable flag, joined with ';'
  bool is_flag = false;  // boolean switch
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
  std::function<int(const Config&)> run;
};

const std::vector<Command>& commands();

// SVG plots of CSV series.
std::string plot_svg(const Config& c, const CsvData& data, const std::string& kind);

}  // namespace dimerlab::cli
