#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "dimerlab/common.hpp"

namespace dimerlab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw Error("InvalidConfig", key + ": not a number: '" + v + "'");
  return out;
}

// Output destinations do not change results, so they stay out of the hash and
// the embedded config (two runs writing to different files compare equal).
bool is_destination(const std::string& key) { return key == "out" || key == "table"; }

}  // namespace

const std::string& Config::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw Error("InvalidConfig", "missing key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const { return parse_double(key, get(key)); }

long Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw Error("InvalidConfig", key + ": not an integer: '" + get(key) + "'");
  return static_cast<long>(v);
}

bool Config::flag(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no" || v.empty()) return false;
  throw Error("InvalidConfig", key + ": not a boolean: '" + v + "'");
}

std::uint64_t Config::seed() const {
  if (!has("seed")) return 0;
  const std::string& v = get("seed");
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw Error("InvalidConfig", "seed: not a u64: '" + v + "'");
  return out;
}

std::vector<std::string> Config::list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get(key));
  for (std::string item; std::getline(ss, item, ';');)
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::uint64_t Config::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  feed(command + "\n");
  for (const auto& [k, v] : values)
    if (!is_destination(k)) feed(k + "=" + v + "\n");
  return h;
}

std::string Config::dump() const {
  std::ostringstream os;
  os << "command = " << command << "\n";
  for (const auto& [k, v] : values) os << k << " = " << v << "\n";
  return os.str();
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("InvalidConfig", "cannot read config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error("InvalidConfig", path + ":" + std::to_string(n) + ": expected key = value");
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

Json meta(const Config& c) {
  Json m;
  m["tool"] = "dimerlab";
  m["version"] = kVersion;
  m["command"] = c.command;
  m["config_hash"] = hex64(c.hash());
  m["seed"] = c.seed();
  Json cfg = Json::object();
  for (const auto& [k, v] : c.values)
    if (!is_destination(k)) cfg[k] = v;
  m["config"] = cfg;
  return m;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot write '" + path + "'");
  out << content;
}

std::string csv_document(const Config& c, const CsvTable& t) {
  std::ostringstream os;
  os << "# dimerlab " << kVersion << " command=" << c.command << " config_hash=" << hex64(c.hash())
     << " seed=" << c.seed() << "\n";
  for (const auto& [k, v] : c.values)
    if (!is_destination(k)) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

int CsvData::column(const std::vector<std::string>& names) const {
  for (const auto& n : names)
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == n) return static_cast<int>(i);
  return -1;
}

CsvData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("InvalidConfig", "cannot read '" + path + "'");
  CsvData d;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(t);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(trim(cell));
    if (!header) {
      d.columns = cells;
      header = true;
      continue;
    }
    if (cells.size() != d.columns.size()) throw Error("InvalidInput", path + ": ragged row '" + t + "'");
    std::vector<double> row;
    for (const auto& cell : cells) {
      // Non-numeric cells (labels) are kept as NaN.
      double v = NAN;
      if (cell == "nan") v = NAN;
      else if (cell == "inf") v = INFINITY;
      else if (cell == "-inf") v = -INFINITY;
      else {
        const char* end = cell.data() + cell.size();
        double x = 0.0;
        auto [p, ec] = std::from_chars(cell.data(), end, x);
        if (ec == std::errc() && p == end) v = x;
      }
      row.push_back(v);
    }
    d.rows.push_back(std::move(row));
  }
  if (!header) throw Error("InvalidInput", path + ": no header line");
  return d;
}

}  // namespace dimerlab::cli
