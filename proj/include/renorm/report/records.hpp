#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace renorm::report {

/// One embedded assertion: `value` compared against `bound`.
struct Record
{
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v)
{
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

class Report
{
public:
  void add(Record r) { records_.push_back(std::move(r)); }

  void check_le(const std::string& name, double value, double bound) { add({name, value, bound, value <= bound}); }
  void check_ge(const std::string& name, double value, double bound) { add({name, value, bound, value >= bound}); }
  /// Stored as value = |actual − target| against bound = tol.
  void check_near(const std::string& name, double actual, double target, double tol)
  {
    const double err = std::abs(actual - target);
    add({name, err, tol, err <= tol});
  }
  /// Exact floating-point equality; value is the actual number, bound the target.
  void check_eq(const std::string& name, double actual, double target) { add({name, actual, target, actual == target}); }
  void check_true(const std::string& name, bool ok) { add({name, ok ? 1.0 : 0.0, 1.0, ok}); }

  const std::vector<Record>& records() const { return records_; }

  bool all_pass() const
  {
    for (const auto& r : records_)
      if (!r.pass) return false;
    return !records_.empty();
  }

  std::vector<Record> failures() const
  {
    std::vector<Record> out;
    for (const auto& r : records_)
      if (!r.pass) out.push_back(r);
    return out;
  }

  /// First record with this exact name.
  const Record& find(const std::string& name) const
  {
    for (const auto& r : records_)
      if (r.name == name) return r;
    throw std::out_of_range("Report: no record named " + name);
  }

  void append(const Report& other)
  {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  }

private:
  std::vector<Record> records_;
};

/// JSON line for a record; non-finite numbers become null.
inline std::string to_json_line(const Record& r)
{
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["value"] = std::isfinite(r.value) ? nlohmann::ordered_json(r.value) : nlohmann::ordered_json(nullptr);
  j["bound"] = std::isfinite(r.bound) ? nlohmann::ordered_json(r.bound) : nlohmann::ordered_json(nullptr);
  j["pass"] = r.pass;
  return j.dump();
}

using Cell = std::variant<double, long long, std::string>;

struct Table
{
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row)
  {
    if (row.size() != columns.size()) throw std::invalid_argument("Table " + name + ": row width mismatch");
    rows.push_back(std::move(row));
  }
};

inline std::string format_cell(const Cell& c)
{
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline std::string to_csv(const Table& t)
{
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

} // namespace renorm::report
