#include "dyncop/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "dyncop/errors.hpp"

namespace dyncop {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

double CsvTable::number(std::size_t row, int col) const {
  const std::string& text = rows[row][static_cast<std::size_t>(col)];
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("csv: row " + std::to_string(line_numbers[row]) + ": '" + text +
                      "' in column '" + header[static_cast<std::size_t>(col)] +
                      "' is not a finite number");
  }
  return value;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fields = split(t);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ConfigError("csv: row " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw ConfigError("csv: missing header row");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input file '" + path + "'");
  return read_csv(in);
}

namespace {

PairedSample paired_from_table(const CsvTable& table) {
  int cu = table.column("u");
  int cv = table.column("v");
  if (cu < 0 || cv < 0) {
    cu = table.column("x");
    cv = table.column("y");
  }
  if (cu < 0 || cv < 0) throw ConfigError("csv: expected columns u,v or x,y");
  std::vector<double> u;
  std::vector<double> v;
  u.reserve(table.rows.size());
  v.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    u.push_back(table.number(r, cu));
    v.push_back(table.number(r, cv));
  }
  return PairedSample(std::move(u), std::move(v));
}

}  // namespace

PairedSample read_paired_sample(std::istream& in) { return paired_from_table(read_csv(in)); }

PairedSample read_paired_sample_file(const std::string& path) {
  return paired_from_table(read_csv_file(path));
}

std::vector<Knot> read_knots_file(const std::string& path) {
  const CsvTable table = read_csv_file(path);
  const int cs = table.column("s");
  const int cm = table.column("m");
  if (cs < 0 || cm < 0) throw ConfigError("csv: path table needs columns s,m");
  std::vector<Knot> knots;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    knots.push_back({table.number(r, cs), table.number(r, cm)});
  }
  return knots;
}

}  // namespace dyncop
