#include "gls/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gls {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

// Whitespace-separated numeric tokens, locale-independent via from_chars.
std::vector<double> parse_numbers(const std::string& raw, const std::string& origin,
                                  int line_no) {
  std::vector<double> out;
  const char* p = raw.data();
  const char* end = raw.data() + raw.size();
  while (p < end) {
    while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
    if (p >= end) break;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || next == p) {
      fail(origin, line_no, "expected a decimal number, got '" + std::string(p, end) + "'");
    }
    out.push_back(v);
    p = next;
  }
  return out;
}

std::vector<std::pair<double, double>> parse_two_column(std::istream& in,
                                                        const std::string& origin) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::vector<double> nums = parse_numbers(line, origin, line_no);
    if (nums.empty()) continue;
    if (nums.size() != 2) fail(origin, line_no, "expected exactly two numbers per line");
    rows.emplace_back(nums[0], nums[1]);
  }
  return rows;
}

}  // namespace

SimpleFunction parse_function_text(std::istream& in, const std::string& origin) {
  auto rows = parse_two_column(in, origin);
  if (rows.empty()) throw std::runtime_error(origin + ": no atoms in function file");
  std::vector<double> weights, values;
  weights.reserve(rows.size());
  values.reserve(rows.size());
  for (auto& [w, v] : rows) {
    weights.push_back(w);
    values.push_back(v);
  }
  return SimpleFunction(std::move(weights), std::move(values));
}

SimpleFunction read_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open function file: " + path);
  return parse_function_text(in, path);
}

void write_function_file(const std::string& path, const SimpleFunction& f,
                         const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write function file: " + path);
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << format17(f.partition().weight(i)) << " " << format17(f.value(i)) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::pair<double, double>> read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path);
  auto rows = parse_two_column(in, path);
  if (rows.empty()) throw std::runtime_error(path + ": empty table");
  return rows;
}

std::string format17(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace gls
