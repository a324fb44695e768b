#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gls/measure.hpp"

namespace gls {

// Function file format: one atom per line, "<weight> <value>" as decimal
// literals, '#' starts a comment. Parsing is locale-independent.
SimpleFunction read_function_file(const std::string& path);
SimpleFunction parse_function_text(std::istream& in, const std::string& origin);
void write_function_file(const std::string& path, const SimpleFunction& f,
                         const std::string& header_comment = "");

// Two-column numeric table, same lexical rules ("<p> <psi>" lines).
std::vector<std::pair<double, double>> read_table_file(const std::string& path);

// Shortest decimal that round-trips a double (%.17g).
std::string format17(double x);

}  // namespace gls
