#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ckpt::csv {

/// Splits one line on commas; surrounding whitespace is trimmed from each
/// field. No quoting support.
std::vector<std::string> split_row(std::string_view line);

/// Parses a finite double; throws ParseError(line) on trailing garbage.
double parse_double(std::string_view field, std::size_t line,
                    std::string_view column);
long long parse_integer(std::string_view field, std::size_t line,
                        std::string_view column);

/// Reads rows after checking the header matches `expected_header` exactly.
/// Blank lines are skipped. Each returned row has its 1-based line number.
struct Row {
  std::size_t line;
  std::vector<std::string> fields;
};
std::vector<Row> read_table(std::istream& in,
                            const std::vector<std::string>& expected_header);

}  // namespace ckpt::csv
