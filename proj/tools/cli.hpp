#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace perc::cli {

enum ExitCode : int { ok = 0, parse_error = 2, domain_error = 3, io_error = 4 };

// Runs one invocation; args excludes the program name. CSV goes to --out when
// given, otherwise to `out`. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a:b:step" (inclusive), "a,b,c" or a single value.
std::vector<double> parse_real_grid(std::string_view text);
std::vector<std::uint64_t> parse_int_grid(std::string_view text);

// 17 significant digits.
std::string format_real(double v);

struct CsvSchema {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::string> text_columns;      // non-numeric
    std::vector<std::string> optional_columns;  // may be empty
};

const std::vector<CsvSchema>& schemas();

// Matches the header against the known schemas and checks every row.
// Returns the schema name; throws std::invalid_argument describing the first
// problem otherwise.
std::string check_csv(std::istream& in);

}  // namespace perc::cli
