#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace darboux::cli {

enum ExitCode : int { ok = 0, golden_mismatch = 1, usage = 2, numeric_failure = 3 };

// args excludes the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a,b,c" or "start:stop:step" (stop inclusive).
std::vector<double> parse_real_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

std::string format_number(double v);  // 12 significant digits

}  // namespace darboux::cli
