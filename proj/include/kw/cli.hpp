#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "kw/propagator.hpp"

namespace kw::cli {

// Exit codes: 0 ok, 1 suite/check failure, 2 parse error, 3 validation
// failure, 4 I/O failure. KW_THREADS caps sweep parallelism.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "1", "-2.5", "i", "-i", "3i", "1+2i", "0.5-0.25i". Errc::ParseError.
Complex parse_complex(const std::string& text);

}  // namespace kw::cli
