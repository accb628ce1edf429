#pragma once

#include <string>

#include "ipds/model.hpp"

namespace ipds {

// Parses `<label> <index>:<value> ...` lines (1-based ascending indices) into
// a dense dataset; d is the largest index seen. Labels <= 0 map to -1, > 0 to
// +1. Blank lines and '#' comments are skipped.
Dataset parse_libsvm(const std::string& path);

Dataset parse_libsvm_text(const std::string& text, const std::string& origin);

}  // namespace ipds
