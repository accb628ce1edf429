#include "ipds/libsvm.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "ipds/errors.hpp"

namespace ipds {

namespace {

struct SparseRow {
  double label = 0.0;
  std::vector<std::pair<int, double>> entries;
};

bool blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

double parse_number(const std::string& tok, const std::string& origin, long lineno, const char* what) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError(std::string("malformed ") + what + " '" + tok + "'", origin, lineno);
  return v;
}

}  // namespace

Dataset parse_libsvm_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  std::vector<SparseRow> rows;
  int dim = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank_or_comment(line)) continue;

    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    SparseRow row;
    double raw_label = parse_number(tok, origin, lineno, "label");
    row.label = raw_label > 0.0 ? 1.0 : -1.0;

    int prev_index = 0;
    while (tokens >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.size())
        throw ParseError("malformed feature token '" + tok + "'", origin, lineno);
      std::string idx_str = tok.substr(0, colon);
      for (char ch : idx_str)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
          throw ParseError("malformed feature index '" + idx_str + "'", origin, lineno);
      int index = std::atoi(idx_str.c_str());
      if (index < 1) throw ParseError("feature index must be >= 1", origin, lineno);
      if (index <= prev_index)
        throw ParseError("feature indices must be strictly ascending", origin, lineno);
      double value = parse_number(tok.substr(colon + 1), origin, lineno, "feature value");
      row.entries.emplace_back(index, value);
      prev_index = index;
      dim = std::max(dim, index);
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw DataError(origin + ": no samples");
  if (dim == 0) throw DataError(origin + ": no feature indices in any sample");

  Dataset ds;
  ds.n = static_cast<int>(rows.size());
  ds.dim = dim;
  ds.features.assign(static_cast<std::size_t>(ds.n) * dim, 0.0);
  ds.labels.resize(ds.n);
  for (int j = 0; j < ds.n; ++j) {
    ds.labels[j] = rows[j].label;
    for (auto [index, value] : rows[j].entries)
      ds.features[static_cast<std::size_t>(j) * dim + (index - 1)] = value;
  }
  return ds;
}

Dataset parse_libsvm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("parse_libsvm: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_libsvm_text(buf.str(), path);
}

}  // namespace ipds
