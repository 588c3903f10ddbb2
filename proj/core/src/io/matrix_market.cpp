// Copyright 2026 The xbar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xbar/io/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace xbar::io {
namespace {

using Kind = MatrixMarketError::Kind;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++number_;
    return true;
  }

  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

bool blank_or_comment(std::string_view line) {
  auto first = line.find_first_not_of(" \t");
  return first == std::string_view::npos || line[first] == '%';
}

}  // namespace

std::string_view to_string(Symmetry s) { return s == Symmetry::Symmetric ? "symmetric" : "general"; }

MatrixRecord parse_matrix_market(std::string_view text, std::string name) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line))
    throw MatrixMarketError(Kind::MalformedBanner, "empty Matrix Market input");

  auto banner = split_ws(line);
  if (banner.size() != 5 || banner[0] != "%%MatrixMarket" || lower(banner[1]) != "matrix") {
    throw MatrixMarketError(Kind::MalformedBanner,
                            "expected '%%MatrixMarket matrix <format> <field> <symmetry>' banner");
  }
  const std::string format = lower(banner[2]);
  const std::string field = lower(banner[3]);
  const std::string qualifier = lower(banner[4]);
  if (format != "coordinate")
    throw MatrixMarketError(Kind::UnsupportedFormat,
                            "unsupported format '" + format + "' (only coordinate)");
  if (field != "real" && field != "integer")
    throw MatrixMarketError(Kind::NonRealField,
                            "unsupported field '" + field + "' (only real or integer)");
  if (qualifier != "general" && qualifier != "symmetric")
    throw MatrixMarketError(Kind::UnsupportedQualifier,
                            "unsupported symmetry '" + qualifier + "' (only general or symmetric)");

  MatrixRecord rec;
  rec.name = std::move(name);
  rec.symmetry = qualifier == "symmetric" ? Symmetry::Symmetric : Symmetry::General;

  do {
    if (!reader.next(line)) throw MatrixMarketError(Kind::MalformedSize, "missing size line");
  } while (blank_or_comment(line));
  auto size = split_ws(line);
  std::size_t declared = 0;
  if (size.size() != 3 || !parse_number(size[0], rec.rows) || !parse_number(size[1], rec.cols) ||
      !parse_number(size[2], declared) || rec.rows == 0 || rec.cols == 0) {
    throw MatrixMarketError(Kind::MalformedSize, "malformed size line " +
                                                     std::to_string(reader.number()));
  }
  if (rec.symmetry == Symmetry::Symmetric && rec.rows != rec.cols)
    throw MatrixMarketError(Kind::MalformedSize, "symmetric matrix must be square");

  rec.entries.reserve(rec.symmetry == Symmetry::Symmetric ? 2 * declared : declared);
  std::size_t seen = 0;
  while (reader.next(line)) {
    if (blank_or_comment(line)) continue;
    auto tok = split_ws(line);
    std::size_t i = 0;
    std::size_t j = 0;
    double v = 0.0;
    if (tok.size() != 3 || !parse_number(tok[0], i) || !parse_number(tok[1], j) ||
        !parse_number(tok[2], v)) {
      throw MatrixMarketError(Kind::MalformedEntry,
                              "malformed entry on line " + std::to_string(reader.number()));
    }
    if (i < 1 || i > rec.rows || j < 1 || j > rec.cols) {
      throw MatrixMarketError(Kind::IndexOutOfRange,
                              "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") on line " + std::to_string(reader.number()) + " outside " +
                                  std::to_string(rec.rows) + "x" + std::to_string(rec.cols));
    }
    if (rec.symmetry == Symmetry::Symmetric && j > i) {
      throw MatrixMarketError(Kind::IndexOutOfRange,
                              "symmetric file has upper-triangle entry on line " +
                                  std::to_string(reader.number()));
    }
    rec.entries.push_back({i - 1, j - 1, v});
    if (rec.symmetry == Symmetry::Symmetric && i != j) rec.entries.push_back({j - 1, i - 1, v});
    ++seen;
  }
  if (seen != declared) {
    throw MatrixMarketError(Kind::EntryCount, "declared " + std::to_string(declared) +
                                                  " entries, found " + std::to_string(seen));
  }
  return rec;
}

MatrixRecord load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open matrix file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  MatrixRecord rec = parse_matrix_market(buf.str(), path.stem().string());
  rec.provenance = "file:" + path.string();
  return rec;
}

void write_matrix_market(const MatrixRecord& record, std::ostream& out) {
  std::vector<Triplet> body;
  body.reserve(record.entries.size());
  for (const auto& t : record.entries)
    if (record.symmetry == Symmetry::General || t.col <= t.row) body.push_back(t);
  std::sort(body.begin(), body.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });

  out << "%%MatrixMarket matrix coordinate real " << to_string(record.symmetry) << '\n';
  out << record.rows << ' ' << record.cols << ' ' << body.size() << '\n';
  char buf[64];
  for (const auto& t : body) {
    std::snprintf(buf, sizeof buf, "%.17g", t.value);
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << buf << '\n';
  }
  if (!out) throw std::runtime_error("failed writing Matrix Market output");
}

}  // namespace xbar::io
