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

#include "xbar/io/results.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace xbar::io {
namespace {

constexpr std::string_view kHeader =
    "device,matrix,m,n,grid,k,ec_enabled,replicate,err_l2,err_linf,e_w_joules,l_w_seconds,"
    "e_w_raw_joules,l_w_raw_seconds,normalization,seed";
constexpr std::size_t kColumns = 16;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") != std::string_view::npos)
    throw std::invalid_argument("CSV field '" + std::string(s) + "' contains a separator");
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <class T>
T parse_field(std::string_view s, std::size_t line, std::string_view column) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("line " + std::to_string(line) + ": bad " + std::string(column) +
                             " '" + std::string(s) + "'");
  }
  return v;
}

nlohmann::json row_to_json(const ResultRow& r) {
  nlohmann::json j;
  j["device"] = r.device;
  j["matrix"] = r.matrix;
  j["m"] = r.m;
  j["n"] = r.n;
  j["grid"] = r.grid;
  j["k"] = r.k;
  j["ec_enabled"] = r.ec_enabled;
  j["replicate"] = r.replicate ? nlohmann::json(*r.replicate) : nlohmann::json("mean");
  j["err_l2"] = r.err_l2;
  j["err_linf"] = r.err_linf;
  j["e_w_joules"] = r.e_w_joules;
  j["l_w_seconds"] = r.l_w_seconds;
  j["e_w_raw_joules"] = r.e_w_raw_joules;
  j["l_w_raw_seconds"] = r.l_w_raw_seconds;
  j["normalization"] = r.normalization;
  j["seed"] = r.seed;
  return j;
}

}  // namespace

std::string grid_label(const GridShape& g) {
  return std::to_string(g.tile_rows) + "x" + std::to_string(g.tile_cols) + "x" +
         std::to_string(g.cell_rows) + "x" + std::to_string(g.cell_cols);
}

std::string_view csv_header() { return kHeader; }

void write_csv(std::span<const ResultRow> rows, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    check_field(r.device);
    check_field(r.matrix);
    check_field(r.grid);
    out << r.device << ',' << r.matrix << ',' << r.m << ',' << r.n << ',' << r.grid << ',' << r.k
        << ',' << (r.ec_enabled ? 1 : 0) << ','
        << (r.replicate ? std::to_string(*r.replicate) : std::string("mean")) << ','
        << fmt(r.err_l2) << ',' << fmt(r.err_linf) << ',' << fmt(r.e_w_joules) << ','
        << fmt(r.l_w_seconds) << ',' << fmt(r.e_w_raw_joules) << ',' << fmt(r.l_w_raw_seconds)
        << ',' << r.normalization << ',' << r.seed << '\n';
  }
}

std::string to_csv(std::span<const ResultRow> rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kHeader) throw std::runtime_error("line 1: unexpected CSV header");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    auto f = split_commas(line);
    if (f.size() != kColumns) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(kColumns) + " fields, got " +
                               std::to_string(f.size()));
    }
    ResultRow r;
    r.device = f[0];
    r.matrix = f[1];
    r.m = parse_field<std::size_t>(f[2], line_no, "m");
    r.n = parse_field<std::size_t>(f[3], line_no, "n");
    r.grid = f[4];
    r.k = parse_field<std::size_t>(f[5], line_no, "k");
    r.ec_enabled = parse_field<int>(f[6], line_no, "ec_enabled") != 0;
    if (f[7] != "mean") r.replicate = parse_field<std::size_t>(f[7], line_no, "replicate");
    r.err_l2 = parse_field<double>(f[8], line_no, "err_l2");
    r.err_linf = parse_field<double>(f[9], line_no, "err_linf");
    r.e_w_joules = parse_field<double>(f[10], line_no, "e_w_joules");
    r.l_w_seconds = parse_field<double>(f[11], line_no, "l_w_seconds");
    r.e_w_raw_joules = parse_field<double>(f[12], line_no, "e_w_raw_joules");
    r.l_w_raw_seconds = parse_field<double>(f[13], line_no, "l_w_raw_seconds");
    r.normalization = parse_field<std::uint64_t>(f[14], line_no, "normalization");
    r.seed = parse_field<std::uint64_t>(f[15], line_no, "seed");
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw std::runtime_error("empty CSV input");
  return rows;
}

std::string to_json(std::span<const ResultRow> rows, const ExperimentConfig& cfg,
                    std::string_view command) {
  nlohmann::json c;
  c["command"] = command;
  c["grid"] = {{"R", cfg.grid.tile_rows},
               {"C", cfg.grid.tile_cols},
               {"r", cfg.grid.cell_rows},
               {"c", cfg.grid.cell_cols}};
  c["matrix"] = cfg.matrix;
  c["devices"] = cfg.devices;
  c["k"] = cfg.k;
  c["k_max"] = cfg.k_max;
  c["reps"] = cfg.reps;
  c["eps"] = cfg.eps;
  c["norm"] = std::string(to_string(cfg.norm));
  c["ec"] = cfg.ec;
  c["lambda"] = cfg.lambda;
  c["h"] = cfg.h;
  c["denoise"] = std::string(to_string(cfg.denoise));
  c["seed"] = cfg.seed;
  c["vector_seed"] = cfg.vector_seed;
  c["fixed_x"] = cfg.fixed_x;
  c["epiram_ec"] = cfg.epiram_ec;
  c["synthetic"] = cfg.synthetic;
  c["kappa"] = cfg.kappa;
  c["normalization"] = cfg.normalization;
  c["data_dir"] = cfg.data_dir.string();
  nlohmann::json profiles = nlohmann::json::object();
  for (const auto& name : cfg.devices) {
    const DeviceProfile& p = find_profile(cfg.profiles, name);
    profiles[name] = {{"g_min", p.g_min},         {"g_max", p.g_max},
                      {"n_levels", p.n_levels},   {"nl_ltp", p.nl_ltp},
                      {"nl_ltd", p.nl_ltd},       {"sigma_c2c", p.sigma_c2c},
                      {"e_pulse", p.e_pulse},     {"t_pulse", p.t_pulse},
                      {"p_max", p.p_max}};
  }
  c["profiles"] = profiles;

  nlohmann::json doc;
  doc["config"] = c;
  doc["rows"] = nlohmann::json::array();
  for (const auto& r : rows) doc["rows"].push_back(row_to_json(r));
  return doc.dump(2) + "\n";
}

std::vector<ResultRow> parse_json_rows(std::string_view text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  std::vector<ResultRow> rows;
  for (const auto& j : doc.at("rows")) {
    ResultRow r;
    r.device = j.at("device").get<std::string>();
    r.matrix = j.at("matrix").get<std::string>();
    r.m = j.at("m").get<std::size_t>();
    r.n = j.at("n").get<std::size_t>();
    r.grid = j.at("grid").get<std::string>();
    r.k = j.at("k").get<std::size_t>();
    r.ec_enabled = j.at("ec_enabled").get<bool>();
    if (j.at("replicate").is_number()) r.replicate = j.at("replicate").get<std::size_t>();
    r.err_l2 = j.at("err_l2").get<double>();
    r.err_linf = j.at("err_linf").get<double>();
    r.e_w_joules = j.at("e_w_joules").get<double>();
    r.l_w_seconds = j.at("l_w_seconds").get<double>();
    r.e_w_raw_joules = j.at("e_w_raw_joules").get<double>();
    r.l_w_raw_seconds = j.at("l_w_raw_seconds").get<double>();
    r.normalization = j.at("normalization").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::runtime_error("failed writing " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

}  // namespace xbar::io
