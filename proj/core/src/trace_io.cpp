// Copyright 2026 The netaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "netaug/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <string>
#include <string_view>

#include "netaug/error.hpp"

namespace netaug::io {
namespace {

using json = nlohmann::json;

std::optional<Label> parse_label(std::string_view s, std::size_t line) {
  if (s == "-") return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < kUnmonitored) {
    throw ParseError("bad label '" + std::string(s) + "'", line);
  }
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_dtrace(std::ostream& out, std::span<const DirectionTrace> traces) {
  std::string line;
  for (const auto& t : traces) {
    line.clear();
    if (t.label()) {
      line += std::to_string(*t.label());
    } else {
      line += '-';
    }
    line += '\t';
    bool first = true;
    for (Cell c : t.cells()) {
      if (!first) line += ' ';
      first = false;
      line += c < 0 ? "-1" : (c > 0 ? "1" : "0");
    }
    line += '\n';
    out << line;
  }
}

std::vector<DirectionTrace> read_dtrace(std::istream& in,
                                        std::optional<std::size_t> length) {
  std::vector<DirectionTrace> traces;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("missing tab", lineno);
    const auto label = parse_label(std::string_view(line).substr(0, tab), lineno);

    std::vector<Cell> cells;
    std::string_view rest = std::string_view(line).substr(tab + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      while (pos < rest.size() && rest[pos] == ' ') ++pos;
      if (pos >= rest.size()) break;
      auto end = rest.find(' ', pos);
      if (end == std::string_view::npos) end = rest.size();
      const auto tok = rest.substr(pos, end - pos);
      if (tok == "1" || tok == "+1") {
        cells.push_back(1);
      } else if (tok == "-1") {
        cells.push_back(-1);
      } else if (tok == "0") {
        cells.push_back(0);
      } else {
        throw ParseError("bad cell '" + std::string(tok) + "'", lineno);
      }
      pos = end;
    }
    DirectionTrace t(std::move(cells), label);
    traces.push_back(length ? renormalize(t, *length) : std::move(t));
  }
  return traces;
}

void write_ttrace(std::ostream& out, std::span<const TimedTrace> traces) {
  for (const auto& t : traces) {
    json rec;
    rec["label"] = t.label() ? json(*t.label()) : json(nullptr);
    json cells = json::array();
    for (const auto& c : t.cells()) {
      cells.push_back(json::array({c.timestamp, int(c.direction), c.size}));
    }
    rec["cells"] = std::move(cells);
    out << rec.dump() << '\n';
  }
}

std::vector<TimedTrace> read_ttrace(std::istream& in) {
  std::vector<TimedTrace> traces;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const json rec = json::parse(line);
      std::optional<Label> label;
      const auto& jl = rec.at("label");
      if (!jl.is_null()) {
        label = jl.get<int>();
        if (*label < kUnmonitored) throw ParseError("bad label", lineno);
      }
      std::vector<TimedCell> cells;
      for (const auto& jc : rec.at("cells")) {
        if (!jc.is_array() || jc.size() != 3) {
          throw ParseError("cell must be [timestamp, direction, size]", lineno);
        }
        TimedCell c;
        c.timestamp = jc[0].get<double>();
        const int dir = jc[1].get<int>();
        const auto size = jc[2].get<std::int64_t>();
        if (dir != 1 && dir != -1) throw ParseError("bad direction", lineno);
        if (size <= 0 || size > std::int64_t(UINT32_MAX)) {
          throw ParseError("bad cell size", lineno);
        }
        c.direction = Cell(dir);
        c.size = std::uint32_t(size);
        cells.push_back(c);
      }
      traces.emplace_back(std::move(cells), label);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return traces;
}

void save_dtrace(const std::filesystem::path& path,
                 std::span<const DirectionTrace> traces) {
  auto out = open_out(path);
  write_dtrace(out, traces);
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<DirectionTrace> load_dtrace(const std::filesystem::path& path,
                                        std::optional<std::size_t> length) {
  auto in = open_in(path);
  return read_dtrace(in, length);
}

void save_ttrace(const std::filesystem::path& path,
                 std::span<const TimedTrace> traces) {
  auto out = open_out(path);
  write_ttrace(out, traces);
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<TimedTrace> load_ttrace(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_ttrace(in);
}

}  // namespace netaug::io
