#include "prarefact/snapshot_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "prarefact/error.hpp"

namespace prarefact::io {

std::string format_double(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_snapshot(std::ostream& out, double t, const Field& field) {
  const GridSpec& g = field.grid;
  out << "# t=" << format_double(t) << " kind=" << to_string(g.kind()) << " N=" << g.dim() << " cells=";
  for (int a = 0; a < g.dim(); ++a) out << (a ? "," : "") << g.cells(a);
  out << " L=" << format_double(g.half_length()) << '\n';
  for (double v : field.values) out << format_double(v) << '\n';
}

void write_snapshot(const std::string& path, double t, const Field& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open snapshot file for writing: " + path);
  write_snapshot(out, t, field);
  if (!out) throw Error("failed writing snapshot file: " + path);
}

namespace {

double parse_number(const std::string& s, int line) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError(line, "not a number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError(line, "not an integer: '" + s + "'");
  return v;
}

}  // namespace

SnapshotFile read_snapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# ", 0) != 0) throw ParseError(1, "missing snapshot header");
  std::istringstream hs(header.substr(2));
  std::string tok;
  double t = 0.0, L = 0.0;
  int dim = 0;
  std::string kind;
  std::vector<int> cells;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError(1, "malformed header token: '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "t") t = parse_number(val, 1);
    else if (key == "kind") kind = val;
    else if (key == "N") dim = parse_int(val, 1);
    else if (key == "L") L = parse_number(val, 1);
    else if (key == "cells") {
      std::istringstream cs(val);
      std::string c;
      while (std::getline(cs, c, ',')) cells.push_back(parse_int(c, 1));
    } else {
      throw ParseError(1, "unknown header key: '" + key + "'");
    }
  }
  if (static_cast<int>(cells.size()) != dim) throw ParseError(1, "cell list does not match N");
  GridSpec grid = kind == "torus"     ? GridSpec::torus(dim, cells)
                  : kind == "channel" ? GridSpec::channel(dim, cells, L)
                                      : throw ParseError(1, "unknown grid kind: '" + kind + "'");
  Field field(grid);
  std::string line;
  int lineno = 1;
  for (std::size_t i = 0; i < field.size(); ++i) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError(lineno, "snapshot ends early");
    field.values[i] = parse_number(line, lineno);
  }
  return {t, std::move(field)};
}

SnapshotFile read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot file: " + path);
  return read_snapshot(in);
}

}  // namespace prarefact::io
