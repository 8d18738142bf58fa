#pragma once

// Plain-text snapshot dumps:
//   # t=<time> kind=<torus|channel> N=<dim> cells=<c1,..> L=<L>
// followed by the cell values in row-major order, one per line, 17 significant digits.

#include <iosfwd>
#include <string>

#include "prarefact/grid.hpp"

namespace prarefact::io {

struct SnapshotFile {
  double t;
  Field field;
};

/// Decimal text with 17 significant digits (round-trips every double).
std::string format_double(double v);

void write_snapshot(std::ostream& out, double t, const Field& field);
void write_snapshot(const std::string& path, double t, const Field& field);

/// Throws ParseError (line number set) on a malformed header or value line.
SnapshotFile read_snapshot(std::istream& in);
SnapshotFile read_snapshot(const std::string& path);

}  // namespace prarefact::io
