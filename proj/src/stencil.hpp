#pragma once

// Ghost-padded copy of a field: one extra layer on each side of every active axis,
// filled by periodic wrap or by channel ghost slabs. All stencil reads go through it.

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "prarefact/error.hpp"
#include "prarefact/grid.hpp"
#include "prarefact/parallel.hpp"
#include "prarefact/solver.hpp"

namespace prarefact::solver::detail {

struct Padded {
  int dim = 1;
  std::array<int, 3> n{1, 1, 1};
  std::array<int, 3> p{1, 1, 1};
  std::array<int, 3> off{0, 0, 0};
  std::array<std::size_t, 3> ps{1, 1, 1};
  std::vector<double> data;

  explicit Padded(const GridSpec& g) : dim(g.dim()) {
    for (int a = 0; a < 3; ++a) {
      const auto k = static_cast<std::size_t>(a);
      n[k] = g.cells(a);
      p[k] = a < dim ? n[k] + 2 : 1;
      off[k] = a < dim ? 1 : 0;
    }
    ps[2] = 1;
    ps[1] = static_cast<std::size_t>(p[2]);
    ps[0] = ps[1] * static_cast<std::size_t>(p[1]);
    data.assign(ps[0] * static_cast<std::size_t>(p[0]), 0.0);
  }

  /// Padded position of (possibly ghost) interior coordinates i in [-1, n].
  std::size_t index(int i0, int i1, int i2) const noexcept {
    return static_cast<std::size_t>(i0 + off[0]) * ps[0] + static_cast<std::size_t>(i1 + off[1]) * ps[1] +
           static_cast<std::size_t>(i2 + off[2]);
  }

  void load(const Field& f, const ChannelGhosts* ghosts) {
    const GridSpec& g = f.grid;
    const int n0 = n[0], n1 = n[1], n2 = n[2];
    const auto row = static_cast<std::size_t>(n2);
#pragma omp parallel for schedule(static) if (f.size() >= parallel::kThreshold)
    for (int i0 = 0; i0 < n0; ++i0) {
      for (int i1 = 0; i1 < n1; ++i1) {
        const double* src = f.values.data() + g.flatten({i0, i1, 0});
        std::copy(src, src + row, data.begin() + static_cast<std::ptrdiff_t>(index(i0, i1, 0)));
      }
    }

    // axis 0
    const std::size_t slab = g.slab_size();
    if (ghosts && (ghosts->left.size() != slab || ghosts->right.size() != slab)) {
      throw GridMismatch("channel ghost slabs must hold one value per transverse cell");
    }
    for (int i1 = 0; i1 < n1; ++i1) {
      for (int i2 = 0; i2 < n2; ++i2) {
        double lo, hi;
        if (g.periodic(0)) {
          lo = data[index(n0 - 1, i1, i2)];
          hi = data[index(0, i1, i2)];
        } else if (ghosts) {
          const auto t = static_cast<std::size_t>(i1) * static_cast<std::size_t>(n2) + static_cast<std::size_t>(i2);
          lo = ghosts->left[t];
          hi = ghosts->right[t];
        } else {
          lo = data[index(0, i1, i2)];
          hi = data[index(n0 - 1, i1, i2)];
        }
        data[index(-1, i1, i2)] = lo;
        data[index(n0, i1, i2)] = hi;
      }
    }
    if (dim >= 2) {
      for (int i0 = -1; i0 <= n0; ++i0) {
        for (int i2 = 0; i2 < n2; ++i2) {
          data[index(i0, -1, i2)] = data[index(i0, n1 - 1, i2)];
          data[index(i0, n1, i2)] = data[index(i0, 0, i2)];
        }
      }
    }
    if (dim >= 3) {
      for (int i0 = -1; i0 <= n0; ++i0) {
        for (int i1 = -1; i1 <= n1; ++i1) {
          data[index(i0, i1, -1)] = data[index(i0, i1, n2 - 1)];
          data[index(i0, i1, n2)] = data[index(i0, i1, 0)];
        }
      }
    }
  }
};

/// Shape of the face array along `axis`: cell counts with one extra entry on that axis.
inline std::array<int, 3> face_shape(const Padded& pad, int axis) {
  auto s = pad.n;
  s[static_cast<std::size_t>(axis)] += 1;
  return s;
}

inline std::size_t face_count(const std::array<int, 3>& s) {
  return static_cast<std::size_t>(s[0]) * static_cast<std::size_t>(s[1]) * static_cast<std::size_t>(s[2]);
}

/// Visits every face along `axis` as body(face_index, left_padded, right_padded) -> double
/// and returns the maximum of the returned values (and `init`).
template <class Body>
double for_each_face(const Padded& pad, int axis, double init, Body&& body) {
  const auto fs = face_shape(pad, axis);
  const std::size_t step = pad.ps[static_cast<std::size_t>(axis)];
  const int f0 = fs[0], f1 = fs[1], f2 = fs[2];
  double best = init;
#pragma omp parallel for schedule(static) reduction(max : best) if (face_count(fs) >= parallel::kThreshold)
  for (int i0 = 0; i0 < f0; ++i0) {
    for (int i1 = 0; i1 < f1; ++i1) {
      std::size_t face = (static_cast<std::size_t>(i0) * static_cast<std::size_t>(f1) + static_cast<std::size_t>(i1)) *
                         static_cast<std::size_t>(f2);
      std::size_t right = pad.index(i0, i1, 0);
      for (int i2 = 0; i2 < f2; ++i2, ++face, ++right) {
        const double v = body(face, right - step, right);
        best = v > best ? v : best;
      }
    }
  }
  return best;
}

/// |grad u|^2 at the face between padded cells `left` and `right` along `axis`;
/// the normal derivative is returned through `normal`.
inline double face_gradient2(const Padded& pad, int axis, const std::array<double, 3>& inv_dx,
                             std::size_t left, std::size_t right, double& normal) {
  const double* P = pad.data.data();
  normal = (P[right] - P[left]) * inv_dx[static_cast<std::size_t>(axis)];
  double g2 = normal * normal;
  for (int b = 0; b < pad.dim; ++b) {
    if (b == axis) continue;
    const std::size_t s = pad.ps[static_cast<std::size_t>(b)];
    const double t = ((P[left + s] - P[left - s]) + (P[right + s] - P[right - s])) * (0.25 * inv_dx[static_cast<std::size_t>(b)]);
    g2 += t * t;
  }
  return g2;
}

}  // namespace prarefact::solver::detail
