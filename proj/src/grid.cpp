#include "prarefact/grid.hpp"

#include <algorithm>
#include <cmath>

#include "prarefact/error.hpp"

namespace prarefact {

std::string to_string(GridKind kind) { return kind == GridKind::torus ? "torus" : "channel"; }

GridSpec::GridSpec(GridKind kind, int dim, std::array<int, kMaxDim> cells, double half_length)
    : kind_(kind), dim_(dim), cells_(cells), half_length_(half_length) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("grid dimension must be 1, 2 or 3");
  for (int a = 0; a < dim; ++a) {
    if (cells_[static_cast<std::size_t>(a)] < kMinCells) {
      throw DomainError("grid needs at least 8 cells per axis");
    }
  }
  for (int a = dim; a < kMaxDim; ++a) cells_[static_cast<std::size_t>(a)] = 1;
  if (kind == GridKind::channel && !(half_length > 0.0)) {
    throw DomainError("channel half-length must be positive");
  }
  if (kind == GridKind::torus) half_length_ = 0.0;
  size_ = 1;
  for (int a = kMaxDim - 1; a >= 0; --a) {
    stride_[static_cast<std::size_t>(a)] = size_;
    size_ *= static_cast<std::size_t>(cells_[static_cast<std::size_t>(a)]);
  }
}

namespace {
std::array<int, GridSpec::kMaxDim> to_cells(int dim, std::span<const int> cells) {
  if (static_cast<int>(cells.size()) != dim) throw DomainError("one cell count per axis required");
  std::array<int, GridSpec::kMaxDim> c{1, 1, 1};
  std::copy(cells.begin(), cells.end(), c.begin());
  return c;
}
}  // namespace

GridSpec GridSpec::torus(int dim, std::span<const int> cells) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("grid dimension must be 1, 2 or 3");
  return GridSpec(GridKind::torus, dim, to_cells(dim, cells), 0.0);
}

GridSpec GridSpec::torus(int dim, int cells_per_axis) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("grid dimension must be 1, 2 or 3");
  std::array<int, kMaxDim> c{1, 1, 1};
  for (int a = 0; a < dim; ++a) c[static_cast<std::size_t>(a)] = cells_per_axis;
  return GridSpec(GridKind::torus, dim, c, 0.0);
}

GridSpec GridSpec::channel(int dim, std::span<const int> cells, double half_length) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("grid dimension must be 1, 2 or 3");
  return GridSpec(GridKind::channel, dim, to_cells(dim, cells), half_length);
}

double GridSpec::min_dx() const noexcept {
  double h = dx(0);
  for (int a = 1; a < dim_; ++a) h = std::min(h, dx(a));
  return h;
}

double GridSpec::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= dx(a);
  return v;
}

double GridSpec::center(int axis, int i) const noexcept {
  const double origin = (kind_ == GridKind::channel && axis == 0) ? -half_length_ : 0.0;
  return origin + (i + 0.5) * dx(axis);
}

std::array<int, GridSpec::kMaxDim> GridSpec::unflatten(std::size_t index) const noexcept {
  std::array<int, kMaxDim> idx{0, 0, 0};
  for (int a = 0; a < kMaxDim; ++a) {
    const auto s = stride_[static_cast<std::size_t>(a)];
    idx[static_cast<std::size_t>(a)] = static_cast<int>(index / s);
    index %= s;
  }
  return idx;
}

std::size_t GridSpec::flatten(const std::array<int, kMaxDim>& idx) const noexcept {
  std::size_t k = 0;
  for (int a = 0; a < kMaxDim; ++a) {
    k += static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]) * stride_[static_cast<std::size_t>(a)];
  }
  return k;
}

bool GridSpec::operator==(const GridSpec& o) const noexcept {
  return kind_ == o.kind_ && dim_ == o.dim_ && cells_ == o.cells_ && half_length_ == o.half_length_;
}

Field::Field(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw GridMismatch("field value count does not match grid");
}

Field Field::from_function(const GridSpec& g,
                           const std::function<double(std::span<const double>)>& fn) {
  Field out(g);
  std::array<double, GridSpec::kMaxDim> x{};
  const auto d = static_cast<std::size_t>(g.dim());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto idx = g.unflatten(k);
    for (int a = 0; a < g.dim(); ++a) x[static_cast<std::size_t>(a)] = g.center(a, idx[static_cast<std::size_t>(a)]);
    out.values[k] = fn(std::span<const double>(x.data(), d));
  }
  return out;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

void require_same_grid(const Field& a, const Field& b, const char* context) {
  if (!(a.grid == b.grid)) throw GridMismatch(std::string(context) + ": fields live on different grids");
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b, "field difference");
  Field out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] - b.values[i];
  return out;
}

}  // namespace prarefact
