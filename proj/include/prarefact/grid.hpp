#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace prarefact {

enum class GridKind { torus, channel };

std::string to_string(GridKind kind);

/// Uniform cell-centred grid.
///
/// torus:   every axis is periodic with unit period, [0,1)^N.
/// channel: axis 0 spans [-L, L]; axes 1..N-1 are periodic with unit period.
///
/// Cells are stored row-major: axis 0 is the slowest index, axis N-1 the fastest.
class GridSpec {
 public:
  static constexpr int kMaxDim = 3;
  static constexpr int kMinCells = 8;

  /// Throws DomainError on dim outside 1..3, fewer than 8 cells on an axis, or L <= 0 for channels.
  static GridSpec torus(int dim, std::span<const int> cells);
  static GridSpec channel(int dim, std::span<const int> cells, double half_length);
  /// Same cell count along every axis.
  static GridSpec torus(int dim, int cells_per_axis);

  GridKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  int cells(int axis) const noexcept { return cells_[static_cast<std::size_t>(axis)]; }
  double half_length() const noexcept { return half_length_; }
  double extent(int axis) const noexcept {
    return (kind_ == GridKind::channel && axis == 0) ? 2.0 * half_length_ : 1.0;
  }
  double dx(int axis) const noexcept { return extent(axis) / cells(axis); }
  double min_dx() const noexcept;
  double cell_volume() const noexcept;
  std::size_t size() const noexcept { return size_; }
  /// Row-major stride of an axis.
  std::size_t stride(int axis) const noexcept { return stride_[static_cast<std::size_t>(axis)]; }
  /// Number of cells in one axis-0 slab (product of transverse counts).
  std::size_t slab_size() const noexcept { return size_ / static_cast<std::size_t>(cells_[0]); }
  bool periodic(int axis) const noexcept { return kind_ == GridKind::torus || axis > 0; }

  /// Coordinate of the centre of cell `i` along `axis`.
  double center(int axis, int i) const noexcept;
  /// Multi-index of a linear cell index.
  std::array<int, kMaxDim> unflatten(std::size_t index) const noexcept;
  std::size_t flatten(const std::array<int, kMaxDim>& idx) const noexcept;

  bool operator==(const GridSpec& other) const noexcept;

 private:
  GridSpec(GridKind kind, int dim, std::array<int, kMaxDim> cells, double half_length);

  GridKind kind_ = GridKind::torus;
  int dim_ = 1;
  std::array<int, kMaxDim> cells_{1, 1, 1};
  std::array<std::size_t, kMaxDim> stride_{1, 1, 1};
  double half_length_ = 0.0;
  std::size_t size_ = 1;
};

/// Cell-averaged scalar field.
struct Field {
  GridSpec grid;
  std::vector<double> values;

  explicit Field(const GridSpec& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  Field(const GridSpec& g, std::vector<double> v);

  /// Samples `fn` at cell centres; the span holds dim() coordinates.
  static Field from_function(const GridSpec& g, const std::function<double(std::span<const double>)>& fn);

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  bool all_finite() const noexcept;
};

/// Throws GridMismatch unless the grids agree.
void require_same_grid(const Field& a, const Field& b, const char* context);

Field operator-(const Field& a, const Field& b);

}  // namespace prarefact
