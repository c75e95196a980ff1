#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace fellq {

// One base-manifold coordinate axis.  Periodic axes sample the half-open
// interval [start, start+length) at step length/size and must have a
// power-of-two size (exact cyclic shifts, radix-2 interpolation).
// Non-periodic axes sample the closed interval [start, start+length] at step
// length/(size-1), so both endpoints and midpoints like pi/4 land on grid.
struct Axis {
  std::string label;
  int size = 0;
  bool periodic = true;
  double start = 0.0;
  double length = 1.0;

  double coordinate(int k) const {
    const double step = periodic ? length / size : length / (size - 1);
    return start + k * step;
  }
  bool operator==(const Axis& o) const {
    return size == o.size && periodic == o.periodic && start == o.start && length == o.length;
  }
};

// Uniform tensor-product grid over the model's base manifold.  Sample storage
// is row major with axis 0 slowest.
class GridGeometry {
 public:
  explicit GridGeometry(std::vector<Axis> axes);

  int rank() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int j) const { return axes_[static_cast<std::size_t>(j)]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t total() const { return total_; }
  std::size_t stride(int j) const { return strides_[static_cast<std::size_t>(j)]; }

  // Index of the grid point (i_0, ..., i_{r-1}).
  std::size_t offset(const std::vector<int>& idx) const;

  bool operator==(const GridGeometry& o) const { return axes_ == o.axes_; }

  std::string str() const;

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

using GeometryPtr = std::shared_ptr<const GridGeometry>;

bool same_geometry(const GeometryPtr& a, const GeometryPtr& b);

}  // namespace fellq
