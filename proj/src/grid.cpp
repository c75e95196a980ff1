#include "fellq/grid.hpp"

#include <sstream>
#include <stdexcept>

#include "fellq/detail/fft.hpp"

namespace fellq {

GridGeometry::GridGeometry(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("GridGeometry: no axes");
  total_ = 1;
  for (const auto& a : axes_) {
    if (a.size < 2) throw std::invalid_argument("GridGeometry: axis size must be >= 2");
    if (a.periodic && !detail::is_pow2(static_cast<std::size_t>(a.size)))
      throw std::invalid_argument("GridGeometry: periodic axis size must be a power of two");
    if (a.periodic && (a.size < 8 || a.size > 256))
      throw std::invalid_argument("GridGeometry: periodic axis size must lie in {8,...,256}");
    total_ *= static_cast<std::size_t>(a.size);
  }
  strides_.assign(axes_.size(), 1);
  for (int j = static_cast<int>(axes_.size()) - 2; j >= 0; --j)
    strides_[j] = strides_[j + 1] * static_cast<std::size_t>(axes_[j + 1].size);
}

std::size_t GridGeometry::offset(const std::vector<int>& idx) const {
  if (idx.size() != axes_.size()) throw std::invalid_argument("GridGeometry::offset: rank mismatch");
  std::size_t off = 0;
  for (std::size_t j = 0; j < idx.size(); ++j) off += strides_[j] * static_cast<std::size_t>(idx[j]);
  return off;
}

std::string GridGeometry::str() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    if (j) os << "x";
    os << axes_[j].size;
  }
  return os.str();
}

bool same_geometry(const GeometryPtr& a, const GeometryPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace fellq
