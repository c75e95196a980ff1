#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace fellq {

// Element t of the grading group Z^d.  Addition and negation are
// componentwise; the rank d is fixed per model.
class GroupIndex {
 public:
  GroupIndex() = default;
  explicit GroupIndex(std::vector<int> coords) : coords_(std::move(coords)) {}
  GroupIndex(std::initializer_list<int> coords) : coords_(coords) {}

  static GroupIndex zero(int rank) { return GroupIndex(std::vector<int>(rank, 0)); }

  int rank() const { return static_cast<int>(coords_.size()); }
  int operator[](int j) const { return coords_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& coords() const { return coords_; }

  bool is_zero() const;
  // max_j |t_j|
  int max_abs() const;

  GroupIndex operator+(const GroupIndex& o) const;
  GroupIndex operator-(const GroupIndex& o) const;
  GroupIndex operator-() const;

  bool operator==(const GroupIndex& o) const { return coords_ == o.coords_; }
  bool operator!=(const GroupIndex& o) const { return coords_ != o.coords_; }
  // Lexicographic; used for deterministic map ordering.
  bool operator<(const GroupIndex& o) const { return coords_ < o.coords_; }

  std::string str() const;

 private:
  std::vector<int> coords_;
};

// Point x of the dual torus T^d = (R/Z)^d.  Coordinates are stored in [0,1);
// floor-based reduction is applied on construction so negative inputs
// normalize deterministically.
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> coords);
  TorusPoint(std::initializer_list<double> coords);

  static TorusPoint zero(int rank) { return TorusPoint(std::vector<double>(rank, 0.0)); }

  int rank() const { return static_cast<int>(coords_.size()); }
  double operator[](int j) const { return coords_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& coords() const { return coords_; }

  TorusPoint operator+(const TorusPoint& o) const;
  TorusPoint operator-() const;

 private:
  std::vector<double> coords_;
};

// Duality pairing <x,t> = e^{2pi i sum_j x_j t_j}, a unit-modulus complex
// number.  Throws std::invalid_argument on rank mismatch.
std::complex<double> pairing(const TorusPoint& x, const GroupIndex& t);

}  // namespace fellq
