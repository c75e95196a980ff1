#include "fellq/grading.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace fellq {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double mod1(double v) {
  const double r = v - std::floor(v);
  // floor can leave r == 1.0 when v is a tiny negative number
  return (r >= 1.0) ? r - 1.0 : r;
}
}  // namespace

bool GroupIndex::is_zero() const {
  for (int c : coords_)
    if (c != 0) return false;
  return true;
}

int GroupIndex::max_abs() const {
  int m = 0;
  for (int c : coords_) m = std::max(m, std::abs(c));
  return m;
}

GroupIndex GroupIndex::operator+(const GroupIndex& o) const {
  if (coords_.size() != o.coords_.size())
    throw std::invalid_argument("GroupIndex: rank mismatch in +");
  std::vector<int> r(coords_.size());
  for (std::size_t j = 0; j < coords_.size(); ++j) r[j] = coords_[j] + o.coords_[j];
  return GroupIndex(std::move(r));
}

GroupIndex GroupIndex::operator-(const GroupIndex& o) const { return *this + (-o); }

GroupIndex GroupIndex::operator-() const {
  std::vector<int> r(coords_.size());
  for (std::size_t j = 0; j < coords_.size(); ++j) r[j] = -coords_[j];
  return GroupIndex(std::move(r));
}

std::string GroupIndex::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (j) os << ",";
    os << coords_[j];
  }
  os << ")";
  return os.str();
}

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  for (auto& c : coords_) c = mod1(c);
}

TorusPoint::TorusPoint(std::initializer_list<double> coords) : coords_(coords) {
  for (auto& c : coords_) c = mod1(c);
}

TorusPoint TorusPoint::operator+(const TorusPoint& o) const {
  if (coords_.size() != o.coords_.size())
    throw std::invalid_argument("TorusPoint: rank mismatch in +");
  std::vector<double> r(coords_.size());
  for (std::size_t j = 0; j < coords_.size(); ++j) r[j] = coords_[j] + o.coords_[j];
  return TorusPoint(std::move(r));
}

TorusPoint TorusPoint::operator-() const {
  std::vector<double> r(coords_.size());
  for (std::size_t j = 0; j < coords_.size(); ++j) r[j] = -coords_[j];
  return TorusPoint(std::move(r));
}

std::complex<double> pairing(const TorusPoint& x, const GroupIndex& t) {
  if (x.rank() != t.rank())
    throw std::invalid_argument("pairing: dimension mismatch between x and t");
  // t is integral, so each term may be reduced to (-1/2, 1/2] before
  // accumulating; the reduction is odd in t, which keeps the conjugation
  // symmetry <x,-t> = conj<x,t> exact and the bicharacter law tight
  double phase = 0.0;
  for (int j = 0; j < t.rank(); ++j) {
    const double v = x[j] * t[j];
    phase += v - std::round(v);
  }
  phase -= std::round(phase);
  return {std::cos(kTwoPi * phase), std::sin(kTwoPi * phase)};
}

}  // namespace fellq
