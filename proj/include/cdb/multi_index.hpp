#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdb {

/// A spatial multi-index alpha = (a_1,...,a_n) of derivative counts.
/// Dimensions 1..5 are supported throughout the library.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int n) : e_(static_cast<std::size_t>(check_dim(n)), 0) {}
  MultiIndex(std::initializer_list<int> v) : e_(v) {
    check_dim(static_cast<int>(e_.size()));
    for (int k : e_)
      if (k < 0) throw std::invalid_argument("MultiIndex: negative entry");
  }

  static MultiIndex unit(int n, int axis, int count = 1) {
    MultiIndex a(n);
    a.e_[static_cast<std::size_t>(axis)] = count;
    return a;
  }

  int dim() const { return static_cast<int>(e_.size()); }
  int order() const {
    int s = 0;
    for (int k : e_) s += k;
    return s;
  }
  int parity() const { return order() % 2; }

  /// alpha! as a double; exact for |alpha| <= 12.
  double factorial() const {
    double f = 1.0;
    for (int k : e_)
      for (int j = 2; j <= k; ++j) f *= j;
    return f;
  }

  int operator[](int axis) const { return e_[static_cast<std::size_t>(axis)]; }
  int& operator[](int axis) { return e_[static_cast<std::size_t>(axis)]; }

  MultiIndex plus(int axis, int count = 1) const {
    MultiIndex a = *this;
    a.e_[static_cast<std::size_t>(axis)] += count;
    return a;
  }

  bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
  bool operator<(const MultiIndex& o) const { return e_ < o.e_; }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (i) s += ':';
      s += std::to_string(e_[i]);
    }
    return s;
  }

  /// All multi-indices of the given order in dimension n.
  static std::vector<MultiIndex> all_of_order(int n, int order);

 private:
  static int check_dim(int n) {
    if (n < 1 || n > 5) throw std::invalid_argument("MultiIndex: dimension must be 1..5");
    return n;
  }
  std::vector<int> e_;
};

inline std::vector<MultiIndex> MultiIndex::all_of_order(int n, int order) {
  std::vector<MultiIndex> out;
  MultiIndex a(n);
  // odometer over compositions of `order` into n parts
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  while (true) {
    int s = 0;
    for (int v : c) s += v;
    if (s == order) {
      for (int i = 0; i < n; ++i) a[i] = c[static_cast<std::size_t>(i)];
      out.push_back(a);
    }
    int i = n - 1;
    while (i >= 0) {
      if (++c[static_cast<std::size_t>(i)] > order) {
        c[static_cast<std::size_t>(i)] = 0;
        --i;
      } else {
        break;
      }
    }
    if (i < 0) break;
  }
  return out;
}

/// Constant convection direction a in R^n.
struct DirectionVector {
  std::vector<double> a;

  DirectionVector() = default;
  explicit DirectionVector(std::vector<double> v) : a(std::move(v)) {}
  DirectionVector(std::initializer_list<double> v) : a(v) {}

  int dim() const { return static_cast<int>(a.size()); }
  double operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
};

}  // namespace cdb
