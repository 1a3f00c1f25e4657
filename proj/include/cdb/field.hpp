#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdb/multi_index.hpp"

namespace cdb {

/// Uniform periodic grid on [-L, L)^n with N points per axis.
struct Grid {
  int n = 2;
  int N = 64;
  double L = 12.0;

  double h() const { return 2.0 * L / N; }
  std::size_t size() const {
    std::size_t s = 1;
    for (int j = 0; j < n; ++j) s *= static_cast<std::size_t>(N);
    return s;
  }
  double coord(int i) const { return -L + h() * i; }
  double cell_volume() const {
    double v = 1.0;
    for (int j = 0; j < n; ++j) v *= h();
    return v;
  }
  bool operator==(const Grid& o) const { return n == o.n && N == o.N && L == o.L; }
};

/// Sampled scalar field; values row-major with axis 0 slowest.
struct Field {
  Grid grid;
  double t = 0.0;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double time = 0.0)
      : grid(g), t(time), values(g.size(), 0.0) {}

  double l1() const;
  double l2() const;
  double linf() const;
  double mass() const;
  /// \int |x|^mu |u| dx
  double weighted_l1(double mu) const;
  /// \int (-y)^beta u dy  (rectangle rule; spectrally accurate for decaying data)
  double signed_moment(const MultiIndex& beta) const;
  /// max |u| over the outermost grid shell (any index 0 or N-1)
  double boundary_shell_max() const;
  bool has_nan() const;
};

/// Decompose a flat row-major index into per-axis indices.
void unflatten(const Grid& g, std::size_t idx, int* out);

/// Binary checkpoint: magic "CDBF1", u32 n, u32 N, f64 L, f64 t, then N^n
/// f64 values row-major, all little-endian.
void save_field(const Field& f, const std::string& path);
Field load_field(const std::string& path);

}  // namespace cdb
