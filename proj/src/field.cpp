#include "cdb/field.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(__BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__,
              "checkpoint format is little-endian");

namespace cdb {

void unflatten(const Grid& g, std::size_t idx, int* out) {
  for (int j = g.n - 1; j >= 0; --j) {
    out[j] = static_cast<int>(idx % static_cast<std::size_t>(g.N));
    idx /= static_cast<std::size_t>(g.N);
  }
}

double Field::l1() const {
  double s = 0.0;
  for (double v : values) s += std::abs(v);
  return s * grid.cell_volume();
}

double Field::l2() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s * grid.cell_volume());
}

double Field::linf() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

double Field::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

double Field::weighted_l1(double mu) const {
  int idx[5];
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    unflatten(grid, i, idx);
    double r2 = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      const double x = grid.coord(idx[j]);
      r2 += x * x;
    }
    s += std::pow(r2, 0.5 * mu) * std::abs(values[i]);
  }
  return s * grid.cell_volume();
}

double Field::signed_moment(const MultiIndex& beta) const {
  if (beta.dim() != grid.n) throw std::invalid_argument("signed_moment: dimension mismatch");
  int idx[5];
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) continue;
    unflatten(grid, i, idx);
    double w = 1.0;
    for (int j = 0; j < grid.n; ++j) {
      const double x = -grid.coord(idx[j]);
      for (int q = 0; q < beta[j]; ++q) w *= x;
    }
    s += w * values[i];
  }
  return s * grid.cell_volume();
}

double Field::boundary_shell_max() const {
  int idx[5];
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    unflatten(grid, i, idx);
    bool shell = false;
    for (int j = 0; j < grid.n; ++j)
      if (idx[j] == 0 || idx[j] == grid.N - 1) {
        shell = true;
        break;
      }
    if (shell) s = std::max(s, std::abs(values[i]));
  }
  return s;
}

bool Field::has_nan() const {
  for (double v : values)
    if (!std::isfinite(v)) return true;
  return false;
}

void save_field(const Field& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_field: cannot open " + path);
  out.write("CDBF1", 5);
  const std::uint32_t n32 = static_cast<std::uint32_t>(f.grid.n);
  const std::uint32_t N32 = static_cast<std::uint32_t>(f.grid.N);
  out.write(reinterpret_cast<const char*>(&n32), 4);
  out.write(reinterpret_cast<const char*>(&N32), 4);
  out.write(reinterpret_cast<const char*>(&f.grid.L), 8);
  out.write(reinterpret_cast<const char*>(&f.t), 8);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("save_field: write failed for " + path);
}

Field load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_field: cannot open " + path);
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, "CDBF1", 5) != 0)
    throw std::runtime_error("load_field: bad magic in " + path);
  std::uint32_t n32 = 0, N32 = 0;
  double L = 0.0, t = 0.0;
  in.read(reinterpret_cast<char*>(&n32), 4);
  in.read(reinterpret_cast<char*>(&N32), 4);
  in.read(reinterpret_cast<char*>(&L), 8);
  in.read(reinterpret_cast<char*>(&t), 8);
  Grid g{static_cast<int>(n32), static_cast<int>(N32), L};
  Field f(g, t);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("load_field: truncated file " + path);
  return f;
}

}  // namespace cdb
