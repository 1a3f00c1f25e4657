#pragma once

#include <map>
#include <string>
#include <vector>

#include "cdb/multi_index.hpp"

namespace cdb {

/// Parity rule for profile products: \int x^beta (U_{m1} U_{m2}) dx = 0
/// whenever |beta| + m1 + m2 is odd, by the (-1)^m symmetry of U_m.
inline bool parity_vanishes(const MultiIndex& beta, int m1, int m2) {
  return (beta.order() + m1 + m2) % 2 == 1;
}

/// Key of a renormalized space-time moment
///   \int_0^inf \int (-s)^l (-y)^beta (u^2 - sum_{m1+m2<=k} U_{m1}U_{m2}) dy ds,
/// with renorm_level = k (-1 means no subtraction).
struct StKey {
  int l = 0;
  MultiIndex beta;
  int renorm_level = -1;
  bool operator<(const StKey& o) const {
    if (l != o.l) return l < o.l;
    if (renorm_level != o.renorm_level) return renorm_level < o.renorm_level;
    return beta < o.beta;
  }
};

struct StMomentEntry {
  double value = 0.0;
  bool converged = false;
  double tail_bound = 0.0;
  std::string flag;  // "", "parity", "divergent", ...
};

/// Initial-data moments and renormalized space-time moments of u^2.
struct MomentTable {
  int n = 3;
  double M0 = 0.0;
  std::vector<double> M1;                       // corrected first moment
  std::map<MultiIndex, double> alpha_moments;   // \int (-y)^alpha u0 dy
  std::map<StKey, StMomentEntry> st_moments;

  double alpha_moment(const MultiIndex& a) const {
    auto it = alpha_moments.find(a);
    return it == alpha_moments.end() ? 0.0 : it->second;
  }
  const StMomentEntry* st_moment(int l, const MultiIndex& beta, int level) const {
    auto it = st_moments.find(StKey{l, beta, level});
    return it == st_moments.end() ? nullptr : &it->second;
  }
};

}  // namespace cdb
