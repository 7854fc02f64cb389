#include "wildknot/smith.hpp"

#include <utility>

namespace wildknot {

namespace {

// Moves a nonzero entry of least absolute value in the trailing block to (t, t).
bool place_min_pivot(IntMatrix& a, std::size_t t) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t bi = rows, bj = cols;
  Integer best;
  for (std::size_t i = t; i < rows; ++i)
    for (std::size_t j = t; j < cols; ++j) {
      if (a[i][j] == 0) continue;
      const Integer v = abs(a[i][j]);
      if (bi == rows || v < best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  if (bi == rows) return false;
  std::swap(a[t], a[bi]);
  for (auto& row : a) std::swap(row[t], row[bj]);
  return true;
}

}  // namespace

SmithForm smith_normal_form(IntMatrix a) {
  SmithForm out;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    if (!place_min_pivot(a, t)) break;
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        const Integer q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        const Integer q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) dirty = true;
      }
      if (dirty) {
        // a smaller remainder appeared in row or column t
        place_min_pivot(a, t);
        continue;
      }
      // pivot must divide the trailing block
      std::size_t bad_row = rows;
      for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad_row = i;
            break;
          }
      if (bad_row == rows) break;
      for (std::size_t j = t; j < cols; ++j) a[t][j] += a[bad_row][j];
    }
    out.invariant_factors.push_back(abs(a[t][t]));
    ++out.rank;
  }
  return out;
}

}  // namespace wildknot
