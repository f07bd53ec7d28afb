#include "opalg/ratmat.hpp"

#include <algorithm>
#include <stdexcept>

namespace opalg {

Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec matvec(const RatMat& m, const RatVec& v) {
  RatVec out;
  out.reserve(m.size());
  for (const auto& row : m) out.push_back(dot(row, v));
  return out;
}

RatMat identity_mat(int n) {
  RatMat m(n, RatVec(n, Rat(0)));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

std::vector<int> rref_inplace(RatMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (m[i][c] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[r], m[pivot]);
    const Rat inv = Rat(1) / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rat f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank(RatMat m) { return static_cast<int>(rref_inplace(m).size()); }

RatMat kernel_basis(const RatMat& a, int cols) {
  RatMat m = a;
  for (auto& row : m) {
    if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("kernel_basis: ragged matrix");
  }
  const std::vector<int> pivots = rref_inplace(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  RatMat basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(cols, Rat(0));
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) {
      v[pivots[r]] = -m[r][free];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatVec> solve_linear(RatMat a, RatVec b) {
  const int rows = static_cast<int>(a.size());
  if (rows == 0) return RatVec{};
  const int cols = static_cast<int>(a[0].size());
  for (int i = 0; i < rows; ++i) a[i].push_back(b[i]);
  const std::vector<int> pivots = rref_inplace(a);
  // Inconsistent iff some pivot lands in the augmented column.
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  RatVec x(cols, Rat(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a[r][cols];
  return x;
}

std::optional<RatMat> invert(RatMat m) {
  const int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i) {
    const RatMat id = identity_mat(n);
    m[i].insert(m[i].end(), id[i].begin(), id[i].end());
  }
  const std::vector<int> pivots = rref_inplace(m);
  if (static_cast<int>(pivots.size()) != n) return std::nullopt;
  for (int i = 0; i < n; ++i) {
    if (pivots[i] != i) return std::nullopt;
  }
  RatMat inv(n, RatVec(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  }
  return inv;
}

RatVec primitive(const RatVec& v, bool orient) {
  Int lcm_den(1);
  for (const auto& x : v) lcm_den = lcm(lcm_den, denominator(x));
  Int g(0);
  RatVec out(v.size());
  std::vector<Int> ints(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    ints[i] = numerator(v[i]) * (lcm_den / denominator(v[i]));
    g = gcd(g, ints[i]);
  }
  if (g == 0) return RatVec(v.size(), Rat(0));
  int sign = 1;
  if (orient) {
    for (const auto& x : ints) {
      if (x != 0) {
        sign = x < 0 ? -1 : 1;
        break;
      }
    }
  }
  for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(ints[i] * sign / g);
  return out;
}

bool ratvec_less(const RatVec& a, const RatVec& b) {
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

void sort_rows(RatMat& rows) { std::sort(rows.begin(), rows.end(), ratvec_less); }

bool is_zero_vec(const RatVec& v) {
  for (const auto& x : v) {
    if (x != 0) return false;
  }
  return true;
}

}  // namespace opalg
