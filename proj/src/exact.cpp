#include "kwr/exact.hpp"

#include <algorithm>

namespace kwr {

std::optional<RatVec> solve_linear(RatMat A, RatVec b) {
  const size_t rows = A.size();
  const size_t cols = rows ? A[0].size() : 0;
  std::vector<int> pivot_col_of_row(rows, -1);
  size_t row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t p = row;
    while (p < rows && A[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[row]);
    std::swap(b[p], b[row]);
    Rat inv = A[row][col];
    for (size_t j = col; j < cols; ++j) A[row][j] /= inv;
    b[row] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == row || A[i][col] == 0) continue;
      Rat f = A[i][col];
      for (size_t j = col; j < cols; ++j) A[i][j] -= f * A[row][j];
      b[i] -= f * b[row];
    }
    pivot_col_of_row[row] = static_cast<int>(col);
    ++row;
  }
  for (size_t i = row; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  RatVec x(cols, Rat(0));
  for (size_t i = 0; i < row; ++i) x[pivot_col_of_row[i]] = b[i];
  return x;
}

int rank(RatMat A) {
  const size_t rows = A.size();
  const size_t cols = rows ? A[0].size() : 0;
  size_t row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t p = row;
    while (p < rows && A[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[row]);
    for (size_t i = row + 1; i < rows; ++i) {
      if (A[i][col] == 0) continue;
      Rat f = A[i][col] / A[row][col];
      for (size_t j = col; j < cols; ++j) A[i][j] -= f * A[row][j];
    }
    ++row;
  }
  return static_cast<int>(row);
}

Int ivec_gcd(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = gcd(g, x);
  return g;
}

IntMat hnf(IntMat rows) {
  if (rows.empty()) return rows;
  const size_t n = rows[0].size();
  size_t r = 0;
  for (size_t col = 0; col < n && r < rows.size(); ++col) {
    // Euclid down the column until a single nonzero entry remains at row r.
    while (true) {
      size_t best = rows.size();
      for (size_t i = r; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])) best = i;
      }
      if (best == rows.size()) break;  // column all zero below r
      std::swap(rows[best], rows[r]);
      if (rows[r][col] < 0)
        for (auto& x : rows[r]) x = -x;
      bool done = true;
      for (size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        Int q = rows[i][col] / rows[r][col];
        // round toward zero is fine; iterate until zero
        for (size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][col] != 0) {
      // reduce entries above the pivot into [0, pivot)
      for (size_t i = 0; i < r; ++i) {
        Int q = rows[i][col] / rows[r][col];
        if (rows[i][col] - q * rows[r][col] < 0) q -= 1;
        if (q != 0)
          for (size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
      }
      ++r;
    }
  }
  rows.resize(r);
  return rows;
}

IntMat integer_kernel(const IntMat& A) {
  const size_t m = A.size();
  const size_t n = m ? A[0].size() : 0;
  if (n == 0) return {};
  // Column-reduce [A; I] jointly: column ops on A are tracked in U.
  IntMat work(m, IntVec(n, 0));
  for (size_t i = 0; i < m; ++i) work[i] = A[i];
  IntMat U(n, IntVec(n, 0));
  for (size_t i = 0; i < n; ++i) U[i][i] = 1;  // columns of U track column ops

  size_t lead_col = 0;
  for (size_t row = 0; row < m && lead_col < n; ++row) {
    while (true) {
      size_t best = n;
      for (size_t c = lead_col; c < n; ++c) {
        if (work[row][c] == 0) continue;
        if (best == n || abs(work[row][c]) < abs(work[row][best])) best = c;
      }
      if (best == n) break;
      if (best != lead_col) {
        for (size_t i = 0; i < m; ++i) std::swap(work[i][best], work[i][lead_col]);
        for (size_t i = 0; i < n; ++i) std::swap(U[i][best], U[i][lead_col]);
      }
      bool done = true;
      for (size_t c = lead_col + 1; c < n; ++c) {
        if (work[row][c] == 0) continue;
        Int q = work[row][c] / work[row][lead_col];
        for (size_t i = 0; i < m; ++i) work[i][c] -= q * work[i][lead_col];
        for (size_t i = 0; i < n; ++i) U[i][c] -= q * U[i][lead_col];
        if (work[row][c] != 0) done = false;
      }
      if (done) break;
    }
    if (work[row][lead_col] != 0) ++lead_col;
  }
  // Columns lead_col..n-1 of the transformed identity span the kernel.
  IntMat kernel;
  for (size_t c = lead_col; c < n; ++c) {
    IntVec v(n);
    for (size_t i = 0; i < n; ++i) v[i] = U[i][c];
    // verify (cheap, defends against logic slips)
    for (size_t i = 0; i < m; ++i) {
      Int s = 0;
      for (size_t j = 0; j < n; ++j) s += A[i][j] * v[j];
      if (s != 0) throw InternalError("integer_kernel produced a non-kernel vector");
    }
    kernel.push_back(std::move(v));
  }
  return kernel;
}

IntMat saturate(const IntMat& rows) {
  if (rows.empty()) return {};
  IntMat k1 = integer_kernel(rows);
  if (k1.empty()) {
    // full Q-span: saturation is Z^n
    const size_t n = rows[0].size();
    IntMat id(n, IntVec(n, 0));
    for (size_t i = 0; i < n; ++i) id[i][i] = 1;
    return id;
  }
  return hnf(integer_kernel(k1));
}

}  // namespace kwr
