#include "rideshare/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace rideshare {

Vec solve_linear(Matrix a, Vec b) {
  const int n = a.size();
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("solve_linear: size mismatch");
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(a(col, col));
    for (int i = col + 1; i < n; ++i) {
      double v = std::fabs(a(i, col));
      if (v > best) { best = v; piv = i; }
    }
    if (best < 1e-13) throw std::runtime_error("solve_linear: singular matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (int i = col + 1; i < n; ++i) {
      double factor = a(i, col) / a(col, col);
      if (factor == 0.0) continue;
      for (int j = col; j < n; ++j) a(i, j) -= factor * a(col, j);
      b[i] -= factor * b[col];
    }
  }
  Vec x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

bool strongly_connected(const Matrix& t, double tol) {
  const int n = t.size();
  if (n == 0) return false;
  auto reach_all = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        double w = transpose ? t(v, u) : t(u, v);
        if (w > tol && !seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reach_all(false) && reach_all(true);
}

Vec chain_stationary(const Matrix& transition) {
  const int n = transition.size();
  if (!strongly_connected(transition))
    throw std::runtime_error("chain_stationary: chain is not irreducible");
  // x^T T = x^T  <=>  (T^T - I) x = 0; swap one redundant row for sum(x) = 1.
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = transition(j, i) - (i == j ? 1.0 : 0.0);
  Vec rhs(n, 0.0);
  for (int j = 0; j < n; ++j) m(0, j) = 1.0;
  rhs[0] = 1.0;
  Vec x = solve_linear(m, rhs);
  for (double v : x)
    if (!(v > -1e-12)) throw std::runtime_error("chain_stationary: negative component");
  double s = 0;
  for (double v : x) s += v;
  for (double& v : x) v = (v < 0 ? 0.0 : v) / s;
  return x;
}

}  // namespace rideshare
