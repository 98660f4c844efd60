#include "lp.hpp"

#include <cstddef>
#include <utility>

namespace anglelab::detail {

namespace {

constexpr double kEps = 1e-12;

class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
          const std::vector<double>& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        basis_(m_),
        nonbasis_(n_ + 1),
        D_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) D_[i][j] = A[i][j];
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      D_[i][n_] = -1.0;
      D_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasis_[j] = j;
      D_[m_][j] = -c[j];
    }
    nonbasis_[n_] = -1;
    D_[m_ + 1][n_] = 1.0;
  }

  LpResult solve() {
    LpResult out;
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
    if (m_ > 0 && D_[r][n_ + 1] < -kEps) {
      pivot(r, n_);
      if (!simplex(1) || D_[m_ + 1][n_ + 1] < -kEps) {
        out.status = LpStatus::infeasible;
        return out;
      }
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        int s = -1;
        for (int j = 0; j <= n_; ++j)
          if (s == -1 || D_[i][j] < D_[i][s] ||
              (D_[i][j] == D_[i][s] && nonbasis_[j] < nonbasis_[s]))
            s = j;
        pivot(i, s);
      }
    }
    if (!simplex(2)) {
      out.status = LpStatus::unbounded;
      return out;
    }
    out.status = LpStatus::optimal;
    out.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) out.x[basis_[i]] = D_[i][n_ + 1];
    out.value = D_[m_][n_ + 1];
    return out;
  }

 private:
  void pivot(int r, int s) {
    const double inv = 1.0 / D_[r][s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      for (int j = 0; j < n_ + 2; ++j)
        if (j != s) D_[i][j] -= D_[r][j] * D_[i][s] * inv;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) D_[r][j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) D_[i][s] *= -inv;
    D_[r][s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  bool simplex(int phase) {
    const int x = phase == 1 ? m_ + 1 : m_;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (phase == 2 && nonbasis_[j] == -1) continue;
        if (s == -1 || D_[x][j] < D_[x][s] ||
            (D_[x][j] == D_[x][s] && nonbasis_[j] < nonbasis_[s]))
          s = j;
      }
      if (D_[x][s] > -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (D_[i][s] < kEps) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = D_[i][n_ + 1] / D_[i][s];
        const double rhs = D_[r][n_ + 1] / D_[r][s];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[r])) r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  std::vector<int> basis_, nonbasis_;
  std::vector<std::vector<double>> D_;
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<double>>& A,
                  const std::vector<double>& b, const std::vector<double>& c) {
  return Tableau(A, b, c).solve();
}

}  // namespace anglelab::detail
