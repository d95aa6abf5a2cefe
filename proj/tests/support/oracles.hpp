#pragma once

// Reference implementations used only by tests. They deliberately avoid
// Eigen so that library results are checked against independent arithmetic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, std::vector<double>(c, 0.0)); }

/// Sample covariance, denominator n - 1, computed with a two-pass mean.
inline Matrix covariance(const Matrix &rows) {
  const std::size_t n = rows.size();
  const std::size_t m = rows.front().size();
  std::vector<double> mean(m, 0.0);
  for (const auto &r : rows) {
    for (std::size_t j = 0; j < m; ++j) {
      mean[j] += r[j] / static_cast<double>(n);
    }
  }
  Matrix s = zeros(m, m);
  for (const auto &r : rows) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        s[a][b] += (r[a] - mean[a]) * (r[b] - mean[b]) / static_cast<double>(n - 1);
      }
    }
  }
  return s;
}

struct Eigen {
  std::vector<double> values; // descending
  Matrix vectors;             // vectors[k] is the k-th eigenvector
};

/// Cyclic Jacobi rotations run until the off-diagonal mass vanishes. Each
/// eigenvector is signed so that its largest-magnitude entry is positive.
inline Eigen jacobi(Matrix a) {
  const std::size_t m = a.size();
  Matrix v = zeros(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    v[i][i] = 1.0;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        off += a[p][q] * a[p][q];
      }
    }
    if (off < 1e-30) {
      break;
    }
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        if (a[p][q] == 0.0) {
          continue;
        }
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < m; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });
  Eigen out;
  for (std::size_t k : order) {
    out.values.push_back(a[k][k]);
    std::vector<double> vec(m);
    for (std::size_t i = 0; i < m; ++i) {
      vec[i] = v[i][k];
    }
    std::size_t arg = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (std::abs(vec[i]) > std::abs(vec[arg]) * (1.0 + 1e-9)) {
        arg = i;
      }
    }
    if (vec[arg] < 0) {
      for (double &x : vec) {
        x = -x;
      }
    }
    out.vectors.push_back(vec);
  }
  return out;
}

/// Gauss-Jordan inverse with partial pivoting; empty when singular.
inline std::optional<Matrix> invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    inv[i][i] = 1.0;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
        piv = r;
      }
    }
    if (std::abs(a[piv][col]) < 1e-14) {
      return std::nullopt;
    }
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const double d = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= d;
      inv[col][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) {
        continue;
      }
      const double f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

struct Ols {
  std::vector<double> beta;
  double rss = 0.0;
};

/// beta = (X'X)^-1 X'y by explicit inversion.
inline std::optional<Ols> normal_equations(const Matrix &x, const std::vector<double> &y) {
  const std::size_t n = x.size();
  const std::size_t q = x.front().size();
  Matrix xtx = zeros(q, q);
  std::vector<double> xty(q, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < q; ++a) {
      xty[a] += x[i][a] * y[i];
      for (std::size_t b = 0; b < q; ++b) {
        xtx[a][b] += x[i][a] * x[i][b];
      }
    }
  }
  const auto inv = invert(xtx);
  if (!inv) {
    return std::nullopt;
  }
  Ols out;
  out.beta.assign(q, 0.0);
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      out.beta[a] += (*inv)[a][b] * xty[b];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double fit = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
      fit += x[i][a] * out.beta[a];
    }
    out.rss += (y[i] - fit) * (y[i] - fit);
  }
  return out;
}

inline double aic(double rss, std::size_t n, std::size_t q) {
  const double nd = static_cast<double>(n);
  return nd * std::log(std::max(rss / nd, 1e-300)) + 2.0 * static_cast<double>(q);
}

} // namespace oracle
