#ifndef HGLK_EIG_HPP
#define HGLK_EIG_HPP

// Symmetric eigensolver: Householder tridiagonalization followed by implicit
// QL with Wilkinson-style shifts. Port of the public-domain JAMA routines.
// Eigenvalues ascending; eigenvectors are Euclidean-orthonormal columns.

#include <cmath>
#include <stdexcept>

#include "hglk/matrix.hpp"

namespace hglk {

struct EigResult {
  RVec lambda;  // ascending
  Mat vectors;  // column k is the eigenvector for lambda[k]
};

namespace detail {

inline void tred2(Mat& v, RVec& d, RVec& e) {
  const int n = v.n;
  for (int j = 0; j < n; ++j) d[j] = v.at(n - 1, j);
  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v.at(i - 1, j);
        v.at(i, j) = 0.0;
        v.at(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;
      for (int j = 0; j < i; ++j) {
        f = d[j];
        v.at(j, i) = f;
        g = e[j] + v.at(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v.at(k, j) * d[k];
          e[k] += v.at(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v.at(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v.at(i - 1, j);
        v.at(i, j) = 0.0;
      }
    }
    d[i] = h;
  }
  for (int i = 0; i < n - 1; ++i) {
    v.at(n - 1, i) = v.at(i, i);
    v.at(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v.at(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v.at(k, i + 1) * v.at(k, j);
        for (int k = 0; k <= i; ++k) v.at(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v.at(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v.at(n - 1, j);
    v.at(n - 1, j) = 0.0;
  }
  v.at(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

inline void tql2(Mat& v, RVec& d, RVec& e) {
  const int n = v.n;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0, tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 100) throw NumericalError("eigensolver QL iteration failed to converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            h = v.at(k, i + 1);
            v.at(k, i + 1) = s * v.at(k, i) + c * h;
            v.at(k, i) = c * v.at(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  // ascending order, vectors follow their eigenvalue
  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    double p = d[i];
    for (int j = i + 1; j < n; ++j) {
      if (d[j] < p) {
        k = j;
        p = d[j];
      }
    }
    if (k != i) {
      d[k] = d[i];
      d[i] = p;
      for (int j = 0; j < n; ++j) std::swap(v.at(j, i), v.at(j, k));
    }
  }
}

}  // namespace detail

inline EigResult symmetric_eigen(const Mat& a) {
  const int n = a.n;
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(a.at(i, j) - a.at(j, i)));
  if (asym > 0.0) throw std::invalid_argument("symmetric_eigen requires an exactly symmetric matrix");
  EigResult r;
  r.vectors = a;
  r.lambda.assign(n, 0.0);
  RVec e(n, 0.0);
  detail::tred2(r.vectors, r.lambda, e);
  detail::tql2(r.vectors, r.lambda, e);
  return r;
}

}  // namespace hglk

#endif  // HGLK_EIG_HPP
