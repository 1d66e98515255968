#ifndef HGLK_MATRIX_HPP
#define HGLK_MATRIX_HPP

// Dense real square matrices, row-major. Sized for n up to ~1024 on one core;
// everything here is O(n^2) storage and O(n^2..n^3) work by design.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hglk/fft.hpp"
#include "hglk/grid.hpp"

namespace hglk {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Mat {
  int n = 0;
  RVec data;  // row-major, n*n

  static Mat zero(int n) {
    Mat m;
    m.n = n;
    m.data.assign(static_cast<std::size_t>(n) * n, 0.0);
    return m;
  }

  static Mat identity(int n) {
    Mat m = zero(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
};

inline Mat diag_matrix(const RVec& d) {
  Mat m = Mat::zero(static_cast<int>(d.size()));
  for (int i = 0; i < m.n; ++i) m.at(i, i) = d[i];
  return m;
}

inline void require_square_match(const Mat& a, const Mat& b) {
  if (a.n != b.n) throw std::invalid_argument("matrix dimension mismatch");
}

inline Mat add(const Mat& a, const Mat& b) {
  require_square_match(a, b);
  Mat c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.data[i];
  return c;
}

inline Mat sub(const Mat& a, const Mat& b) {
  require_square_match(a, b);
  Mat c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] -= b.data[i];
  return c;
}

inline Mat scale(const Mat& a, double s) {
  Mat c = a;
  for (auto& v : c.data) v *= s;
  return c;
}

inline RVec matvec(const Mat& m, const RVec& x) {
  if (static_cast<int>(x.size()) != m.n) throw std::invalid_argument("matvec size mismatch");
  RVec y(m.n, 0.0);
  for (int i = 0; i < m.n; ++i) {
    const double* row = &m.data[static_cast<std::size_t>(i) * m.n];
    double acc = 0.0;
    for (int j = 0; j < m.n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

inline CVec matvec(const Mat& m, const CVec& x) {
  if (static_cast<int>(x.size()) != m.n) throw std::invalid_argument("matvec size mismatch");
  CVec y(m.n, cplx(0.0, 0.0));
  for (int i = 0; i < m.n; ++i) {
    const double* row = &m.data[static_cast<std::size_t>(i) * m.n];
    double re = 0.0, im = 0.0;
    for (int j = 0; j < m.n; ++j) {
      re += row[j] * x[j].real();
      im += row[j] * x[j].imag();
    }
    y[i] = cplx(re, im);
  }
  return y;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  require_square_match(a, b);
  const int n = a.n;
  Mat c = Mat::zero(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      const double* brow = &b.data[static_cast<std::size_t>(k) * n];
      double* crow = &c.data[static_cast<std::size_t>(i) * n];
      for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

inline Mat transpose(const Mat& a) {
  Mat t = Mat::zero(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

inline double frobenius(const Mat& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

inline double max_abs(const Mat& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::abs(v));
  return m;
}

// Cholesky factorization of a symmetric positive definite matrix.
// Kept as the solve path that is independent of any eigendecomposition.
class Cholesky {
 public:
  static Cholesky factor(const Mat& a) {
    Cholesky c;
    c.n_ = a.n;
    c.l_.assign(a.data.begin(), a.data.end());
    const int n = c.n_;
    for (int j = 0; j < n; ++j) {
      double d = c.l(j, j);
      for (int k = 0; k < j; ++k) d -= c.l(j, k) * c.l(j, k);
      if (!(d > 0.0)) throw NumericalError("matrix not positive definite");
      const double ljj = std::sqrt(d);
      c.lref(j, j) = ljj;
      for (int i = j + 1; i < n; ++i) {
        double s = c.l(i, j);
        for (int k = 0; k < j; ++k) s -= c.l(i, k) * c.l(j, k);
        c.lref(i, j) = s / ljj;
      }
    }
    return c;
  }

  RVec solve(const RVec& b) const {
    if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("solve size mismatch");
    RVec y(b);
    for (int i = 0; i < n_; ++i) {
      double s = y[i];
      for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < n_; ++k) s -= l(k, i) * y[k];
      y[i] = s / l(i, i);
    }
    return y;
  }

  CVec solve(const CVec& b) const {
    RVec re(n_), im(n_);
    for (int i = 0; i < n_; ++i) {
      re[i] = b[i].real();
      im[i] = b[i].imag();
    }
    RVec sr = solve(re), si = solve(im);
    CVec out(n_);
    for (int i = 0; i < n_; ++i) out[i] = cplx(sr[i], si[i]);
    return out;
  }

 private:
  int n_ = 0;
  RVec l_;
  double l(int i, int j) const { return l_[static_cast<std::size_t>(i) * n_ + j]; }
  double& lref(int i, int j) { return l_[static_cast<std::size_t>(i) * n_ + j]; }
};

// Inverse of a symmetric positive definite matrix via Cholesky solves.
inline Mat spd_inverse(const Mat& a) {
  const Cholesky ch = Cholesky::factor(a);
  const int n = a.n;
  Mat inv = Mat::zero(n);
  RVec e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    RVec col = ch.solve(e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) inv.at(i, j) = col[i];
  }
  // solve roundoff is the only asymmetry source
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (inv.at(i, j) + inv.at(j, i));
      inv.at(i, j) = v;
      inv.at(j, i) = v;
    }
  return inv;
}

// Dense matrix of a Fourier multiplier with real symbol sampled per DFT bin.
// Real-valued whenever symbol[k] == symbol[n-k] (even symbols), which holds for
// every symbol used here; the imaginary leakage is discarded after a check.
inline Mat multiplier_matrix(const Grid& g, const RVec& symbol) {
  if (static_cast<int>(symbol.size()) != g.n) throw std::invalid_argument("symbol size mismatch");
  const int n = g.n;
  Mat m = Mat::zero(n);
  CVec col(n);
  for (int j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), cplx(0.0, 0.0));
    col[j] = cplx(1.0, 0.0);
    fft_inplace(col);
    for (int k = 0; k < n; ++k) col[k] *= symbol[k];
    ifft_inplace(col);
    for (int i = 0; i < n; ++i) {
      if (std::abs(col[i].imag()) > 1e-9 * (1.0 + std::abs(col[i].real())))
        throw NumericalError("multiplier symbol is not even; matrix would be complex");
      m.at(i, j) = col[i].real();
    }
  }
  return m;
}

}  // namespace hglk

#endif  // HGLK_MATRIX_HPP
