#ifndef NNFOCK_LINALG_HPP
#define NNFOCK_LINALG_HPP

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include <optional>
#include <stdexcept>
#include <vector>

#include "nnfock/scalar.hpp"

namespace nnfock {

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
S max_abs(const Mat<S>& m) {
  S best = scalar_traits<S>::zero();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      S a = m(i, j) < S(0) ? S(-m(i, j)) : m(i, j);
      if (a > best) best = a;
    }
  return best;
}

template <class S>
S max_abs(const Vec<S>& v) {
  S best = scalar_traits<S>::zero();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    S a = v(i) < S(0) ? S(-v(i)) : v(i);
    if (a > best) best = a;
  }
  return best;
}

/// Null-space basis (columns). Exact Gaussian elimination for rational
/// scalars; pivot-threshold elimination for doubles.
template <class S>
Mat<S> kernel_basis(Mat<S> a, double tol = 1e-10) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<Eigen::Index> pivot_col;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index best = -1;
    S best_abs = scalar_traits<S>::zero();
    for (Eigen::Index i = r; i < rows; ++i) {
      S v = a(i, c) < S(0) ? S(-a(i, c)) : a(i, c);
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    bool zero_col = scalar_traits<S>::is_exact ? (best < 0 || best_abs == S(0))
                                               : (best < 0 || to_double(best_abs) <= tol);
    if (zero_col) continue;
    a.row(r).swap(a.row(best));
    a.row(r) /= a(r, c);
    for (Eigen::Index i = 0; i < rows; ++i)
      if (i != r && a(i, c) != S(0)) a.row(i) -= a(i, c) * a.row(r);
    pivot_col.push_back(c);
    ++r;
  }
  const Eigen::Index rank = r;
  Mat<S> basis(cols, cols - rank);
  basis.setZero();
  Eigen::Index k = 0;
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    basis(c, k) = S(1);
    for (Eigen::Index i = 0; i < rank; ++i) basis(pivot_col[i], k) = -a(i, c);
    ++k;
  }
  return basis;
}

template <class S>
Eigen::Index matrix_rank(const Mat<S>& a, double tol = 1e-10) {
  return a.cols() - kernel_basis(a, tol).cols();
}

/// Solves a x = b exactly / with partial pivoting; empty if singular.
template <class S>
std::optional<Vec<S>> solve_linear(Mat<S> a, Vec<S> b, double tol = 1e-12) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_linear: shape");
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index best = c;
    S best_abs = a(c, c) < S(0) ? S(-a(c, c)) : a(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      S v = a(i, c) < S(0) ? S(-a(i, c)) : a(i, c);
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    bool singular = scalar_traits<S>::is_exact ? best_abs == S(0) : to_double(best_abs) <= tol;
    if (singular) return std::nullopt;
    a.row(c).swap(a.row(best));
    std::swap(b(c), b(best));
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (a(i, c) == S(0)) continue;
      S f = a(i, c) / a(c, c);
      a.row(i) -= f * a.row(c);
      b(i) -= f * b(c);
    }
  }
  Vec<S> x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    S acc = b(i);
    for (Eigen::Index j = i + 1; j < n; ++j) acc -= a(i, j) * x(j);
    x(i) = acc / a(i, i);
  }
  return x;
}

/// True iff symmetric `a` is positive semidefinite. Exact mode uses
/// fraction-free symmetric elimination, float mode eigenvalues.
template <class S>
bool is_psd(const Mat<S>& a, double tol = 1e-10);

template <>
inline bool is_psd<Rational>(const Mat<Rational>& a0, double) {
  Mat<Rational> a = a0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (a(k, k) < 0) return false;
    if (a(k, k) == 0) {
      // PSD forces the whole row/column to vanish.
      for (Eigen::Index j = k + 1; j < n; ++j)
        if (a(k, j) != 0) return false;
      continue;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (Eigen::Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
    for (Eigen::Index j = k + 1; j < n; ++j) a(k, j) = 0;
  }
  return true;
}

template <>
inline bool is_psd<double>(const Mat<double>& a, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat<double>> es(0.5 * (a + a.transpose()),
                                                Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

/// Smallest eigenvalue of a symmetric matrix (float only).
inline double min_eigenvalue(const Mat<double>& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat<double>> es(0.5 * (a + a.transpose()),
                                                Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// True iff symmetric `a` is positive definite (exact: all leading pivots > 0).
template <class S>
bool is_positive_definite(const Mat<S>& a, double tol = 1e-10);

template <>
inline bool is_positive_definite<Rational>(const Mat<Rational>& a0, double) {
  Mat<Rational> a = a0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (a(k, k) <= 0) return false;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

template <>
inline bool is_positive_definite<double>(const Mat<double>& a, double tol) {
  if (a.rows() == 0) return true;
  return min_eigenvalue(a) > tol;
}

/// Spectral norm (float).
inline double spectral_norm(const Mat<double>& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat<double>> svd(a);
  return svd.singularValues()(0);
}

/// Square root factor R of a PSD matrix g = R^T R, rows of R spanning the
/// positive eigenspace; eigenvalues below `kernel_tol` are treated as null.
struct GramFactor {
  Mat<double> r;       // rank x n
  Mat<double> r_pinv;  // n x rank, R^+ = U diag(1/sqrt(lambda))
  Eigen::Index rank = 0;
  double min_kept = 0.0;    // smallest retained eigenvalue
  double max_dropped = 0.0; // largest dropped |eigenvalue|
};

inline GramFactor gram_factor(const Mat<double>& g, double kernel_tol = 1e-10) {
  GramFactor f;
  const Eigen::Index n = g.rows();
  if (n == 0) {
    f.r.resize(0, 0);
    f.r_pinv.resize(0, 0);
    return f;
  }
  Eigen::SelfAdjointEigenSolver<Mat<double>> es(0.5 * (g + g.transpose()));
  const auto& vals = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (vals(i) > kernel_tol) {
      keep.push_back(i);
    } else if (std::abs(vals(i)) > f.max_dropped) {
      f.max_dropped = std::abs(vals(i));
    }
  }
  f.rank = static_cast<Eigen::Index>(keep.size());
  f.r.resize(f.rank, n);
  f.r_pinv.resize(n, f.rank);
  f.min_kept = f.rank > 0 ? vals(keep.front()) : 0.0;
  for (Eigen::Index k = 0; k < f.rank; ++k) {
    double lam = vals(keep[k]);
    f.r.row(k) = std::sqrt(lam) * es.eigenvectors().col(keep[k]).transpose();
    f.r_pinv.col(k) = es.eigenvectors().col(keep[k]) / std::sqrt(lam);
  }
  return f;
}

}  // namespace nnfock

#endif
