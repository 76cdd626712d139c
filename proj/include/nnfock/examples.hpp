#ifndef NNFOCK_EXAMPLES_HPP
#define NNFOCK_EXAMPLES_HPP

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nnfock/algebra.hpp"

namespace nnfock {

/// Componentwise algebra C^d: e_i e_j = delta_ij e_j, trivial star, unit the
/// all-ones vector. The base for every catalog example.
template <class S>
AlgebraContext<S> make_componentwise(int d) {
  AlgebraContext<S> ctx;
  ctx.dim = d;
  ctx.lmul.assign(static_cast<std::size_t>(d), Mat<S>::Zero(d, d));
  for (int i = 0; i < d; ++i) ctx.lmul[static_cast<std::size_t>(i)](i, i) = S(1);
  ctx.star_mat = Mat<S>::Identity(d, d);
  ctx.unit = Vec<S>::Ones(d);
  ctx.phi_vec = Vec<S>::Ones(d);
  ctx.gamma_mat = Mat<S>::Zero(d, d);
  ctx.lam.assign(static_cast<std::size_t>(d), Mat<S>::Zero(d, d));
  return ctx;
}

/// Example with central eta >= 0 and self-adjoint lambda:
/// gamma[f] = eta f, Lambda(b x f) = lambda b f.
template <class S>
AlgebraContext<S> make_bozejko(const std::vector<S>& eta, const std::vector<S>& lambda) {
  if (eta.size() != lambda.size() || eta.empty())
    throw std::invalid_argument("bozejko: eta/lambda size mismatch");
  const int d = static_cast<int>(eta.size());
  for (const S& e : eta)
    if (e < S(0)) throw std::invalid_argument("bozejko: eta must be a positive element");
  AlgebraContext<S> ctx = make_componentwise<S>(d);
  for (int i = 0; i < d; ++i) {
    ctx.gamma_mat(i, i) = eta[static_cast<std::size_t>(i)];
    ctx.lam[static_cast<std::size_t>(i)](i, i) = lambda[static_cast<std::size_t>(i)];
  }
  ctx.lambda_kind = LambdaKind::LeftMultiplier;
  return ctx;
}

/// One-dimensional algebra with gamma[1] = t and Lambda(1 x 1) = lam.
/// Unlike the central-eta example, t may go down to -1 (gamma + phi stays
/// completely positive), covering the gamma = -phi corollaries.
template <class S>
AlgebraContext<S> make_scalar(const S& t, const S& lam) {
  AlgebraContext<S> ctx = make_componentwise<S>(1);
  ctx.gamma_mat(0, 0) = t;
  ctx.lam[0](0, 0) = lam;
  ctx.lambda_kind = LambdaKind::LeftMultiplier;
  return ctx;
}

/// gamma = 0, Lambda(f x g) = f g: the free compound Poisson algebra.
template <class S>
AlgebraContext<S> make_poisson(int d) {
  AlgebraContext<S> ctx = make_componentwise<S>(d);
  ctx.lam = ctx.lmul;
  ctx.lambda_kind = LambdaKind::LeftMultiplier;
  return ctx;
}

/// R^d with componentwise multiplication, phi[e_j] = 1,
/// gamma[e_j] = sum_i C_ij e_i, Lambda(e_i x e_j) = sum_k B[i][j][k] e_k.
template <class S>
AlgebraContext<S> make_ma(const Mat<S>& c, const std::vector<Mat<S>>& b_tensor) {
  const int d = static_cast<int>(c.rows());
  if (c.cols() != d || static_cast<int>(b_tensor.size()) != d)
    throw std::invalid_argument("ma: shape mismatch");
  AlgebraContext<S> ctx = make_componentwise<S>(d);
  ctx.gamma_mat = c;
  ctx.lam = b_tensor;
  return ctx;
}

/// Scalar-valued gamma = psi: gamma[b] = psi[b] 1_B.
template <class S>
AlgebraContext<S> make_scalar_gamma(int d, const std::vector<S>& psi,
                                    const std::vector<Mat<S>>& lambda_tensor = {}) {
  if (static_cast<int>(psi.size()) != d) throw std::invalid_argument("scalar_gamma: psi size");
  AlgebraContext<S> ctx = make_componentwise<S>(d);
  for (int j = 0; j < d; ++j) ctx.gamma_mat.col(j) = psi[static_cast<std::size_t>(j)] * ctx.unit;
  if (!lambda_tensor.empty()) {
    if (static_cast<int>(lambda_tensor.size()) != d)
      throw std::invalid_argument("scalar_gamma: lambda shape");
    ctx.lam = lambda_tensor;
  }
  return ctx;
}

/// Step-function discretization of the kernel example: B = C^m with
/// phi = normalized average, gamma(f)(s) = sum_t w(s,t) f(t) dt and
/// Lambda(b x f)(s) = f(s) sum_t lam(s,t) b(t) dt with dt = 1/m.
template <class S>
AlgebraContext<S> make_lenczewski_discrete(const Mat<S>& w, const Mat<S>& lam_kernel) {
  const int m = static_cast<int>(w.rows());
  if (w.cols() != m || lam_kernel.rows() != m || lam_kernel.cols() != m)
    throw std::invalid_argument("lenczewski: kernel shape mismatch");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (w(i, j) + S(1) < S(0))
        throw std::invalid_argument("lenczewski: w + 1 must be entrywise nonnegative");
  AlgebraContext<S> ctx = make_componentwise<S>(m);
  S dt = S(1) / S(m);
  ctx.phi_vec = Vec<S>::Constant(m, dt);
  ctx.gamma_mat = dt * w;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      ctx.lam[static_cast<std::size_t>(i)](j, j) = dt * lam_kernel(j, i);
  return ctx;
}

enum class RandomKind { Bozejko, Ma, ScalarGamma, Poisson };

/// Random small contexts for oracle sweeps, rational-valued and rejection-
/// sampled until gamma + phi passes the level-n_cp positivity certificate.
template <class S>
AlgebraContext<S> random_context(std::mt19937_64& rng, int max_dim = 3,
                                 bool require_valid = true, int n_cp = 2) {
  std::uniform_int_distribution<int> dim_dist(1, max_dim);
  std::uniform_int_distribution<int> kind_dist(0, 3);
  std::uniform_int_distribution<int> num(-2, 2);
  std::uniform_int_distribution<int> den(1, 3);
  auto coin = [&](double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng) < p;
  };
  auto small = [&]() { return S(num(rng)) / S(den(rng)); };
  auto small_nonneg = [&]() {
    S v = small();
    return v < S(0) ? S(-v) : v;
  };

  for (int attempt = 0; attempt < 200; ++attempt) {
    const int d = dim_dist(rng);
    AlgebraContext<S> ctx;
    switch (static_cast<RandomKind>(kind_dist(rng))) {
      case RandomKind::Bozejko: {
        std::vector<S> eta, lambda;
        for (int i = 0; i < d; ++i) {
          eta.push_back(small_nonneg());
          lambda.push_back(small());
        }
        ctx = make_bozejko<S>(eta, lambda);
        break;
      }
      case RandomKind::Ma: {
        Mat<S> c = Mat<S>::Zero(d, d);
        for (int i = 0; i < d; ++i) c(i, i) = small_nonneg() - S(1) / S(2);
        std::vector<Mat<S>> bt(static_cast<std::size_t>(d), Mat<S>::Zero(d, d));
        // Symmetric B-tensor keeps (2.3); built from a random multiplier chain.
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            S v = small();
            bt[static_cast<std::size_t>(i)](j, j) += v;
            bt[static_cast<std::size_t>(j)](i, i) += v;
          }
        ctx = make_ma<S>(c, bt);
        break;
      }
      case RandomKind::ScalarGamma: {
        std::vector<S> psi;
        for (int i = 0; i < d; ++i) psi.push_back(small_nonneg());
        ctx = make_scalar_gamma<S>(d, psi);
        if (coin(0.5)) {
          // Poisson-type Lambda keeps the left-multiplier structure.
          for (int i = 0; i < d; ++i) ctx.lam[static_cast<std::size_t>(i)](i, i) = small();
          ctx.lambda_kind = LambdaKind::LeftMultiplier;
        }
        break;
      }
      case RandomKind::Poisson:
        ctx = make_poisson<S>(d);
        break;
    }
    if (!require_valid) return ctx;
    if (validate_algebra<S>(ctx, n_cp).ok()) return ctx;
  }
  throw std::runtime_error("random_context: rejection sampling failed");
}

}  // namespace nnfock

#endif
