#ifndef NNFOCK_CUMULANTS_HPP
#define NNFOCK_CUMULANTS_HPP

#include <map>
#include <vector>

#include "nnfock/fock.hpp"
#include "nnfock/partitions.hpp"

namespace nnfock {

enum class WeightKind { Moment, FreeCumulant };

/// Weight operator product for a partition: opening -> a-, closing -> a+,
/// middle -> a0; in the free-cumulant kind the opening at position 1 becomes
/// a~_phi and the other openings a~_gamma.
template <class S>
std::vector<Gen<S>> weight_operators(const Partition& pi, WeightKind kind,
                                     const std::vector<Vec<S>>& words) {
  std::vector<Gen<S>> ops;
  ops.reserve(static_cast<std::size_t>(pi.n));
  for (int i = 1; i <= pi.n; ++i) {
    Role r = pi.roles[static_cast<std::size_t>(i - 1)];
    const Vec<S>& u = words[static_cast<std::size_t>(i - 1)];
    switch (r) {
      case Role::Closing:
        ops.push_back({GenKind::APlus, u});
        break;
      case Role::Opening:
        if (kind == WeightKind::Moment)
          ops.push_back({GenKind::AMinus, u});
        else if (i == 1)
          ops.push_back({GenKind::APhiTilde, u});
        else
          ops.push_back({GenKind::AGammaTilde, u});
        break;
      case Role::Middle:
        ops.push_back({GenKind::AZero, u});
        break;
      case Role::Singleton:
        throw std::invalid_argument("weight operators need a no-singleton partition");
    }
  }
  return ops;
}

template <class S>
S partition_weight_sum(const FockContext<S>& fc, const std::vector<Partition>& parts,
                       WeightKind kind, const std::vector<Vec<S>>& words,
                       ExecPolicy policy = default_policy()) {
  return parallel_sum<S>(parts.size(), policy, scalar_traits<S>::zero(), [&](std::size_t p) {
    auto ops = weight_operators<S>(parts[p], kind, words);
    FockVec<S> v = FockVec<S>::vacuum(fc);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) v = apply_gen(fc, *it, v);
    return v.omega_coefficient();
  });
}

/// Mixed moment as the NC_ns partition sum; equals the operator-product
/// vacuum moment.
template <class S>
S moment_partition_sum(const FockContext<S>& fc, const std::vector<Vec<S>>& words,
                       ExecPolicy policy = default_policy()) {
  const int n = static_cast<int>(words.size());
  if (n == 0) return S(1);
  if (n == 1) return scalar_traits<S>::zero();
  return partition_weight_sum<S>(fc, enumerate_nc_ns(n), WeightKind::Moment, words, policy);
}

/// Mixed Boolean cumulant: W_M weights over connected no-singleton
/// noncrossing partitions.
template <class S>
S boolean_cumulant(const FockContext<S>& fc, const std::vector<Vec<S>>& words,
                   ExecPolicy policy = default_policy()) {
  const int n = static_cast<int>(words.size());
  if (n <= 1) return scalar_traits<S>::zero();
  return partition_weight_sum<S>(fc, enumerate_nc_ns_connected(n), WeightKind::Moment, words,
                                 policy);
}

/// Mixed free cumulant: W_C weights over the same partition family.
template <class S>
S free_cumulant(const FockContext<S>& fc, const std::vector<Vec<S>>& words,
                ExecPolicy policy = default_policy()) {
  const int n = static_cast<int>(words.size());
  if (n <= 1) return scalar_traits<S>::zero();
  return partition_weight_sum<S>(fc, enumerate_nc_ns_connected(n), WeightKind::FreeCumulant,
                                 words, policy);
}

/// Free cumulant in a central-eta context via the closed diagonal formula
///   sum_pi phi[eta^(|pi|-1) lambda^(n-2|pi|) f_1...f_n]
/// over connected no-singleton noncrossing partitions.
template <class S>
S bozejko_cumulant_formula(const AlgebraContext<S>& alg, const std::vector<Vec<S>>& words) {
  const int d = alg.dim;
  Vec<S> eta = alg.gamma_unary(alg.unit);
  Vec<S> lambda = alg.lambda2(alg.unit, alg.unit);
  // Kind check: gamma must be multiplication by eta, Lambda by lambda.
  Mat<S> eta_mult = alg.lmul_matrix(eta);
  if (max_abs<S>(Mat<S>(eta_mult - alg.gamma_mat)) != S(0))
    throw std::invalid_argument("bozejko formula: gamma is not multiplication by a central eta");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec<S> expect = alg.mul(lambda, alg.mul(alg.basis(i), alg.basis(j)));
      Vec<S> got = alg.lambda2(alg.basis(i), alg.basis(j));
      if (max_abs<S>(Vec<S>(expect - got)) != S(0))
        throw std::invalid_argument("bozejko formula: Lambda is not lambda * b * f");
    }

  const int n = static_cast<int>(words.size());
  if (n <= 1) return scalar_traits<S>::zero();
  Vec<S> prod = words[0];
  for (int i = 1; i < n; ++i) prod = alg.mul(prod, words[static_cast<std::size_t>(i)]);

  S total = scalar_traits<S>::zero();
  for (const auto& pi : enumerate_nc_ns_connected(n)) {
    const int nb = static_cast<int>(pi.blocks.size());
    Vec<S> term = prod;
    for (int k = 0; k < nb - 1; ++k) term = alg.mul(eta, term);
    for (int k = 0; k < n - 2 * nb; ++k) term = alg.mul(lambda, term);
    total += alg.phi(term);
  }
  return total;
}

/// R'[u_1..u_k]: operator on B (d x d matrix) given by the interval-partition
/// sum with weights w({i}) = a0(u_i) and
/// w({i_1..i_m}) = left multiplication by gamma[u_{i_1} R'[interior] u_{i_m}],
/// the product taken in order of block appearance.
template <class S>
Mat<S> r_prime(const AlgebraContext<S>& alg, const std::vector<Vec<S>>& words) {
  const int d = alg.dim;
  const int k = static_cast<int>(words.size());
  // Memoized on contiguous sub-words [lo, hi).
  std::map<std::pair<int, int>, Mat<S>> memo;
  auto a0_matrix = [&](const Vec<S>& u) {
    Mat<S> m = Mat<S>::Zero(d, d);
    for (int i = 0; i < d; ++i)
      if (u(i) != S(0)) m += u(i) * alg.lam[static_cast<std::size_t>(i)];
    return m;
  };
  std::function<Mat<S>(int, int)> rec = [&](int lo, int hi) -> Mat<S> {
    if (lo >= hi) return Mat<S>::Identity(d, d);
    if (auto it = memo.find({lo, hi}); it != memo.end()) return it->second;
    const int n = hi - lo;
    Mat<S> total = Mat<S>::Zero(d, d);
    for (const auto& pi : enumerate_int(n)) {
      Mat<S> prod = Mat<S>::Identity(d, d);
      for (const auto& blk : pi.blocks) {  // blocks already ordered by minimum
        Mat<S> w;
        if (blk.size() == 1) {
          w = a0_matrix(words[static_cast<std::size_t>(lo + blk[0] - 1)]);
        } else {
          const Vec<S>& first = words[static_cast<std::size_t>(lo + blk.front() - 1)];
          const Vec<S>& last = words[static_cast<std::size_t>(lo + blk.back() - 1)];
          Mat<S> interior = rec(lo + blk.front(), lo + blk.back() - 1);
          Vec<S> elem = alg.gamma_of_prod(first, Vec<S>(interior * last));
          w = alg.lmul_matrix(elem);
        }
        prod = prod * w;
      }
      total += prod;
    }
    memo.emplace(std::make_pair(lo, hi), total);
    return total;
  };
  return rec(0, k);
}

/// R'_n[u] by the recursion
///   R'_n = sum_{i=0}^{n-2} R'_i gamma[u R'_{n-i-2} u] + R'_{n-1} a0(u).
template <class S>
std::vector<Mat<S>> r_prime_recursive_all(const AlgebraContext<S>& alg, const Vec<S>& u,
                                          int n_max) {
  const int d = alg.dim;
  Mat<S> a0 = Mat<S>::Zero(d, d);
  for (int i = 0; i < d; ++i)
    if (u(i) != S(0)) a0 += u(i) * alg.lam[static_cast<std::size_t>(i)];
  std::vector<Mat<S>> r;
  r.push_back(Mat<S>::Identity(d, d));
  for (int n = 1; n <= n_max; ++n) {
    Mat<S> acc = r[static_cast<std::size_t>(n - 1)] * a0;
    for (int i = 0; i <= n - 2; ++i) {
      Vec<S> elem = alg.gamma_of_prod(
          u, Vec<S>(r[static_cast<std::size_t>(n - i - 2)] * u));
      acc += r[static_cast<std::size_t>(i)] * alg.lmul_matrix(elem);
    }
    r.push_back(std::move(acc));
  }
  return r;
}

template <class S>
Mat<S> r_prime_recursive(const AlgebraContext<S>& alg, const Vec<S>& u, int n) {
  return r_prime_recursive_all<S>(alg, u, n).back();
}

struct GfResidualReport {
  std::vector<double> quadratic;      // Thm CumulantGF, per degree
  std::vector<double> second_kernel;  // R''(u) = u R'(u) u variant, per degree
  std::vector<double> bozejko;        // Eq BozejkoRPrime, per degree (central-eta contexts)
  bool exact_zero = true;
  double max_residual() const {
    double m = 0;
    for (auto v : quadratic) m = std::max(m, v);
    for (auto v : second_kernel) m = std::max(m, v);
    for (auto v : bozejko) m = std::max(m, v);
    return m;
  }
};

/// Degree-by-degree residuals of the quadratic generating-function identity
///   R'(u) v = v + R'(u) gamma[u R'(u) u] v + R'(u) Lambda(u x v),
/// with R'_n computed from the interval-partition definition. Also checks the
/// R'' = u R'(u) u variant and, when gamma is multiplication by a central eta
/// and Lambda(b x f) = lambda b f, the quadratic equation
///   R' = 1 + lambda R' f + eta R' f R'.
template <class S>
GfResidualReport cumulant_gf_residual(const AlgebraContext<S>& alg, const Vec<S>& u,
                                      int max_degree) {
  const int d = alg.dim;
  GfResidualReport rep;
  std::vector<Mat<S>> rp;
  rp.reserve(static_cast<std::size_t>(max_degree) + 1);
  for (int n = 0; n <= max_degree; ++n) {
    std::vector<Vec<S>> w(static_cast<std::size_t>(n), u);
    rp.push_back(r_prime<S>(alg, w));
  }
  Mat<S> a0 = Mat<S>::Zero(d, d);
  for (int i = 0; i < d; ++i)
    if (u(i) != S(0)) a0 += u(i) * alg.lam[static_cast<std::size_t>(i)];

  for (int n = 0; n <= max_degree; ++n) {
    Mat<S> rhs = n == 0 ? Mat<S>(Mat<S>::Identity(d, d)) : Mat<S>(Mat<S>::Zero(d, d));
    if (n >= 1) rhs += rp[static_cast<std::size_t>(n - 1)] * a0;
    for (int i = 0; i <= n - 2; ++i) {
      Vec<S> elem =
          alg.gamma_of_prod(u, Vec<S>(rp[static_cast<std::size_t>(n - i - 2)] * u));
      rhs += rp[static_cast<std::size_t>(i)] * alg.lmul_matrix(elem);
    }
    S res = max_abs<S>(Mat<S>(rp[static_cast<std::size_t>(n)] - rhs));
    rep.quadratic.push_back(std::abs(to_double(res)));
    if (res != S(0)) rep.exact_zero = false;
  }

  // R''_m = u R'_{m-2}(u); identity
  // R''(u) = u^2 + u R'(u) gamma[R''(u)] u + u R'(u) Lambda(u x u).
  std::vector<Vec<S>> rpp(static_cast<std::size_t>(max_degree) + 1, Vec<S>::Zero(d));
  for (int m = 2; m <= max_degree; ++m)
    rpp[static_cast<std::size_t>(m)] =
        alg.mul(u, Vec<S>(rp[static_cast<std::size_t>(m - 2)] * u));
  Vec<S> lam_uu = alg.lambda2(u, u);
  for (int m = 2; m <= max_degree; ++m) {
    Vec<S> rhs = Vec<S>::Zero(d);
    if (m == 2) rhs += alg.mul(u, u);
    if (m >= 3)
      rhs += alg.mul(u, Vec<S>(rp[static_cast<std::size_t>(m - 3)] * lam_uu));
    for (int j = 2; j <= m - 2; ++j) {
      Vec<S> g = alg.gamma_of_prod(alg.unit, rpp[static_cast<std::size_t>(j)]);
      rhs += alg.mul(u, Vec<S>(rp[static_cast<std::size_t>(m - 2 - j)] * alg.mul(g, u)));
    }
    S res = max_abs<S>(Vec<S>(rpp[static_cast<std::size_t>(m)] - rhs));
    rep.second_kernel.push_back(std::abs(to_double(res)));
    if (res != S(0)) rep.exact_zero = false;
  }

  // Central-eta form, when applicable.
  Vec<S> eta = alg.gamma_unary(alg.unit);
  Vec<S> lambda = alg.lambda2(alg.unit, alg.unit);
  bool central_form = !alg.has_bilinear_gamma() &&
                      max_abs<S>(Mat<S>(alg.lmul_matrix(eta) - alg.gamma_mat)) == S(0);
  if (central_form)
    for (int i = 0; i < d && central_form; ++i)
      for (int j = 0; j < d; ++j) {
        Vec<S> expect = alg.mul(lambda, alg.mul(alg.basis(i), alg.basis(j)));
        if (max_abs<S>(Vec<S>(expect - alg.lambda2(alg.basis(i), alg.basis(j)))) != S(0)) {
          central_form = false;
          break;
        }
      }
  if (central_form) {
    // In this mode R'_n is multiplication by the element r_n = R'_n(1).
    std::vector<Vec<S>> r_elem;
    for (int n = 0; n <= max_degree; ++n)
      r_elem.push_back(Vec<S>(rp[static_cast<std::size_t>(n)] * alg.unit));
    for (int n = 0; n <= max_degree; ++n) {
      Vec<S> rhs = n == 0 ? alg.unit : Vec<S>(Vec<S>::Zero(d));
      if (n >= 1)
        rhs += alg.mul(lambda, alg.mul(r_elem[static_cast<std::size_t>(n - 1)], u));
      for (int i = 0; i <= n - 2; ++i)
        rhs += alg.mul(
            eta, alg.mul(r_elem[static_cast<std::size_t>(i)],
                         alg.mul(u, alg.mul(r_elem[static_cast<std::size_t>(n - 2 - i)], u))));
      S res = max_abs<S>(Vec<S>(r_elem[static_cast<std::size_t>(n)] - rhs));
      // The multiplication-operator identification is part of the check.
      res = std::max(res, max_abs<S>(Mat<S>(
                              alg.lmul_matrix(r_elem[static_cast<std::size_t>(n)]) -
                              rp[static_cast<std::size_t>(n)])));
      rep.bozejko.push_back(std::abs(to_double(res)));
      if (res != S(0)) rep.exact_zero = false;
    }
  }
  return rep;
}

/// Degree-n coefficient of the mixed generating function R'(u_1..u_k):
/// the sum of R'[w] over all length-n words in the given variables. Equals
/// R'_n[u_1 + ... + u_k] by multilinearity; both sides are reported so the
/// multivariate corollary can be checked against the single-variable identity.
template <class S>
Mat<S> r_prime_mixed_degree(const AlgebraContext<S>& alg, const std::vector<Vec<S>>& us,
                            int degree) {
  const int d = alg.dim;
  const int k = static_cast<int>(us.size());
  Mat<S> total = Mat<S>::Zero(d, d);
  std::vector<int> idx(static_cast<std::size_t>(degree), 0);
  if (degree == 0) return Mat<S>::Identity(d, d);
  while (true) {
    std::vector<Vec<S>> w;
    w.reserve(static_cast<std::size_t>(degree));
    for (int p = 0; p < degree; ++p) w.push_back(us[static_cast<std::size_t>(idx[static_cast<std::size_t>(p)])]);
    total += r_prime<S>(alg, w);
    int p = 0;
    while (p < degree) {
      if (++idx[static_cast<std::size_t>(p)] < k) break;
      idx[static_cast<std::size_t>(p)] = 0;
      ++p;
    }
    if (p == degree) break;
  }
  return total;
}

}  // namespace nnfock

#endif
