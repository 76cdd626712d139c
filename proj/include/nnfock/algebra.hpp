#ifndef NNFOCK_ALGEBRA_HPP
#define NNFOCK_ALGEBRA_HPP

#include <optional>
#include <string>
#include <vector>

#include "nnfock/linalg.hpp"
#include "nnfock/scalar.hpp"

namespace nnfock {

enum class LambdaKind { General, LeftMultiplier };

/// A finite-dimensional unital *-algebra B together with the triple
/// (phi, gamma, Lambda). Scalars are real: rational in exact mode, double in
/// float mode. Immutable after construction; safe to share across threads.
///
/// Conventions:
///   - lmul[i] is the left-multiplication matrix of e_i: e_i e_j = lmul[i].col(j).
///   - star_mat row i holds the coefficients of e_i^*.
///   - gamma_mat column i holds the coefficients of gamma[e_i].
///   - lam[i] holds Lambda(e_i x e_j) = lam[i].col(j).
///   - gamma2, when present, is the bilinear variant: <e_i, e_j>_gamma =
///     gamma2[j].col(i), with <u,v>_gamma standing in for gamma[v^* u].
template <class S>
struct AlgebraContext {
  int dim = 0;
  std::vector<Mat<S>> lmul;
  Mat<S> star_mat;
  Vec<S> unit;
  Vec<S> phi_vec;
  Mat<S> gamma_mat;
  std::vector<Mat<S>> lam;
  LambdaKind lambda_kind = LambdaKind::General;
  std::optional<std::vector<Mat<S>>> gamma2;

  Vec<S> basis(int i) const {
    Vec<S> v = Vec<S>::Zero(dim);
    v(i) = S(1);
    return v;
  }

  Mat<S> lmul_matrix(const Vec<S>& a) const {
    Mat<S> m = Mat<S>::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      if (a(i) != S(0)) m += a(i) * lmul[static_cast<std::size_t>(i)];
    return m;
  }

  Vec<S> mul(const Vec<S>& a, const Vec<S>& b) const { return lmul_matrix(a) * b; }

  Vec<S> star(const Vec<S>& a) const { return star_mat.transpose() * a; }

  S phi(const Vec<S>& a) const { return phi_vec.dot(a); }

  Vec<S> gamma_unary(const Vec<S>& a) const { return gamma_mat * a; }

  bool has_bilinear_gamma() const { return gamma2.has_value(); }

  /// <u, v>_gamma; reduces to gamma[v^* u] in unary mode.
  Vec<S> gamma_form(const Vec<S>& u, const Vec<S>& v) const {
    if (!gamma2) return gamma_mat * mul(star(v), u);
    Vec<S> out = Vec<S>::Zero(dim);
    for (int j = 0; j < dim; ++j)
      if (v(j) != S(0)) out += v(j) * ((*gamma2)[static_cast<std::size_t>(j)] * u);
    return out;
  }

  /// gamma[a b], generalized through the bilinear form as <b, a^*>_gamma.
  Vec<S> gamma_of_prod(const Vec<S>& a, const Vec<S>& b) const {
    if (!gamma2) return gamma_mat * mul(a, b);
    return gamma_form(b, star(a));
  }

  /// (gamma + phi)[a b] as an element of B.
  Vec<S> gp(const Vec<S>& a, const Vec<S>& b) const {
    return gamma_of_prod(a, b) + phi(mul(a, b)) * unit;
  }

  Vec<S> lambda2(const Vec<S>& a, const Vec<S>& b) const {
    Mat<S> m = Mat<S>::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      if (a(i) != S(0)) m += a(i) * lam[static_cast<std::size_t>(i)];
    return m * b;
  }

  /// Lambda(u) with Lambda(u x v) = Lambda(u) v; only valid in left-multiplier mode.
  Vec<S> lambda_left(const Vec<S>& a) const { return lambda2(a, unit); }

  /// Matrix of the GNS inner product P(i,j) = phi[e_i^* e_j].
  Mat<S> gns_gram() const {
    Mat<S> p(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) p(i, j) = phi(mul(star(basis(i)), basis(j)));
    return p;
  }

  bool is_commutative() const {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        if (mul(basis(i), basis(j)) != Vec<S>(mul(basis(j), basis(i)))) return false;
    return true;
  }
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;  // magnitude of the worst violation, 0 when exact
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct CpResult {
  bool pass = false;
  double min_eigenvalue = 0.0;
};

namespace detail {

template <class S>
void require_shapes(const AlgebraContext<S>& ctx) {
  const int d = ctx.dim;
  if (d <= 0) throw std::invalid_argument("algebra dimension must be positive");
  auto square = [&](const Mat<S>& m) { return m.rows() == d && m.cols() == d; };
  if (static_cast<int>(ctx.lmul.size()) != d || static_cast<int>(ctx.lam.size()) != d)
    throw std::invalid_argument("ragged structure tensors");
  for (const auto& m : ctx.lmul)
    if (!square(m)) throw std::invalid_argument("ragged mul tensor");
  for (const auto& m : ctx.lam)
    if (!square(m)) throw std::invalid_argument("ragged lambda tensor");
  if (!square(ctx.star_mat) || !square(ctx.gamma_mat))
    throw std::invalid_argument("star/gamma matrix shape mismatch");
  if (ctx.unit.size() != d || ctx.phi_vec.size() != d)
    throw std::invalid_argument("unit/phi vector shape mismatch");
  if (ctx.gamma2) {
    if (static_cast<int>(ctx.gamma2->size()) != d)
      throw std::invalid_argument("ragged bilinear gamma tensor");
    for (const auto& m : *ctx.gamma2)
      if (!square(m)) throw std::invalid_argument("ragged bilinear gamma tensor");
  }
}

}  // namespace detail

/// Positivity certificate for the map x -> gamma-part(x) + t_phi * phi[x] 1
/// at matrix level n: the (n d) x (n d) matrix
///   M[(i,mu),(j,nu)] = phi[e_mu^* T(e_i^* e_j) e_nu]
/// evaluated in the phi-GNS representation, with the first index cycling
/// through the basis. For n >= d this certifies complete positivity of T.
template <class S>
CpResult check_cp_gamma_phi(const AlgebraContext<S>& ctx, const S& t_phi, int n,
                            double tol = 1e-9) {
  const int d = ctx.dim;
  const int nd = n * d;
  Mat<S> m(nd, nd);
  std::vector<Vec<S>> basis_star(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) basis_star[static_cast<std::size_t>(i)] = ctx.star(ctx.basis(i));
  for (int bi = 0; bi < n; ++bi)
    for (int bj = 0; bj < n; ++bj) {
      const Vec<S>& ei_star = basis_star[static_cast<std::size_t>(bi % d)];
      Vec<S> ej = ctx.basis(bj % d);
      Vec<S> t_val = ctx.gamma_of_prod(ei_star, ej) + t_phi * ctx.phi(ctx.mul(ei_star, ej)) * ctx.unit;
      Mat<S> lt = ctx.lmul_matrix(t_val);
      for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu)
          m(bi * d + mu, bj * d + nu) =
              ctx.phi(ctx.mul(basis_star[static_cast<std::size_t>(mu)], Vec<S>(lt * ctx.basis(nu))));
    }
  CpResult res;
  res.pass = is_psd<S>(m, tol);
  Mat<double> md(nd, nd);
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < nd; ++j) md(i, j) = to_double(m(i, j));
  res.min_eigenvalue = min_eigenvalue(md);
  return res;
}

/// Spec-facing variant: tests an arbitrary unary map B -> B given by `map`
/// (column i = coefficients of T(e_i)).
template <class S>
CpResult check_cp_level(const AlgebraContext<S>& ctx, const Mat<S>& map, int n,
                        double tol = 1e-9) {
  if (n < 1) throw std::invalid_argument("cp level must be >= 1");
  const int d = ctx.dim;
  const int nd = n * d;
  Mat<S> m(nd, nd);
  for (int bi = 0; bi < n; ++bi)
    for (int bj = 0; bj < n; ++bj) {
      Vec<S> prod = ctx.mul(ctx.star(ctx.basis(bi % d)), ctx.basis(bj % d));
      Vec<S> t_val = map * prod;
      Mat<S> lt = ctx.lmul_matrix(t_val);
      for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu)
          m(bi * d + mu, bj * d + nu) =
              ctx.phi(ctx.mul(ctx.star(ctx.basis(mu)), Vec<S>(lt * ctx.basis(nu))));
    }
  CpResult res;
  res.pass = is_psd<S>(m, tol);
  Mat<double> md(nd, nd);
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < nd; ++j) md(i, j) = to_double(m(i, j));
  res.min_eigenvalue = min_eigenvalue(md);
  return res;
}

/// Matrix of the map gamma + phi (unary mode), column i = coefficients of
/// gamma[e_i] + phi[e_i] 1.
template <class S>
Mat<S> gamma_plus_phi_matrix(const AlgebraContext<S>& ctx) {
  Mat<S> m = ctx.gamma_mat;
  for (int i = 0; i < ctx.dim; ++i) m.col(i) += ctx.phi_vec(i) * ctx.unit;
  return m;
}

/// Checks the standing hypotheses: associativity, unit, star structure,
/// positivity and faithfulness of phi, star-linearity of gamma, complete
/// positivity of gamma + phi up to level n_cp, and the Lambda symmetry (2.3).
template <class S>
ValidationReport validate_algebra(const AlgebraContext<S>& ctx, int n_cp = 3,
                                  double tol = 1e-9) {
  detail::require_shapes(ctx);
  const int d = ctx.dim;
  ValidationReport report;
  auto add = [&](std::string name, const S& residual) {
    double r = std::abs(to_double(residual));
    bool pass = scalar_traits<S>::is_exact ? residual == S(0) : r <= tol;
    report.checks.push_back({std::move(name), pass, r});
  };

  S assoc = scalar_traits<S>::zero();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Vec<S> lhs = ctx.mul(ctx.mul(ctx.basis(i), ctx.basis(j)), ctx.basis(k));
        Vec<S> rhs = ctx.mul(ctx.basis(i), ctx.mul(ctx.basis(j), ctx.basis(k)));
        assoc = std::max(assoc, max_abs<S>(Vec<S>(lhs - rhs)));
      }
  add("mul_associative", assoc);

  S unit_res = scalar_traits<S>::zero();
  for (int i = 0; i < d; ++i) {
    unit_res = std::max(unit_res, max_abs<S>(Vec<S>(ctx.mul(ctx.unit, ctx.basis(i)) - ctx.basis(i))));
    unit_res = std::max(unit_res, max_abs<S>(Vec<S>(ctx.mul(ctx.basis(i), ctx.unit) - ctx.basis(i))));
  }
  add("unit_identity", unit_res);

  S star_res = scalar_traits<S>::zero();
  for (int i = 0; i < d; ++i) {
    star_res = std::max(star_res, max_abs<S>(Vec<S>(ctx.star(ctx.star(ctx.basis(i))) - ctx.basis(i))));
    for (int j = 0; j < d; ++j) {
      Vec<S> lhs = ctx.star(ctx.mul(ctx.basis(i), ctx.basis(j)));
      Vec<S> rhs = ctx.mul(ctx.star(ctx.basis(j)), ctx.star(ctx.basis(i)));
      star_res = std::max(star_res, max_abs<S>(Vec<S>(lhs - rhs)));
    }
  }
  add("star_involutive_antihomomorphism", star_res);

  S phi_star = scalar_traits<S>::zero();
  for (int i = 0; i < d; ++i) {
    S diff = ctx.phi(ctx.star(ctx.basis(i))) - ctx.phi(ctx.basis(i));
    phi_star = std::max(phi_star, diff < S(0) ? S(-diff) : diff);
  }
  add("phi_star_linear", phi_star);

  {
    Mat<S> p = ctx.gns_gram();
    bool pd = is_positive_definite<S>(p, tol);
    Mat<double> pd_mat(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) pd_mat(i, j) = to_double(p(i, j));
    double lam_min = min_eigenvalue(pd_mat);
    report.checks.push_back({"phi_positive_faithful", pd, lam_min < 0 ? -lam_min : 0.0});
  }

  if (!ctx.gamma2) {
    S gs = scalar_traits<S>::zero();
    for (int i = 0; i < d; ++i) {
      Vec<S> lhs = ctx.gamma_unary(ctx.star(ctx.basis(i)));
      Vec<S> rhs = ctx.star(ctx.gamma_unary(ctx.basis(i)));
      gs = std::max(gs, max_abs<S>(Vec<S>(lhs - rhs)));
    }
    add("gamma_star_linear", gs);
  } else {
    S gs = scalar_traits<S>::zero();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Vec<S> lhs = ctx.star(ctx.gamma_form(ctx.basis(i), ctx.basis(j)));
        Vec<S> rhs = ctx.gamma_form(ctx.basis(j), ctx.basis(i));
        gs = std::max(gs, max_abs<S>(Vec<S>(lhs - rhs)));
      }
    add("gamma_form_star_symmetric", gs);
  }

  {
    CpResult cp = check_cp_gamma_phi<S>(ctx, S(1), n_cp, tol);
    report.checks.push_back(
        {"gamma_plus_phi_cp_level_" + std::to_string(n_cp), cp.pass,
         cp.min_eigenvalue < 0 ? -cp.min_eigenvalue : 0.0});
  }

  S lres = scalar_traits<S>::zero();
  for (int b = 0; b < d; ++b)
    for (int u = 0; u < d; ++u)
      for (int v = 0; v < d; ++v) {
        Vec<S> vb = ctx.basis(b), vu = ctx.basis(u), vv = ctx.basis(v);
        Vec<S> lam_bu = ctx.lambda2(vb, vu);
        Vec<S> lam_bstar_v = ctx.lambda2(ctx.star(vb), vv);
        S phi_lhs = ctx.phi(ctx.mul(ctx.star(vv), lam_bu));
        S phi_rhs = ctx.phi(ctx.mul(ctx.star(lam_bstar_v), vu));
        S diff = phi_lhs - phi_rhs;
        lres = std::max(lres, diff < S(0) ? S(-diff) : diff);
        Vec<S> g_lhs = ctx.gamma_of_prod(ctx.star(vv), lam_bu);
        Vec<S> g_rhs = ctx.gamma_of_prod(ctx.star(lam_bstar_v), vu);
        lres = std::max(lres, max_abs<S>(Vec<S>(g_lhs - g_rhs)));
      }
  add("lambda_symmetry_eq_2_3", lres);

  if (ctx.lambda_kind == LambdaKind::LeftMultiplier) {
    S lk = scalar_traits<S>::zero();
    for (int i = 0; i < d; ++i) {
      Vec<S> li = ctx.lambda_left(ctx.basis(i));
      for (int j = 0; j < d; ++j) {
        Vec<S> lhs = ctx.lambda2(ctx.basis(i), ctx.basis(j));
        Vec<S> rhs = ctx.mul(li, ctx.basis(j));
        lk = std::max(lk, max_abs<S>(Vec<S>(lhs - rhs)));
      }
    }
    add("lambda_left_multiplier_consistent", lk);
  }

  return report;
}

}  // namespace nnfock

#endif
