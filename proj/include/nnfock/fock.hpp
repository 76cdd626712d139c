#ifndef NNFOCK_FOCK_HPP
#define NNFOCK_FOCK_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nnfock/algebra.hpp"
#include "nnfock/exec.hpp"

namespace nnfock {

/// Basis words at level l are indexed colexicographically: the first tensor
/// factor is the least significant digit, so word (i_1,...,i_l) has index
/// i_1 + i_2 d + ... + i_l d^(l-1), and prepending a letter maps w -> i + d w.
inline Eigen::Index pow_dim(int d, int l) {
  Eigen::Index p = 1;
  for (int k = 0; k < l; ++k) p *= d;
  return p;
}

enum class GramMode { None, Full };

template <class S>
struct FockContext {
  AlgebraContext<S> alg;
  int N = 0;
  std::vector<Eigen::Index> level_dim;   // d^l for l = 0..N
  std::vector<Mat<S>> gram;              // per level, empty when GramMode::None
  std::vector<Mat<S>> gram_kernel;       // columns span the null space N_l
  std::vector<double> gram_min_eig;      // diagnostic, float view
  bool grams_built = false;

  int dim() const { return alg.dim; }
  Eigen::Index total_dim() const {
    Eigen::Index t = 0;
    for (auto v : level_dim) t += v;
    return t;
  }
  int letter(Eigen::Index word, int pos) const {  // pos = 1-based tensor slot
    Eigen::Index p = word;
    for (int k = 1; k < pos; ++k) p /= alg.dim;
    return static_cast<int>(p % alg.dim);
  }
};

/// Graded vector in the truncated Fock space; empty level = zero.
template <class S>
struct FockVec {
  std::vector<Vec<S>> lv;

  static FockVec zero(const FockContext<S>& fc) {
    FockVec v;
    v.lv.resize(static_cast<std::size_t>(fc.N) + 1);
    return v;
  }
  static FockVec vacuum(const FockContext<S>& fc) {
    FockVec v = zero(fc);
    v.lv[0] = Vec<S>::Ones(1);
    return v;
  }
  Vec<S>& level(const FockContext<S>& fc, int l) {
    auto& x = lv[static_cast<std::size_t>(l)];
    if (x.size() == 0) x = Vec<S>::Zero(fc.level_dim[static_cast<std::size_t>(l)]);
    return x;
  }
  bool has_level(int l) const {
    return l >= 0 && l < static_cast<int>(lv.size()) &&
           lv[static_cast<std::size_t>(l)].size() > 0;
  }
  S omega_coefficient() const {
    return has_level(0) ? lv[0](0) : scalar_traits<S>::zero();
  }
  FockVec& operator+=(const FockVec& o) {
    if (o.lv.size() > lv.size()) lv.resize(o.lv.size());
    for (std::size_t l = 0; l < o.lv.size(); ++l) {
      if (o.lv[l].size() == 0) continue;
      if (lv[l].size() == 0)
        lv[l] = o.lv[l];
      else
        lv[l] += o.lv[l];
    }
    return *this;
  }
  FockVec operator-(const FockVec& o) const {
    FockVec r = *this;
    if (o.lv.size() > r.lv.size()) r.lv.resize(o.lv.size());
    for (std::size_t l = 0; l < o.lv.size(); ++l) {
      if (o.lv[l].size() == 0) continue;
      if (r.lv[l].size() == 0)
        r.lv[l] = -o.lv[l];
      else
        r.lv[l] -= o.lv[l];
    }
    return r;
  }
  FockVec& operator*=(const S& c) {
    for (auto& x : lv)
      if (x.size() > 0) x *= c;
    return *this;
  }
  S max_abs_coeff() const {
    S best = scalar_traits<S>::zero();
    for (const auto& x : lv)
      if (x.size() > 0) best = std::max(best, nnfock::max_abs<S>(x));
    return best;
  }
};

template <class S>
FockContext<S> build_fock(const AlgebraContext<S>& alg, int n_levels,
                          GramMode mode = GramMode::Full,
                          ExecPolicy policy = default_policy(),
                          double kernel_tol = 1e-10) {
  if (n_levels < 1) throw std::invalid_argument("truncation level must be >= 1");
  FockContext<S> fc;
  fc.alg = alg;
  fc.N = n_levels;
  const int d = alg.dim;
  for (int l = 0; l <= n_levels; ++l) fc.level_dim.push_back(pow_dim(d, l));
  if (mode == GramMode::None) return fc;

  // Nested (gamma+phi) sandwich over prefixes: table[k] holds, for every pair
  // of length-k prefixes (pu, pv), the algebra element
  //   (gamma+phi)[v_k^* (gamma+phi)[... (gamma+phi)[v_1^* u_1] ...] u_k].
  fc.gram.resize(static_cast<std::size_t>(n_levels) + 1);
  fc.gram_kernel.resize(static_cast<std::size_t>(n_levels) + 1);
  fc.gram_min_eig.assign(static_cast<std::size_t>(n_levels) + 1, 0.0);

  fc.gram[0] = Mat<S>::Ones(1, 1);
  fc.gram_kernel[0] = Mat<S>(1, 0);
  fc.gram_min_eig[0] = 1.0;

  auto ip_step = [&](int j, const Vec<S>& m, int i) -> Vec<S> {
    Vec<S> mu = alg.mul(m, alg.basis(i));
    Vec<S> vj = alg.basis(j);
    return alg.gamma_form(mu, vj) + alg.phi(alg.mul(alg.star(vj), mu)) * alg.unit;
  };

  std::vector<Vec<S>> table{alg.unit};  // k = 0: the single empty-prefix pair
  std::vector<Vec<S>> star_basis(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) star_basis[static_cast<std::size_t>(i)] = alg.star(alg.basis(i));

  for (int level = 1; level <= n_levels; ++level) {
    const Eigen::Index prev = pow_dim(d, level - 1);
    const Eigen::Index cur = fc.level_dim[static_cast<std::size_t>(level)];

    Mat<S>& g = fc.gram[static_cast<std::size_t>(level)];
    g.resize(cur, cur);
    parallel_for(static_cast<std::size_t>(cur), policy, [&](std::size_t a) {
      const Eigen::Index va = static_cast<Eigen::Index>(a);
      const int last_a = static_cast<int>(va / prev);
      const Eigen::Index pa = va % prev;
      for (Eigen::Index b = 0; b < cur; ++b) {
        const int last_b = static_cast<int>(b / prev);
        const Eigen::Index pb = b % prev;
        // G(a, b) = <word_b, word_a> = phi[ a_last^* M(pb, pa) b_last ].
        const Vec<S>& m = table[static_cast<std::size_t>(pb * prev + pa)];
        g(va, b) = alg.phi(alg.mul(star_basis[static_cast<std::size_t>(last_a)],
                                   alg.mul(m, alg.basis(last_b))));
      }
    });

    fc.gram_kernel[static_cast<std::size_t>(level)] = kernel_basis<S>(g, kernel_tol);
    {
      Mat<double> gd(cur, cur);
      for (Eigen::Index i = 0; i < cur; ++i)
        for (Eigen::Index j = 0; j < cur; ++j) gd(i, j) = to_double(g(i, j));
      fc.gram_min_eig[static_cast<std::size_t>(level)] = min_eigenvalue(gd);
    }
    if (!is_psd<S>(g, kernel_tol))
      throw std::runtime_error("deformed inner product not positive semidefinite at level " +
                               std::to_string(level) + " (min eigenvalue " +
                               std::to_string(fc.gram_min_eig[static_cast<std::size_t>(level)]) + ")");

    if (level < n_levels) {
      std::vector<Vec<S>> next(static_cast<std::size_t>(cur * cur), Vec<S>());
      parallel_for(static_cast<std::size_t>(cur), policy, [&](std::size_t u) {
        const Eigen::Index pu = static_cast<Eigen::Index>(u);
        const int iu = static_cast<int>(pu / prev);
        const Eigen::Index pu_prev = pu % prev;
        for (Eigen::Index pv = 0; pv < cur; ++pv) {
          const int jv = static_cast<int>(pv / prev);
          const Eigen::Index pv_prev = pv % prev;
          next[static_cast<std::size_t>(pu * cur + pv)] =
              ip_step(jv, table[static_cast<std::size_t>(pu_prev * prev + pv_prev)], iu);
        }
      });
      table = std::move(next);
    }
  }
  fc.grams_built = true;
  return fc;
}

enum class GenKind { APlus, AMinus, AZero, X, AGammaTilde, APhiTilde };

/// A generator descriptor: one of the defining operators applied with
/// argument b (a coefficient vector over B).
template <class S>
struct Gen {
  GenKind kind;
  Vec<S> b;
};

template <class S>
Gen<S> a_plus_gen(const Vec<S>& b) { return {GenKind::APlus, b}; }
template <class S>
Gen<S> a_minus_gen(const Vec<S>& b) { return {GenKind::AMinus, b}; }
template <class S>
Gen<S> a_zero_gen(const Vec<S>& b) { return {GenKind::AZero, b}; }
template <class S>
Gen<S> x_gen(const Vec<S>& b) { return {GenKind::X, b}; }

namespace detail {

// Applies one elementary band to a single source level; accumulates into out.
template <class S>
void apply_band(const FockContext<S>& fc, GenKind kind, const Vec<S>& b, int src,
                const Vec<S>& in, FockVec<S>& out) {
  const auto& alg = fc.alg;
  const int d = alg.dim;
  const Eigen::Index dim_src = fc.level_dim[static_cast<std::size_t>(src)];

  switch (kind) {
    case GenKind::APlus: {
      if (src == fc.N) return;  // truncation: creation from the top level is dropped
      Vec<S>& o = out.level(fc, src + 1);
      for (Eigen::Index w = 0; w < dim_src; ++w) {
        if (in(w) == S(0)) continue;
        for (int i = 0; i < d; ++i)
          if (b(i) != S(0)) o(i + d * w) += b(i) * in(w);
      }
      return;
    }
    case GenKind::AMinus: {
      if (src == 0) return;
      if (src == 1) {
        S acc = scalar_traits<S>::zero();
        for (int j = 0; j < d; ++j)
          if (in(j) != S(0)) acc += alg.phi(alg.mul(b, alg.basis(j))) * in(j);
        out.level(fc, 0)(0) += acc;
        return;
      }
      std::vector<Mat<S>> lm(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j)
        lm[static_cast<std::size_t>(j)] = alg.lmul_matrix(alg.gp(b, alg.basis(j)));
      Vec<S>& o = out.level(fc, src - 1);
      const Eigen::Index rest_count = dim_src / (d * d);
      for (Eigen::Index r = 0; r < rest_count; ++r)
        for (int j2 = 0; j2 < d; ++j2)
          for (int j1 = 0; j1 < d; ++j1) {
            const S& c = in(j1 + d * (j2 + d * r));
            if (c == S(0)) continue;
            const Mat<S>& m = lm[static_cast<std::size_t>(j1)];
            for (int k = 0; k < d; ++k)
              if (m(k, j2) != S(0)) o(k + d * r) += m(k, j2) * c;
          }
      return;
    }
    case GenKind::AGammaTilde: {
      if (src <= 1) return;  // the critical exception: zero on level 1
      std::vector<Mat<S>> lm(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j)
        lm[static_cast<std::size_t>(j)] = alg.lmul_matrix(alg.gamma_of_prod(b, alg.basis(j)));
      Vec<S>& o = out.level(fc, src - 1);
      const Eigen::Index rest_count = dim_src / (d * d);
      for (Eigen::Index r = 0; r < rest_count; ++r)
        for (int j2 = 0; j2 < d; ++j2)
          for (int j1 = 0; j1 < d; ++j1) {
            const S& c = in(j1 + d * (j2 + d * r));
            if (c == S(0)) continue;
            const Mat<S>& m = lm[static_cast<std::size_t>(j1)];
            for (int k = 0; k < d; ++k)
              if (m(k, j2) != S(0)) o(k + d * r) += m(k, j2) * c;
          }
      return;
    }
    case GenKind::APhiTilde: {
      if (src == 0) return;
      std::vector<S> phis(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j)
        phis[static_cast<std::size_t>(j)] = alg.phi(alg.mul(b, alg.basis(j)));
      if (src == 1) {
        S acc = scalar_traits<S>::zero();
        for (int j = 0; j < d; ++j)
          if (in(j) != S(0)) acc += phis[static_cast<std::size_t>(j)] * in(j);
        out.level(fc, 0)(0) += acc;
        return;
      }
      Vec<S>& o = out.level(fc, src - 1);
      const Eigen::Index rest = dim_src / d;
      for (Eigen::Index t = 0; t < rest; ++t)
        for (int j1 = 0; j1 < d; ++j1) {
          const S& c = in(j1 + d * t);
          if (c == S(0)) continue;
          o(t) += phis[static_cast<std::size_t>(j1)] * c;
        }
      return;
    }
    case GenKind::AZero: {
      if (src == 0) return;
      Mat<S> lam_b = Mat<S>::Zero(d, d);
      for (int i = 0; i < d; ++i)
        if (b(i) != S(0)) lam_b += b(i) * alg.lam[static_cast<std::size_t>(i)];
      Vec<S>& o = out.level(fc, src);
      const Eigen::Index rest = dim_src / d;
      for (Eigen::Index t = 0; t < rest; ++t)
        for (int j1 = 0; j1 < d; ++j1) {
          const S& c = in(j1 + d * t);
          if (c == S(0)) continue;
          for (int k = 0; k < d; ++k)
            if (lam_b(k, j1) != S(0)) o(k + d * t) += lam_b(k, j1) * c;
        }
      return;
    }
    case GenKind::X:
      apply_band(fc, GenKind::APlus, b, src, in, out);
      apply_band(fc, GenKind::AMinus, b, src, in, out);
      apply_band(fc, GenKind::AZero, b, src, in, out);
      return;
  }
}

}  // namespace detail

template <class S>
FockVec<S> apply_gen(const FockContext<S>& fc, const Gen<S>& g, const FockVec<S>& v) {
  FockVec<S> out = FockVec<S>::zero(fc);
  for (int l = 0; l < static_cast<int>(v.lv.size()); ++l) {
    const auto& in = v.lv[static_cast<std::size_t>(l)];
    if (in.size() == 0) continue;
    detail::apply_band(fc, g.kind, g.b, l, in, out);
  }
  return out;
}

/// Omega-coefficient of op_1 ... op_k applied to the vacuum. Omega is
/// orthogonal to the higher levels and has unit norm, so no Gram matrix is
/// needed; exact for word length <= N by the band structure.
template <class S>
S vacuum_expectation(const FockContext<S>& fc, std::span<const Gen<S>> ops) {
  if (static_cast<int>(ops.size()) > fc.N)
    throw std::invalid_argument("vacuum_expectation: word longer than truncation level");
  FockVec<S> v = FockVec<S>::vacuum(fc);
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) v = apply_gen(fc, *it, v);
  return v.omega_coefficient();
}

template <class S>
S vacuum_expectation(const FockContext<S>& fc, const std::vector<Gen<S>>& ops) {
  return vacuum_expectation<S>(fc, std::span<const Gen<S>>(ops.data(), ops.size()));
}

/// Vacuum moment <X(b_1)...X(b_k) Omega, Omega> on a throwaway minimal
/// truncation: a length-k product only visits levels <= floor(k/2) on its
/// contributing paths, so the result is exact.
template <class S>
S vacuum_moment(const AlgebraContext<S>& alg, const std::vector<Vec<S>>& word) {
  if (word.empty()) return S(1);
  const int levels = std::max(1, static_cast<int>(word.size()) / 2);
  FockContext<S> fc = build_fock<S>(alg, levels, GramMode::None);
  FockVec<S> v = FockVec<S>::vacuum(fc);
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    v = apply_gen(fc, Gen<S>{GenKind::X, *it}, v);
  return v.omega_coefficient();
}

/// Deformed inner product of two graded vectors (requires grams).
template <class S>
S fock_inner(const FockContext<S>& fc, const FockVec<S>& x, const FockVec<S>& y) {
  S acc = scalar_traits<S>::zero();
  for (std::size_t l = 0; l < std::min(x.lv.size(), y.lv.size()); ++l) {
    if (x.lv[l].size() == 0 || y.lv[l].size() == 0) continue;
    acc += y.lv[l].dot(fc.gram[l] * x.lv[l]);
  }
  return acc;
}

/// Dense graded block operator on the truncated space.
template <class S>
struct OpMat {
  std::vector<Eigen::Index> dims;
  std::vector<std::vector<Mat<S>>> blk;  // blk[tgt][src], 0x0 = zero

  static OpMat zero(const FockContext<S>& fc) {
    OpMat m;
    m.dims = fc.level_dim;
    m.blk.assign(m.dims.size(), std::vector<Mat<S>>(m.dims.size()));
    return m;
  }
  static OpMat identity(const FockContext<S>& fc) {
    OpMat m = zero(fc);
    for (std::size_t l = 0; l < m.dims.size(); ++l)
      m.blk[l][l] = Mat<S>::Identity(m.dims[l], m.dims[l]);
    return m;
  }
  int levels() const { return static_cast<int>(dims.size()) - 1; }
  bool empty_block(int t, int s) const {
    return blk[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)].size() == 0;
  }
  Mat<S>& block(int t, int s) {
    auto& b = blk[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
    if (b.size() == 0)
      b = Mat<S>::Zero(dims[static_cast<std::size_t>(t)], dims[static_cast<std::size_t>(s)]);
    return b;
  }
  const Mat<S>* maybe_block(int t, int s) const {
    const auto& b = blk[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
    return b.size() == 0 ? nullptr : &b;
  }

  OpMat operator+(const OpMat& o) const {
    OpMat r = *this;
    for (std::size_t t = 0; t < blk.size(); ++t)
      for (std::size_t s = 0; s < blk.size(); ++s) {
        if (o.blk[t][s].size() == 0) continue;
        if (r.blk[t][s].size() == 0)
          r.blk[t][s] = o.blk[t][s];
        else
          r.blk[t][s] += o.blk[t][s];
      }
    return r;
  }
  OpMat operator-(const OpMat& o) const {
    OpMat r = *this;
    for (std::size_t t = 0; t < blk.size(); ++t)
      for (std::size_t s = 0; s < blk.size(); ++s) {
        if (o.blk[t][s].size() == 0) continue;
        if (r.blk[t][s].size() == 0)
          r.blk[t][s] = -o.blk[t][s];
        else
          r.blk[t][s] -= o.blk[t][s];
      }
    return r;
  }
  OpMat operator*(const OpMat& o) const {
    OpMat r;
    r.dims = dims;
    r.blk.assign(dims.size(), std::vector<Mat<S>>(dims.size()));
    for (std::size_t t = 0; t < blk.size(); ++t)
      for (std::size_t s = 0; s < blk.size(); ++s) {
        for (std::size_t k = 0; k < blk.size(); ++k) {
          if (blk[t][k].size() == 0 || o.blk[k][s].size() == 0) continue;
          if (r.blk[t][s].size() == 0)
            r.blk[t][s] = blk[t][k] * o.blk[k][s];
          else
            r.blk[t][s] += blk[t][k] * o.blk[k][s];
        }
      }
    return r;
  }
  OpMat operator*(const S& c) const {
    OpMat r = *this;
    for (auto& row : r.blk)
      for (auto& b : row)
        if (b.size() > 0) b *= c;
    return r;
  }
  FockVec<S> apply(const FockVec<S>& v) const {
    FockVec<S> out;
    out.lv.resize(dims.size());
    for (std::size_t t = 0; t < blk.size(); ++t)
      for (std::size_t s = 0; s < std::min(blk.size(), v.lv.size()); ++s) {
        if (blk[t][s].size() == 0 || v.lv[s].size() == 0) continue;
        if (out.lv[t].size() == 0) out.lv[t] = Vec<S>::Zero(dims[t]);
        out.lv[t] += blk[t][s] * v.lv[s];
      }
    return out;
  }
  S max_abs_entry() const {
    S best = scalar_traits<S>::zero();
    for (const auto& row : blk)
      for (const auto& b : row)
        if (b.size() > 0) best = std::max(best, nnfock::max_abs<S>(b));
    return best;
  }
  /// Max abs entry over blocks with source level <= max_src.
  S max_abs_entry_src_capped(int max_src) const {
    S best = scalar_traits<S>::zero();
    for (std::size_t t = 0; t < blk.size(); ++t)
      for (std::size_t s = 0; s <= static_cast<std::size_t>(max_src) && s < blk.size(); ++s)
        if (blk[t][s].size() > 0) best = std::max(best, nnfock::max_abs<S>(blk[t][s]));
    return best;
  }
  Mat<S> dense() const {
    Eigen::Index n = 0;
    for (auto d0 : dims) n += d0;
    Mat<S> m = Mat<S>::Zero(n, n);
    Eigen::Index ro = 0;
    for (std::size_t t = 0; t < blk.size(); ++t) {
      Eigen::Index co = 0;
      for (std::size_t s = 0; s < blk.size(); ++s) {
        if (blk[t][s].size() > 0) m.block(ro, co, dims[t], dims[s]) = blk[t][s];
        co += dims[s];
      }
      ro += dims[t];
    }
    return m;
  }
};

/// Materializes a generator as a block matrix (bands |target - source| <= 1).
template <class S>
OpMat<S> generator_matrix(const FockContext<S>& fc, GenKind kind, const Vec<S>& b) {
  OpMat<S> m = OpMat<S>::zero(fc);
  for (int src = 0; src <= fc.N; ++src) {
    const Eigen::Index dim_src = fc.level_dim[static_cast<std::size_t>(src)];
    for (Eigen::Index col = 0; col < dim_src; ++col) {
      FockVec<S> e = FockVec<S>::zero(fc);
      e.level(fc, src)(col) = S(1);
      FockVec<S> out = FockVec<S>::zero(fc);
      detail::apply_band(fc, kind, b, src, e.lv[static_cast<std::size_t>(src)], out);
      for (int t = 0; t <= fc.N; ++t) {
        if (!out.has_level(t)) continue;
        const Vec<S>& o = out.lv[static_cast<std::size_t>(t)];
        bool nonzero = false;
        for (Eigen::Index i = 0; i < o.size(); ++i)
          if (o(i) != S(0)) {
            nonzero = true;
            break;
          }
        if (nonzero) m.block(t, src).col(col) = o;
      }
    }
  }
  return m;
}

template <class S>
OpMat<S> a_plus(const FockContext<S>& fc, const Vec<S>& b) {
  return generator_matrix(fc, GenKind::APlus, b);
}
template <class S>
OpMat<S> a_minus(const FockContext<S>& fc, const Vec<S>& b) {
  return generator_matrix(fc, GenKind::AMinus, b);
}
template <class S>
OpMat<S> a_zero(const FockContext<S>& fc, const Vec<S>& b) {
  return generator_matrix(fc, GenKind::AZero, b);
}
template <class S>
OpMat<S> x_op(const FockContext<S>& fc, const Vec<S>& b) {
  return generator_matrix(fc, GenKind::X, b);
}
template <class S>
OpMat<S> a_gamma_tilde(const FockContext<S>& fc, const Vec<S>& b) {
  return generator_matrix(fc, GenKind::AGammaTilde, b);
}
template <class S>
OpMat<S> a_phi_tilde(const FockContext<S>& fc, const Vec<S>& b) {
  return generator_matrix(fc, GenKind::APhiTilde, b);
}

/// Max over levels of || G_tgt A(b) - A'(b^*)^T G_src || for the pairs
/// (a+, a-) and (a0, a0); certifies the adjoint relations of the
/// construction w.r.t. the deformed inner product.
template <class S>
S adjoint_residual(const FockContext<S>& fc, const Vec<S>& b) {
  if (!fc.grams_built) throw std::logic_error("adjoint_residual requires grams");
  Vec<S> b_star = fc.alg.star(b);
  OpMat<S> ap = a_plus(fc, b);
  OpMat<S> am_star = a_minus(fc, b_star);
  OpMat<S> az = a_zero(fc, b);
  OpMat<S> az_star = a_zero(fc, b_star);
  S res = scalar_traits<S>::zero();
  for (int l = 0; l < fc.N; ++l) {
    const Mat<S>& g_hi = fc.gram[static_cast<std::size_t>(l + 1)];
    const Mat<S>& g_lo = fc.gram[static_cast<std::size_t>(l)];
    const Mat<S>* up = ap.maybe_block(l + 1, l);
    const Mat<S>* dn = am_star.maybe_block(l, l + 1);
    Mat<S> lhs = up ? Mat<S>(g_hi * (*up)) : Mat<S>::Zero(g_hi.rows(), g_lo.cols());
    Mat<S> rhs = dn ? Mat<S>(dn->transpose() * g_lo) : Mat<S>::Zero(g_hi.rows(), g_lo.cols());
    res = std::max(res, max_abs<S>(Mat<S>(lhs - rhs)));
  }
  for (int l = 0; l <= fc.N; ++l) {
    const Mat<S>& g = fc.gram[static_cast<std::size_t>(l)];
    const Mat<S>* z = az.maybe_block(l, l);
    const Mat<S>* zs = az_star.maybe_block(l, l);
    Mat<S> lhs = z ? Mat<S>(g * (*z)) : Mat<S>::Zero(g.rows(), g.cols());
    Mat<S> rhs = zs ? Mat<S>(zs->transpose() * g) : Mat<S>::Zero(g.rows(), g.cols());
    res = std::max(res, max_abs<S>(Mat<S>(lhs - rhs)));
  }
  return res;
}

struct QuotientProjector {
  Mat<double> projector;
  Eigen::Index rank = 0;
  bool ill_conditioned = false;  // eigenvalues within 10x of the kernel tolerance
};

/// Projector onto the orthogonal complement of the level's Gram kernel.
template <class S>
QuotientProjector quotient_projector(const FockContext<S>& fc, int level,
                                     double kernel_tol = 1e-10) {
  if (!fc.grams_built) throw std::logic_error("quotient_projector requires grams");
  const Mat<S>& g = fc.gram[static_cast<std::size_t>(level)];
  const Eigen::Index n = g.rows();
  Mat<double> gd(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) gd(i, j) = to_double(g(i, j));
  Eigen::SelfAdjointEigenSolver<Mat<double>> es(0.5 * (gd + gd.transpose()));
  QuotientProjector q;
  q.projector = Mat<double>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double lam = es.eigenvalues()(i);
    if (std::abs(lam) > kernel_tol && std::abs(lam) < 10 * kernel_tol) q.ill_conditioned = true;
    if (lam > kernel_tol) {
      q.projector += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
      ++q.rank;
    }
  }
  return q;
}

/// Checks that `op` maps each level's Gram kernel into the null space
/// (semi-norm-zero vectors map to semi-norm-zero vectors), which certifies
/// that the operator descends to the quotient.
template <class S>
S kernel_preservation_residual(const FockContext<S>& fc, const OpMat<S>& op) {
  if (!fc.grams_built) throw std::logic_error("kernel check requires grams");
  S res = scalar_traits<S>::zero();
  for (int src = 0; src <= fc.N; ++src) {
    const Mat<S>& k = fc.gram_kernel[static_cast<std::size_t>(src)];
    if (k.cols() == 0) continue;
    for (int tgt = 0; tgt <= fc.N; ++tgt) {
      const Mat<S>* b = op.maybe_block(tgt, src);
      if (!b) continue;
      Mat<S> img = (*b) * k;
      res = std::max(res, max_abs<S>(Mat<S>(fc.gram[static_cast<std::size_t>(tgt)] * img)));
    }
  }
  return res;
}

}  // namespace nnfock

#endif
