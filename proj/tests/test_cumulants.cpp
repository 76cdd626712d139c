#include "doctest.h"

#include <random>

#include "nnfock/cumulants.hpp"
#include "nnfock/examples.hpp"

using namespace nnfock;
using R = Rational;

namespace {

std::vector<Vec<R>> basis_word(const AlgebraContext<R>& alg, const std::vector<int>& w) {
  std::vector<Vec<R>> out;
  for (int i : w) out.push_back(alg.basis(i));
  return out;
}

// Enumerates all words over {0..d-1} of the given length.
void for_each_word(int d, int len, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> w(static_cast<std::size_t>(len), 0);
  while (true) {
    fn(w);
    int p = 0;
    while (p < len) {
      if (++w[static_cast<std::size_t>(p)] < d) break;
      w[static_cast<std::size_t>(p)] = 0;
      ++p;
    }
    if (p == len) break;
  }
}

std::function<R(std::span<const int>)> moment_fn(const AlgebraContext<R>& ctx) {
  return [&ctx](std::span<const int> w) -> R {
    std::vector<Vec<R>> elems;
    for (int i : w) elems.push_back(ctx.basis(i));
    return vacuum_moment<R>(ctx, elems);
  };
}

}  // namespace

TEST_CASE("scalar witnesses for partition sums") {
  R t(1, 3), lam(2, 5);
  auto ctx = make_scalar<R>(t, lam);
  auto fc = build_fock<R>(ctx, 6, GramMode::None);
  auto w = [&](int n) { return basis_word(ctx, std::vector<int>(static_cast<std::size_t>(n), 0)); };

  CHECK(moment_partition_sum<R>(fc, w(1)) == R(0));
  CHECK(moment_partition_sum<R>(fc, w(4)) == R(2) + t + lam * lam);
  // With lambda = 0 only pair partitions survive, weighted by nesting depth.
  auto fc0 = build_fock<R>(make_scalar<R>(t, R(0)), 6, GramMode::None);
  CHECK(moment_partition_sum<R>(fc0, basis_word(fc0.alg, {0, 0, 0, 0, 0, 0})) ==
        R(1) + 2 * (1 + t) + 2 * (1 + t) * (1 + t));

  CHECK(boolean_cumulant<R>(fc, w(4)) == lam * lam + (1 + t));
  CHECK(boolean_cumulant<R>(fc, w(5)) == lam * lam * lam + 3 * lam * (1 + t));
  CHECK(free_cumulant<R>(fc, w(4)) == lam * lam + t);
  CHECK(free_cumulant<R>(fc, w(5)) == lam * lam * lam + 3 * lam * t);
}

TEST_CASE("moment formula equals operator moments on random contexts") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    auto ctx = random_context<R>(rng, 2);
    auto fc = build_fock<R>(ctx, 6, GramMode::None);
    for (int len = 1; len <= 5; ++len)
      for_each_word(ctx.dim, len, [&](const std::vector<int>& w) {
        auto elems = basis_word(ctx, w);
        std::vector<Gen<R>> ops;
        for (const auto& e : elems) ops.push_back({GenKind::X, e});
        CHECK(moment_partition_sum<R>(fc, elems) == vacuum_expectation<R>(fc, ops));
      });
  }
}

TEST_CASE("cumulant formulas match the moebius oracles") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    auto ctx = random_context<R>(rng, 2);
    auto fc = build_fock<R>(ctx, 6, GramMode::None);
    auto m = moment_fn(ctx);
    for (int len = 1; len <= 5; ++len)
      for_each_word(ctx.dim, len, [&](const std::vector<int>& w) {
        auto elems = basis_word(ctx, w);
        CHECK(free_cumulant<R>(fc, elems) == mobius_free_cumulants<R>(m, w));
        CHECK(boolean_cumulant<R>(fc, elems) == mobius_boolean_cumulants<R>(m, w));
      });
  }
}

TEST_CASE("gamma = -phi corollary: boolean cumulant is the single chain") {
  R lam(3, 4);
  auto ctx = make_scalar<R>(R(-1), lam);
  auto fc = build_fock<R>(ctx, 6, GramMode::None);
  for (int n = 2; n <= 6; ++n) {
    std::vector<Gen<R>> chain;
    chain.push_back({GenKind::AMinus, ctx.basis(0)});
    for (int i = 0; i < n - 2; ++i) chain.push_back({GenKind::AZero, ctx.basis(0)});
    chain.push_back({GenKind::APlus, ctx.basis(0)});
    R expect = vacuum_expectation<R>(fc, chain);
    CHECK(boolean_cumulant<R>(fc, basis_word(ctx, std::vector<int>(static_cast<std::size_t>(n), 0))) ==
          expect);
  }
  // n = 4: only lambda^2 survives.
  CHECK(boolean_cumulant<R>(fc, basis_word(ctx, {0, 0, 0, 0})) == lam * lam);
}

TEST_CASE("gamma = 0 corollary: free cumulant is the single chain") {
  auto ctx = make_poisson<R>(2);
  auto fc = build_fock<R>(ctx, 6, GramMode::None);
  for (int len = 2; len <= 5; ++len)
    for_each_word(2, len, [&](const std::vector<int>& w) {
      std::vector<Gen<R>> chain;
      chain.push_back({GenKind::AMinus, ctx.basis(w[0])});
      for (int i = 1; i + 1 < len; ++i)
        chain.push_back({GenKind::AZero, ctx.basis(w[static_cast<std::size_t>(i)])});
      chain.push_back({GenKind::APlus, ctx.basis(w[static_cast<std::size_t>(len - 1)])});
      CHECK(free_cumulant<R>(fc, basis_word(ctx, w)) == vacuum_expectation<R>(fc, chain));
    });
}

TEST_CASE("free Poisson cumulants are all one") {
  auto ctx = make_scalar<R>(R(0), R(1));
  auto fc = build_fock<R>(ctx, 6, GramMode::None);
  for (int n = 2; n <= 6; ++n)
    CHECK(free_cumulant<R>(fc, basis_word(ctx, std::vector<int>(static_cast<std::size_t>(n), 0))) ==
          R(1));
}

TEST_CASE("diagonal cumulant formula matches the partition formula") {
  std::vector<R> eta{R(1, 2), R(2)};
  std::vector<R> lam{R(1), R(-1, 2)};
  auto ctx = make_bozejko<R>(eta, lam);
  auto fc = build_fock<R>(ctx, 6, GramMode::None);
  for (int len = 2; len <= 5; ++len)
    for_each_word(2, len, [&](const std::vector<int>& w) {
      auto elems = basis_word(ctx, w);
      CHECK(bozejko_cumulant_formula<R>(ctx, elems) == free_cumulant<R>(fc, elems));
    });
  // d=1 witnesses.
  R t(1, 3), l(2, 7);
  auto sc = make_scalar<R>(t, l);
  CHECK(bozejko_cumulant_formula<R>(sc, basis_word(sc, {0, 0, 0, 0})) == l * l + t);
  CHECK(bozejko_cumulant_formula<R>(sc, basis_word(sc, {0, 0, 0, 0, 0})) ==
        l * l * l + 3 * l * t);
  CHECK_THROWS(bozejko_cumulant_formula<R>(make_poisson<R>(2), basis_word(ctx, {0, 0})));
}

TEST_CASE("eta f = lambda f = 0 makes X(f) semicircular") {
  // d = 2 with eta, lambda vanishing on e_1.
  auto ctx = make_bozejko<R>({R(2), R(0)}, {R(1), R(0)});
  auto fc = build_fock<R>(ctx, 6, GramMode::None);
  std::vector<Vec<R>> f2{ctx.basis(1), ctx.basis(1)};
  CHECK(free_cumulant<R>(fc, f2) == ctx.phi(ctx.mul(ctx.basis(1), ctx.basis(1))));
  for (int n = 3; n <= 6; ++n) {
    std::vector<Vec<R>> fn(static_cast<std::size_t>(n), ctx.basis(1));
    CHECK(free_cumulant<R>(fc, fn) == R(0));
    CHECK(bozejko_cumulant_formula<R>(ctx, fn) == R(0));
  }
}

TEST_CASE("orthogonal elements with zero products give free variables") {
  // f = e_0, g = e_1 componentwise: f g = 0, so every mixed free cumulant
  // with both letters vanishes.
  auto ctx = make_bozejko<R>({R(1), R(1, 2)}, {R(1, 3), R(2)});
  auto fc = build_fock<R>(ctx, 6, GramMode::None);
  for (int len = 2; len <= 6; ++len)
    for_each_word(2, len, [&](const std::vector<int>& w) {
      bool has0 = false, has1 = false;
      for (int c : w) (c == 0 ? has0 : has1) = true;
      if (!has0 || !has1) return;
      CHECK(free_cumulant<R>(fc, basis_word(ctx, w)) == R(0));
    });
}

TEST_CASE("r_prime base cases and scalar values") {
  R t(1, 2), lam(2, 3);
  auto ctx = make_scalar<R>(t, lam);
  CHECK(r_prime<R>(ctx, {}) == Mat<R>(Mat<R>::Identity(1, 1)));
  CHECK(r_prime<R>(ctx, basis_word(ctx, {0}))(0, 0) == lam);
  CHECK(r_prime<R>(ctx, basis_word(ctx, {0, 0}))(0, 0) == t + lam * lam);
  CHECK(r_prime<R>(ctx, basis_word(ctx, {0, 0, 0}))(0, 0) ==
        lam * lam * lam + 3 * lam * t);
}

TEST_CASE("r_prime recursion equals the interval-partition definition") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 4; ++trial) {
    auto ctx = random_context<R>(rng, 2);
    std::uniform_int_distribution<int> num(-2, 2);
    Vec<R> u(ctx.dim);
    for (int i = 0; i < ctx.dim; ++i) u(i) = R(num(rng), 2);
    auto recursive = r_prime_recursive_all<R>(ctx, u, 8);
    for (int n = 0; n <= 8; ++n) {
      std::vector<Vec<R>> w(static_cast<std::size_t>(n), u);
      CHECK(r_prime<R>(ctx, w) == recursive[static_cast<std::size_t>(n)]);
    }
  }
}

TEST_CASE("R[X(u_0),...,X(u_{k+1})] = phi[u_0 R'[u_1..u_k] u_{k+1}]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    auto ctx = random_context<R>(rng, 2);
    auto fc = build_fock<R>(ctx, 6, GramMode::None);
    for (int k = 0; k <= 4; ++k)
      for_each_word(ctx.dim, k, [&](const std::vector<int>& inner) {
        Mat<R> rp = r_prime<R>(ctx, basis_word(ctx, inner));
        for (int a = 0; a < ctx.dim; ++a)
          for (int b = 0; b < ctx.dim; ++b) {
            std::vector<int> full;
            full.push_back(a);
            for (int c : inner) full.push_back(c);
            full.push_back(b);
            R lhs = free_cumulant<R>(fc, basis_word(ctx, full));
            R rhs = ctx.phi(ctx.mul(ctx.basis(a), Vec<R>(rp * ctx.basis(b))));
            CHECK(lhs == rhs);
          }
      });
  }
}

TEST_CASE("generating function residuals vanish to degree 8") {
  R t(1, 3), lam(1, 2);
  auto ctx = make_scalar<R>(t, lam);
  auto rep = cumulant_gf_residual<R>(ctx, ctx.basis(0), 8);
  CHECK(rep.exact_zero);
  CHECK(rep.quadratic.size() == 9);
  CHECK(!rep.bozejko.empty());

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    auto rctx = random_context<R>(rng, 2);
    std::uniform_int_distribution<int> num(-2, 2);
    Vec<R> u(rctx.dim);
    for (int i = 0; i < rctx.dim; ++i) u(i) = R(num(rng), 2);
    CHECK(cumulant_gf_residual<R>(rctx, u, 6).exact_zero);
  }
}

TEST_CASE("bozejko quadratic equation holds for a diagonal context") {
  auto ctx = make_bozejko<R>({R(1, 2), R(1)}, {R(2), R(-1)});
  Vec<R> u(2);
  u(0) = R(1, 2);
  u(1) = R(-1, 3);
  auto rep = cumulant_gf_residual<R>(ctx, u, 6);
  CHECK(rep.exact_zero);
  CHECK(rep.bozejko.size() == 7);
}

TEST_CASE("multivariate generating function reduces to the sum variable") {
  auto ctx = make_bozejko<R>({R(1, 2), R(2)}, {R(1), R(-1, 2)});
  std::vector<Vec<R>> us{ctx.basis(0), ctx.basis(1),
                         Vec<R>(ctx.basis(0) + ctx.basis(1))};
  Vec<R> total = Vec<R>::Zero(ctx.dim);
  for (const auto& u : us) total += u;
  for (int n = 0; n <= 4; ++n) {
    Mat<R> mixed = r_prime_mixed_degree<R>(ctx, us, n);
    std::vector<Vec<R>> w(static_cast<std::size_t>(n), total);
    CHECK(mixed == r_prime<R>(ctx, w));
  }
  // Quadratic identity for the summed variable = the multivariate corollary.
  CHECK(cumulant_gf_residual<R>(ctx, total, 5).exact_zero);
}

TEST_CASE("partition sums agree across execution policies") {
  auto ctx = make_bozejko<R>({R(1, 2), R(2)}, {R(1), R(-1, 3)});
  auto fc = build_fock<R>(ctx, 6, GramMode::None);
  std::vector<Vec<R>> w(6, ctx.basis(0));
  w[1] = ctx.basis(1);
  w[4] = ctx.basis(1);
  CHECK(moment_partition_sum<R>(fc, w, ExecPolicy::Serial) ==
        moment_partition_sum<R>(fc, w, ExecPolicy::OpenMP));
  CHECK(free_cumulant<R>(fc, w, ExecPolicy::Serial) ==
        free_cumulant<R>(fc, w, ExecPolicy::OpenMP));
}
