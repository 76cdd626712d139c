#include "doctest.h"

#include <random>

#include "nnfock/algebra.hpp"
#include "nnfock/examples.hpp"

using namespace nnfock;
using R = Rational;

TEST_CASE("scalar context validates") {
  auto ctx = make_scalar<R>(R(1, 2), R(3));
  auto rep = validate_algebra<R>(ctx);
  CHECK(rep.ok());
}

TEST_CASE("componentwise example with zero deformation validates") {
  auto ctx = make_ma<R>(Mat<R>::Zero(2, 2), {Mat<R>::Zero(2, 2), Mat<R>::Zero(2, 2)});
  CHECK(validate_algebra<R>(ctx).ok());
}

TEST_CASE("phi = 0 fails faithfulness") {
  auto ctx = make_scalar<R>(R(0), R(0));
  ctx.phi_vec(0) = R(0);
  auto rep = validate_algebra<R>(ctx);
  CHECK(!rep.ok());
  auto* c = rep.find("phi_positive_faithful");
  REQUIRE(c != nullptr);
  CHECK(!c->pass);
}

TEST_CASE("broken associativity is caught") {
  auto ctx = make_scalar<R>(R(0), R(0));
  ctx.lmul[0](0, 0) = R(2);  // 1*1 = 2, unit fails
  auto rep = validate_algebra<R>(ctx);
  CHECK(!rep.ok());
}

TEST_CASE("ragged tensors are rejected") {
  auto ctx = make_scalar<R>(R(0), R(0));
  ctx.lam.clear();
  CHECK_THROWS(validate_algebra<R>(ctx));
}

TEST_CASE("cp level check on scalar contexts") {
  // gamma + phi = 1 + t is completely positive iff t >= -1.
  for (int n = 1; n <= 3; ++n) {
    auto ok = make_scalar<R>(R(1, 4), R(0));
    CHECK(check_cp_gamma_phi<R>(ok, R(1), n).pass);
  }
  // map gamma + 0.5 phi at t = -0.8 is multiplication by -0.3 < 0.
  {
    AlgebraContext<R> ctx = make_componentwise<R>(1);
    ctx.gamma_mat(0, 0) = R(-4, 5);
    Mat<R> map = ctx.gamma_mat;
    map(0, 0) += R(1, 2) * ctx.phi_vec(0);
    auto res = check_cp_level<R>(ctx, map, 1);
    CHECK(!res.pass);
    CHECK(res.min_eigenvalue < 0);
  }
}

TEST_CASE("cp certificate for diagonal ma contexts") {
  // Diagonal C with entries >= -1 passes at every level.
  Mat<R> c = Mat<R>::Zero(2, 2);
  c(0, 0) = R(-1);
  c(1, 1) = R(1, 2);
  auto ctx = make_ma<R>(c, {Mat<R>::Zero(2, 2), Mat<R>::Zero(2, 2)});
  for (int n = 1; n <= 3; ++n)
    CHECK(check_cp_gamma_phi<R>(ctx, R(1), n).pass);
  // Entry below -1 fails.
  c(0, 0) = R(-3, 2);
  auto bad = make_ma<R>(c, {Mat<R>::Zero(2, 2), Mat<R>::Zero(2, 2)});
  CHECK(!check_cp_gamma_phi<R>(bad, R(1), 1).pass);
}

TEST_CASE("cp failure is monotone in the level") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-3, 1);
  for (int trial = 0; trial < 30; ++trial) {
    Mat<R> c = Mat<R>::Zero(2, 2);
    c(0, 0) = R(num(rng), 2);
    c(1, 1) = R(num(rng), 2);
    auto ctx = make_ma<R>(c, {Mat<R>::Zero(2, 2), Mat<R>::Zero(2, 2)});
    bool prev_fail = false;
    for (int n = 1; n <= 3; ++n) {
      bool fail = !check_cp_gamma_phi<R>(ctx, R(1), n).pass;
      if (prev_fail) CHECK(fail);
      prev_fail = fail;
    }
  }
}

TEST_CASE("star is an involution on every catalog context") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto ctx = random_context<R>(rng);
    for (int i = 0; i < ctx.dim; ++i) {
      Vec<R> e = ctx.basis(i);
      CHECK(Vec<R>(ctx.star(ctx.star(e))) == e);
    }
  }
}

TEST_CASE("bozejko parameter validation") {
  CHECK_THROWS(make_bozejko<R>({R(-1)}, {R(0)}));
  CHECK_NOTHROW(make_bozejko<R>({R(0), R(2)}, {R(1), R(-1)}));
}

TEST_CASE("lenczewski kernel validation") {
  Mat<R> w = Mat<R>::Constant(3, 3, R(-2));  // w + 1 < 0
  CHECK_THROWS(make_lenczewski_discrete<R>(w, Mat<R>::Zero(3, 3)));
  Mat<R> ok = Mat<R>::Constant(3, 3, R(1, 2));
  auto ctx = make_lenczewski_discrete<R>(ok, Mat<R>::Constant(3, 3, R(1)));
  CHECK(validate_algebra<R>(ctx).ok());
}

TEST_CASE("poisson context is SC(0,1) at d=1") {
  auto p = make_poisson<R>(1);
  auto sc = make_scalar<R>(R(0), R(1));
  CHECK(p.gamma_mat == sc.gamma_mat);
  CHECK(p.lam[0] == sc.lam[0]);
  CHECK(p.phi_vec == sc.phi_vec);
  CHECK(validate_algebra<R>(p).ok());
}

TEST_CASE("eq 2.3 residual vanishes on generated contexts") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto ctx = random_context<R>(rng);
    auto rep = validate_algebra<R>(ctx);
    auto* c = rep.find("lambda_symmetry_eq_2_3");
    REQUIRE(c != nullptr);
    CHECK(c->pass);
    CHECK(c->residual == 0.0);
  }
}

TEST_CASE("float mode validation of a catalog context") {
  auto ctx = make_bozejko<double>({0.5, 1.5}, {1.0, -2.0});
  CHECK(validate_algebra<double>(ctx).ok());
}
