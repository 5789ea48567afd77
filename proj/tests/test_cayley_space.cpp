#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cayley/cayley_lines.hpp"
#include "cayley/cayley_space.hpp"
#include "cayley/random.hpp"
#include "cayley/suites.hpp"
#include "support.hpp"

using namespace cayley;
using cayley::test::dist;
using cayley::test::random_unit;

TEST_CASE("matrix model of the base point and of a geodesic point") {
  const PointMat x0 = vec_to_mat(base_point());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(x0(i, j) == Octonion::real(i == 0 && j == 0 ? 1.0 : 0.0));

  // X_ij = s_i conj(v_i) v_j with s = (1, -1, -1), expanded by hand.
  Rng rng(31);
  const Octonion a = rng.unit_octonion();
  const double t = 0.7, ch = std::cosh(t), sh = std::sinh(t);
  const PointMat x = vec_to_mat(PointVec{ch, a * sh, Octonion{}});
  CHECK(x(0, 0)[0] == doctest::Approx(ch * ch));
  CHECK(dist(x(0, 1), a * (ch * sh)) < 1e-15);
  CHECK(dist(x(1, 0), conj(a) * (-ch * sh)) < 1e-15);
  CHECK(x(1, 1)[0] == doctest::Approx(-sh * sh));
  CHECK(x(2, 2).norm() == 0.0);
  CHECK(membership_defect(x).max() < 1e-14);
}

TEST_CASE("model round trip and rejection of non-members") {
  Rng rng(32);
  for (int s = 0; s < 1000; ++s) {
    const PointVec p = normal_coords(random_unit(rng) * rng.uniform(0.0, 3.0));
    CHECK(std::abs(p.defect()) < 1e-10);
    const PointVec q = mat_to_vec(vec_to_mat(p));
    CHECK(q.theta == doctest::Approx(p.theta).epsilon(1e-12));
    CHECK(dist(q.a, p.a) < 1e-10);
    CHECK(dist(q.b, p.b) < 1e-10);
  }
  PointMat bad;
  bad(0, 0) = Octonion::real(2.0);
  CHECK_THROWS_AS(mat_to_vec(bad), std::domain_error);
}

TEST_CASE("Jordan product") {
  const PointMat x0 = vec_to_mat(base_point());
  CHECK(max_abs_diff(jordan(x0, x0), x0) == 0.0);
  Rng rng(33);
  for (int s = 0; s < 200; ++s) {
    const PointMat x = vec_to_mat(normal_coords(random_unit(rng) * rng.uniform(0.0, 2.0)));
    const PointMat y = vec_to_mat(normal_coords(random_unit(rng) * rng.uniform(0.0, 2.0)));
    CHECK(real_trace(jordan(x, x)) == doctest::Approx(1.0).epsilon(1e-12));
    const double d = distance(x, y);
    CHECK(real_trace(jordan(x, y)) == doctest::Approx((std::cosh(2 * d) + 1) / 2).epsilon(1e-10));
    CHECK(real_trace_jordan(x, y) == doctest::Approx(real_trace(jordan(x, y))).epsilon(1e-12));
  }
}

TEST_CASE("geodesics and normal coordinates") {
  const PointVec g = geodesic(TangentVec{Octonion::real(1.0), Octonion{}}, 1.0);
  CHECK(g.theta == doctest::Approx(std::cosh(1.0)));
  CHECK(g.a[0] == doctest::Approx(std::sinh(1.0)));
  CHECK(g.b.norm() == 0.0);
  CHECK_THROWS_AS(geodesic(TangentVec{Octonion::real(1.1), Octonion{}}, 1.0), std::invalid_argument);

  Rng rng(34);
  const PointVec z = normal_coords(TangentVec{});
  CHECK(z.theta == 1.0);
  for (int s = 0; s < 200; ++s) {
    const TangentVec v = random_unit(rng);
    const double t = rng.uniform(0.0, 5.0);
    const PointVec p = normal_coords(v * t), q = geodesic(v, t);
    CHECK(p.theta == doctest::Approx(q.theta).epsilon(1e-14));
    CHECK(dist(p.a, q.a) < 1e-12);
    const TangentVec w = inverse_normal_coords(p);
    CHECK((w - v * t).norm() < 1e-10);
    CHECK(distance(base_point(), geodesic(v, 0.0)) == 0.0);
  }
}

TEST_CASE("distance: zero on the diagonal, errors below the arccosh guard") {
  Rng rng(35);
  for (int s = 0; s < 200; ++s) {
    const PointVec x = normal_coords(random_unit(rng) * rng.uniform(0.0, 5.0));
    CHECK(distance(x, x) == 0.0);
  }
  PointMat x = vec_to_mat(base_point()), y;
  y(0, 0) = Octonion::real(0.2);
  CHECK_THROWS_AS(distance(x, y), std::domain_error);
}

TEST_CASE("perpendicular Cayley lines: cosh d = cosh t1 cosh t2") {
  Rng rng(36);
  for (int s = 0; s < 200; ++s) {
    const TangentVec v{rng.unit_octonion(), Octonion{}}, w{Octonion{}, rng.unit_octonion()};
    const double t1 = rng.uniform(0.01, 10.0), t2 = rng.uniform(0.01, 10.0);
    const double d = distance(geodesic(v, t1), geodesic(w, t2));
    const double expected = std::acosh(std::cosh(t1) * std::cosh(t2));
    CHECK(d == doctest::Approx(expected).epsilon(1e-10));
  }
}

// Independent oracle: hyperboloid model of the real hyperbolic plane.
TEST_CASE("totally real planes are hyperbolic planes of curvature -1") {
  Rng rng(37);
  for (int s = 0; s < 500; ++s) {
    const Octonion p = rng.unit_octonion(), q = rng.unit_octonion();
    const double t1 = rng.uniform(0.01, 5.0), t2 = rng.uniform(0.01, 5.0);
    const double f1 = rng.uniform(0.0, 2 * M_PI), f2 = rng.uniform(0.0, 2 * M_PI);
    const TangentVec v{p * std::cos(f1), q * std::sin(f1)}, w{p * std::cos(f2), q * std::sin(f2)};
    // Minkowski inner product of (cosh t, sinh t cos f, sinh t sin f).
    const double mink = std::cosh(t1) * std::cosh(t2) - std::sinh(t1) * std::sinh(t2) * std::cos(f1 - f2);
    const double d = distance(geodesic(v, t1), geodesic(w, t2));
    CHECK(std::cosh(d) == doctest::Approx(mink).epsilon(1e-9));
  }
}

TEST_CASE("a Cayley line is a hyperbolic plane of curvature -4") {
  Rng rng(38);
  for (int s = 0; s < 500; ++s) {
    const Octonion x1 = rng.unit_octonion(), x2 = rng.unit_octonion();
    const double t1 = rng.uniform(0.01, 5.0), t2 = rng.uniform(0.01, 5.0);
    const double d = distance(geodesic(TangentVec{x1, Octonion{}}, t1), geodesic(TangentVec{x2, Octonion{}}, t2));
    const double expected =
        std::cosh(2 * t1) * std::cosh(2 * t2) - std::sinh(2 * t1) * std::sinh(2 * t2) * inner(x1, x2);
    CHECK(std::cosh(2 * d) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("hinge in a Cayley line") {
  Rng rng(39);
  const TangentVec v = random_unit(rng);
  const Octonion b = rng.unit_octonion();
  const HingeCosine same = hinge_cosine_cayley(b, b, v, 2.0, 2.0);
  CHECK(same.closed_form == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(same.trace_form == doctest::Approx(1.0).epsilon(1e-9));

  // J_1 v is perpendicular to v.
  const HingeCosine perp = hinge_cosine_cayley(Octonion::real(1.0), Octonion::unit(1), v, 1.0, 1.0);
  CHECK(perp.closed_form == doctest::Approx(std::cosh(2.0) * std::cosh(2.0)).epsilon(1e-12));
  CHECK(perp.trace_form == doctest::Approx(std::cosh(2.0) * std::cosh(2.0)).epsilon(1e-10));

  CHECK_THROWS_AS(hinge_cosine_cayley(b, b, v, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hinge_cosine_cayley(b, b, v, 1.0, 15.5), std::invalid_argument);
}

TEST_CASE("metric in normal coordinates matches distances") {
  Rng rng(40);
  CHECK(max_abs_diff(metric_in_normal_coords(TangentVec{}), Matrix::identity(16)) < 1e-14);
  for (int s = 0; s < 50; ++s) {
    const TangentVec w = random_unit(rng) * rng.uniform(0.1, 2.0);
    const Matrix g = metric_in_normal_coords(w);
    CHECK(min_eigenvalue(g) > 0.0);
    const TangentVec e = random_unit(rng);
    const double h = 1e-6;
    const double d = distance(normal_coords(w), normal_coords(w + e * h));
    const Vec16 ea = e.to_array();
    const std::vector<double> ge = g * std::span<const double>(ea);
    CHECK(d / h == doctest::Approx(std::sqrt(dot(ea, ge))).epsilon(1e-5));
  }
}

TEST_CASE("normal coordinate Jacobian matches central differences") {
  Rng rng(41);
  for (int s = 0; s < 30; ++s) {
    const TangentVec w = random_unit(rng) * rng.uniform(0.1, 2.0);
    const Matrix j = normal_coords_jacobian(w);
    REQUIRE(j.rows() == 17);
    const Vec16 wa = w.to_array();
    for (std::size_t k = 0; k < 16; ++k) {
      Vec16 p = wa, m = wa;
      p[k] += 1e-6;
      m[k] -= 1e-6;
      const PointVec xp = normal_coords(TangentVec::from_array(p)), xm = normal_coords(TangentVec::from_array(m));
      CHECK(j(0, k) == doctest::Approx((xp.theta - xm.theta) / 2e-6).epsilon(1e-6));
      for (std::size_t r = 0; r < 8; ++r) {
        CHECK(std::abs(j(1 + r, k) - (xp.a[r] - xm.a[r]) / 2e-6) < 1e-6);
        CHECK(std::abs(j(9 + r, k) - (xp.b[r] - xm.b[r]) / 2e-6) < 1e-6);
      }
    }
  }
}

TEST_CASE("Busemann function at the base point") {
  Rng rng(42);
  for (int s = 0; s < 100; ++s) {
    const BoundaryPoint th = BoundaryPoint::from_direction(random_unit(rng) * 3.0);
    CHECK(th.dir.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(busemann(base_point(), th)) < 1e-15);
    const TangentVec g = busemann_grad(base_point(), th);
    CHECK((g + th.dir).norm() < 1e-12);
    const Matrix h = busemann_hessian(th);
    CHECK(max_abs_diff(h, h.transpose()) == 0.0);
    CHECK(h.trace() == doctest::Approx(22.0).epsilon(1e-12));
    CHECK(min_eigenvalue(h) > -1e-12);
  }
  CHECK_THROWS_AS(BoundaryPoint::from_direction(TangentVec{}), std::invalid_argument);
}

TEST_CASE("geometry suite") {
  SuiteOptions o;
  o.seed = 77;
  o.samples = 1000;
  for (const SuiteResult& s : run_geometry(o)) {
    INFO(s.name, " min_slack=", s.min_slack, " tol=", s.tol);
    CHECK(s.passed);
  }
}
