#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cayley/inequalities.hpp"
#include "cayley/random.hpp"
#include "cayley/suites.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cayley;
using cayley::test::random_orthogonal;
using cayley::test::uniform_fixture;

namespace {

BlockForm uniform_blockform() {
  BlockForm bf;
  bf.a.fill(1.0 / 16);
  bf.b.fill(1.0 / 16);
  bf.lambda = bf.mu = 0.5;
  return bf;
}

Matrix with_spectrum(Rng& rng, const std::vector<double>& ev) {
  const Matrix q = random_orthogonal(rng, ev.size());
  return (q * Matrix::diagonal(ev) * q.transpose()).symmetrized();
}

}  // namespace

TEST_CASE("main ratio: equality at the uniform fixture") {
  const SlackReport r = main_ratio(build_forms(uniform_fixture()));
  CHECK_FALSE(r.degenerate);
  CHECK(r.passed);
  CHECK(std::abs(r.slack) < 1e-12);
  CHECK(std::abs(r.rel_slack) < 1e-12);
  CHECK(r.rhs == doctest::Approx(std::pow(4.0 / 22.0, 16)).epsilon(1e-15));
}

TEST_CASE("main ratio: a single atom makes the denominator vanish") {
  Rng rng(71);
  const FormPair fp = build_forms(DiscreteMeasure::from_atoms({Atom{test::random_unit(rng), 1.0}}));
  const SlackReport r = main_ratio(fp);
  CHECK(r.degenerate);
  CHECK(r.passed);
  CHECK(std::isnan(r.slack));
}

TEST_CASE("main ratio on random measures") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const FormPair fp = build_forms(sample_measure(seed, 2 + seed % 63));
    const SlackReport r = main_ratio(fp);
    INFO("seed ", seed, " slack ", r.slack);
    CHECK(r.passed);
    if (r.degenerate) continue;
    // Direct determinant quotient as a cross-check of the log-space path.
    Matrix den = Matrix::identity(16) - fp.h * 2.0 + fp.hhat;
    const double direct = std::sqrt(std::max(det_lu(fp.h), 0.0)) / det_lu(den);
    CHECK(r.lhs == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("L(x) agrees with its defining quotient and the F identity") {
  for (int i = 1; i <= 200; ++i) {
    const double x = (1.0 / 22.0) * i / 200.0;
    const double literal = std::pow(7.0 * std::pow(x, 8), 4.0 / 15.0) / (std::pow(1.0 - x, 7) * (1.0 - 7.0 * x)) *
                           std::pow(1.0 - 14.0 * x / 8.0, 8) / std::pow(14.0 * x / 8.0, 32.0 / 15.0);
    CHECK(fn_l(x) == doctest::Approx(literal).epsilon(1e-12));

    const double y = (1.0 - 14.0 * x) / 8.0;
    std::array<double, 16> lhs{}, rhs{};
    lhs[0] = 7.0 * x;
    rhs[0] = 14.0 * x / 8.0;
    for (std::size_t j = 1; j < 9; ++j) lhs[j] = rhs[j] = y;
    for (std::size_t j = 9; j < 16; ++j) {
      lhs[j] = x;
      rhs[j] = 14.0 * x / 8.0;
    }
    CHECK(fn_big_f(lhs) == doctest::Approx(fn_l(x) * fn_big_f(rhs)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(fn_l(0.05), std::invalid_argument);
  CHECK_THROWS_AS(fn_r(1.0 / 22.0), std::invalid_argument);
}

TEST_CASE("scalar functions: values and domains") {
  CHECK(fn_x(1.0 / 3.0) == doctest::Approx(2.0 / 27.0).epsilon(1e-15));
  CHECK(fn_x(0.75) == doctest::Approx(9.0 / 64.0).epsilon(1e-15));
  CHECK(fn_k1(0.0) == 1.0);
  CHECK(fn_k1(1.0) == doctest::Approx(std::pow(8.0 / 5.0, 8)).epsilon(1e-14));
  CHECK(fn_f_deriv2(concavity_threshold()) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  const ScalarValues v = scalar_functions(0.5);
  CHECK_FALSE(v.l.has_value());
  CHECK_FALSE(v.r.has_value());
  REQUIRE(v.f.has_value());
  CHECK(*v.f == doctest::Approx(std::log(2.0) + (4.0 / 15.0) * std::log(0.5)));
  CHECK(v.k1.has_value());
  // Central differences of the closed-form derivatives.
  for (double t : {0.1, 0.3, 0.6, 0.9}) {
    const double h = 1e-6;
    CHECK(fn_f_deriv(t) == doctest::Approx((fn_f(t + h) - fn_f(t - h)) / (2 * h)).epsilon(1e-7));
    CHECK(fn_f_deriv2(t) == doctest::Approx((fn_f_deriv(t + h) - fn_f_deriv(t - h)) / (2 * h)).epsilon(1e-6));
  }
  for (double x : {0.01, 0.03, 0.045}) {
    const double h = 1e-7;
    CHECK(fn_l_logderiv(x) ==
          doctest::Approx((std::log(fn_l(x + h)) - std::log(fn_l(x - h))) / (2 * h)).epsilon(1e-6));
    CHECK(fn_r_logderiv(x) ==
          doctest::Approx((std::log(fn_r(x + h)) - std::log(fn_r(x - h))) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("alpha window") {
  const AlphaWindow w = alpha_window();
  CHECK(w.lo == doctest::Approx(0.18350341907227397).epsilon(1e-15));
  CHECK(w.lo < 0.2);
  CHECK(w.hi >= 0.266);
  CHECK(w.hi <= 0.267);
}

TEST_CASE("E_beta: water filling against projected gradient") {
  Rng rng(72);
  for (int s = 0; s < 200; ++s) {
    const std::array<double, 8> mus = test::random_mus(rng, rng.uniform(0.01, 1.0));
    const double beta = s % 10 == 0 ? 0.0 : rng.uniform(0.0, 0.99);
    const EbetaMax e = ebeta_max(mus, beta);
    Rng orng(72, s);
    const double oracle = test::ebeta_oracle(mus, beta, 10, orng);
    INFO("instance ", s, " beta ", beta);
    CHECK(std::abs(e.sup - oracle) < 1e-6);
    // The returned point is feasible and attains the reported value.
    double mu = 0.0, taxed = 0.0, prod = 1.0;
    for (std::size_t j = 0; j < 8; ++j) {
      mu += mus[j];
      taxed += e.zetas[j];
      CHECK(e.zetas[j] >= 0.0);
      CHECK(e.zetas[j] <= mus[j] + 1e-15);
      if (mus[j] > 0.0) prod *= 1.0 - e.zetas[j] / mus[j];
    }
    CHECK(taxed == doctest::Approx(beta * mu).epsilon(1e-12).scale(mu));
    CHECK(prod == doctest::Approx(e.sup).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("E_beta: special cases") {
  std::array<double, 8> equal{};
  equal.fill(0.125);
  for (double beta : {0.0, 0.1, 0.5, 0.9, 1.0})
    CHECK(std::abs(ebeta_max(equal, beta).sup - std::pow(1.0 - beta, 8)) < 1e-12);

  // Small beta only taxes the top entry.
  const std::array<double, 8> mus{0.5, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05, 0.0};
  const double beta = 0.2;
  const EbetaMax e = ebeta_max(mus, beta);
  CHECK(e.zetas[0] == doctest::Approx(beta * 1.0));
  for (std::size_t j = 1; j < 8; ++j) CHECK(e.zetas[j] == 0.0);
  CHECK(e.sup == doctest::Approx(1.0 - 0.2 / 0.5));

  CHECK(ebeta_max(mus, 0.0).sup == 1.0);
  CHECK_THROWS_AS(ebeta_max(mus, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(ebeta_max({0.1, 0.2, 0, 0, 0, 0, 0, 0}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ebeta_max({}, 0.5), std::invalid_argument);
}

TEST_CASE("Schur split") {
  Rng rng(73);
  for (int s = 0; s < 100; ++s) {
    const Matrix q1 = with_spectrum(rng, {3.0, 2.0, 1.0, 0.5});
    Matrix p(4, 3);
    for (double& x : p.data()) x = 0.3 * rng.normal();
    const Matrix q2 = with_spectrum(rng, {2.0, 1.5, 1.0});
    const SchurSplit sp = schur_split(q1, p, q2);
    const double lu = det_lu(assemble_blocks(q1, p, p.transpose(), q2));
    CHECK(sp.det == doctest::Approx(lu).epsilon(1e-10));
    CHECK(sp.psd == (min_eigenvalue(assemble_blocks(q1, p, p.transpose(), q2)) >= 0.0));
  }
  const Matrix diag = Matrix::diagonal(std::vector<double>{2.0, 3.0});
  const SchurSplit sp = schur_split(diag, Matrix(2, 2), diag);
  CHECK(sp.det == doctest::Approx(36.0));
  CHECK(max_abs_diff(sp.complement, diag) < 1e-15);

  Matrix p(2, 2);
  p(0, 1) = 1.0;
  CHECK_THROWS_WITH_AS(schur_split(Matrix(2, 2), p, diag), "Schur undefined", std::domain_error);
  CHECK(schur_split(Matrix(2, 2), Matrix(2, 2), diag).det == 0.0);
}

TEST_CASE("easy linear algebra lemma") {
  const auto one = [](double x) { return Matrix::diagonal(std::vector<double>{x}); };
  const SlackReport r = easy_linalg_check(one(3.0), one(2.0), one(1.0));
  CHECK(r.lhs == doctest::Approx(3.0));
  CHECK(r.rhs == doctest::Approx(4.0));
  CHECK(r.slack == doctest::Approx(1.0));
  CHECK(r.passed);

  Rng rng(74);
  const Matrix h2 = with_spectrum(rng, {1.0, 0.7, 0.2});
  const Matrix h1 = h2 + with_spectrum(rng, {0.5, 0.1, 0.0});
  CHECK(std::abs(easy_linalg_check(h1, h2, Matrix(3, 3)).slack) < 1e-14);

  CHECK_THROWS_AS(easy_linalg_check(one(1.0), one(2.0), one(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(easy_linalg_check(one(3.0), one(2.0), one(2.5)), std::invalid_argument);
  CHECK_THROWS_AS(easy_linalg_check(one(3.0), one(2.0), one(-0.5)), std::invalid_argument);
}

TEST_CASE("reverse AM-GM: extremal pattern and preconditions") {
  Rng rng(75);
  // Spectrum (m, m, K - 2m - 5M, M x5) attains the bound.
  for (int s = 0; s < 50; ++s) {
    const double m = rng.uniform(0.1, 1.0), big_m = m + rng.uniform(0.0, 2.0);
    const double k = 3 * m + 5 * big_m + rng.uniform(1e-3, 1.0) * (big_m - m);
    const Matrix q = with_spectrum(rng, {m, m, k - 2 * m - 5 * big_m, big_m, big_m, big_m, big_m, big_m});
    const SlackReport r = reverse_amgm_check(q, m, big_m, k);
    CHECK(r.passed);
    CHECK(std::abs(r.rel_slack) < 1e-12);
  }
  const Matrix q = Matrix::identity(8) * 2.0;
  CHECK_THROWS_AS(reverse_amgm_check(q, 2.0, 2.0, 16.5), std::invalid_argument);
  CHECK_THROWS_AS(reverse_amgm_check(q, 1.0, 2.0, 12.0), std::invalid_argument);
  CHECK_THROWS_AS(reverse_amgm_check(q, 0.0, 2.0, 16.0), std::invalid_argument);
  CHECK_THROWS_AS(reverse_amgm_check(q, 2.5, 3.0, 23.0), std::invalid_argument);
  CHECK_THROWS_AS(reverse_amgm_check(Matrix::identity(7), 1.0, 1.0, 9.0), std::invalid_argument);
}

TEST_CASE("key lemma: equality at the uniform block form") {
  const auto [p1, p2] = key_lemma_check(uniform_blockform(), 0.25);
  CHECK(std::abs(p1.rel_slack) < 1e-12);
  CHECK(std::abs(p2.rel_slack) < 1e-12);
  CHECK(p1.passed);
  CHECK(p2.passed);
  CHECK(case_classify(uniform_blockform()) == Case::kBalanced);

  const SlackReport lc = log_concavity_bound(uniform_blockform(), 0.0);
  CHECK(lc.lhs == doctest::Approx(std::pow(11.0 / 8.0, 16)).epsilon(1e-13));
  CHECK(std::abs(lc.rel_slack) < 1e-12);
}

TEST_CASE("case classification") {
  BlockForm bf = uniform_blockform();
  bf.b = {0.25, 0.25 / 7, 0.25 / 7, 0.25 / 7, 0.25 / 7, 0.25 / 7, 0.25 / 7, 0.25 / 7};
  CHECK(case_classify(bf) == Case::kBalanced);  // 2 mu_1 = mu
  bf.b = {0.5, 0, 0, 0, 0, 0, 0, 0};
  CHECK(case_classify(bf) == Case::kDominant);
  bf = uniform_blockform();
  bf.a = {0.3, 0.2 / 7, 0.2 / 7, 0.2 / 7, 0.2 / 7, 0.2 / 7, 0.2 / 7, 0.2 / 7};
  CHECK(case_classify(bf) == Case::kDominant);
  CHECK(orient_dominant(bf).b[0] == doctest::Approx(0.3));
}

TEST_CASE("key lemma on sampled block forms") {
  Rng rng(76);
  for (int s = 0; s < 2000; ++s) {
    const BlockForm bf = sample_blockform(rng);
    const auto [p1, p2] = key_lemma_check(bf, 0.25);
    INFO("sample ", s);
    CHECK(p1.passed);
    CHECK(p2.passed);
    if (case_classify(bf) == Case::kBalanced) CHECK(good_case(bf).passed);
  }
}

TEST_CASE("F_Gmax reduction") {
  // (1 - 15x, x, ..., x) is a fixed point.
  for (double x : {0.0, 0.01, 0.03, 1.0 / 22.0}) {
    std::array<double, 16> nu{};
    nu.fill(x);
    nu[0] = 1.0 - 15.0 * x;
    const std::array<double, 16> np = f_gmax_reduce(nu);
    for (std::size_t j = 0; j < 16; ++j) CHECK(np[j] == doctest::Approx(nu[j]).epsilon(1e-14).scale(1.0));
    CHECK(f_gmax_conditions(nu, np).max() < 1e-14);
  }
  std::array<double, 16> bad{};
  bad.fill(1.0 / 16);
  bad[0] = 0.0;
  CHECK_THROWS_AS(f_gmax_reduce(bad), std::invalid_argument);
  std::array<double, 16> uniform{};
  uniform.fill(1.0 / 16);
  CHECK_THROWS_AS(f_gmax_reduce(uniform), std::invalid_argument);
}

TEST_CASE("sharp ratio and quotient") {
  const FormPair u = build_forms(uniform_fixture());
  const SlackReport r = sharp_ratio(u, 5.0);
  CHECK(std::abs(r.slack) < 1e-12);
  CHECK(uniform_deviation(u.h) < 1e-28);
  CHECK_FALSE(sharp_quotient(u).has_value());
  CHECK_THROWS_AS(sharp_ratio(u, -1.0), std::invalid_argument);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const FormPair fp = build_forms(sample_measure(seed, 3 + seed % 50));
    const SlackReport m = main_ratio(fp), k0 = sharp_ratio(fp, 0.0);
    if (m.degenerate) continue;
    CHECK(k0.slack == doctest::Approx(m.slack).epsilon(1e-14));
    const std::optional<double> q = sharp_quotient(fp);
    REQUIRE(q.has_value());
    CHECK(*q > 0.0);
    // At K equal to the quotient the sharp bound holds with equality.
    CHECK(std::abs(sharp_ratio(fp, *q).rel_slack) < 1e-9);
  }
}

TEST_CASE("identities of the proof") {
  Rng rng(77);
  Matrix c(8, 8);
  for (double& x : c.data()) x = rng.normal();
  std::array<double, 8> d{};
  for (double& x : d) x = rng.normal();
  CHECK(decomp_c_residual(c, d) < 1e-12);

  const BlockForm u = uniform_blockform();
  CHECK(schur_h_min_eig(u) == doctest::Approx(1.0 / 16));
  CHECK(schur_gap_min_eig(u) == doctest::Approx(7.0 / 16));
  CHECK(monotonicity_defect(u) == 0.0);
  CHECK(pos_def_mat_2_min_eig(u) == doctest::Approx(15.0 / 16));
  const auto [ga, gb] = am_gm_good(u);
  CHECK(std::abs(ga.rel_slack) < 1e-13);
  CHECK(std::abs(gb.rel_slack) < 1e-13);
  CHECK(good_case(u).passed);
  CHECK(std::abs(good_case(u).rel_slack) < 1e-12);
}

TEST_CASE("lemma suite") {
  SuiteOptions o;
  o.seed = 88;
  o.samples = 1000;
  for (const SuiteResult& s : run_lemmas(o)) {
    INFO(s.name, " min_slack=", s.min_slack, " tol=", s.tol);
    CHECK(s.passed);
  }
}
