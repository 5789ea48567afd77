#include "cayley/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cayley {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

SlackReport finish(SlackReport r) {
  const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.rel_slack = scale > 0.0 ? r.slack / scale : 0.0;
  r.passed = r.slack >= -r.tol && (r.rel_tol <= 0.0 || r.rel_slack >= -r.rel_tol);
  return r;
}

SlackReport degenerate_report(double tol, std::string context) {
  SlackReport r;
  r.lhs = r.rhs = r.slack = r.rel_slack = kNaN;
  r.tol = tol;
  r.passed = true;
  r.degenerate = true;
  r.context = std::move(context);
  return r;
}

double sum_log(const std::vector<double>& ev) {
  double s = 0.0;
  for (double e : ev) {
    if (!(e > 0.0)) return kNegInf;
    s += std::log(e);
  }
  return s;
}

double product(const std::vector<double>& ev) {
  double p = 1.0;
  for (double e : ev) p *= e;
  return p;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// Pieces of det(H)^{1/2} / det(Id - 2H + Hhat).
struct RatioLogs {
  double log_lhs = 0.0;
  bool degenerate = false;
  std::vector<double> nus;
};

RatioLogs ratio_logs(const FormPair& fp, JacobiOptions opts) {
  RatioLogs out;
  out.nus = eigenvalues_sym(fp.h.symmetrized(), opts);
  Matrix den = Matrix::identity(16);
  den -= fp.h * 2.0;
  den += fp.hhat;
  const std::vector<double> d = eigenvalues_sym(den.symmetrized(), opts);
  if (min_of(d) < 1e-14) {
    out.degenerate = true;
    return out;
  }
  out.log_lhs = 0.5 * sum_log(out.nus) - sum_log(d);
  return out;
}

double diag_pinv(double x, double scale) { return std::abs(x) <= 1e-10 * scale ? 0.0 : 1.0 / x; }

double max_abs(const std::array<double, 8>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// C^T diag(d) C
Matrix ct_d_c(const Matrix& c, const std::array<double, 8>& d) {
  Matrix m(8, 8);
  for (std::size_t k = 0; k < 8; ++k) {
    if (d[k] == 0.0) continue;
    for (std::size_t i = 0; i < 8; ++i) {
      const double ci = d[k] * c(k, i);
      for (std::size_t j = 0; j < 8; ++j) m(i, j) += ci * c(k, j);
    }
  }
  return m;
}

// Pseudo-inverse diagonal of A and of (lambda Id - A).
std::array<double, 8> a_pinv(const BlockForm& bf) {
  std::array<double, 8> d{};
  const double s = max_abs(bf.a);
  for (std::size_t k = 0; k < 8; ++k) d[k] = diag_pinv(bf.a[k], s);
  return d;
}

std::array<double, 8> gap_pinv(const BlockForm& bf) {
  std::array<double, 8> g{};
  for (std::size_t k = 0; k < 8; ++k) g[k] = bf.lambda - bf.a[k];
  const double s = max_abs(g);
  for (std::size_t k = 0; k < 8; ++k) g[k] = diag_pinv(g[k], s);
  return g;
}

void require_domain(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

SlackReport leq_report(double lhs, double rhs, double tol, std::string context, double rel_tol) {
  SlackReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tol = tol;
  r.rel_tol = rel_tol;
  r.context = std::move(context);
  return finish(r);
}

SlackReport geq_report(double lhs, double rhs, double tol, std::string context, double rel_tol) {
  SlackReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.tol = tol;
  r.rel_tol = rel_tol;
  r.context = std::move(context);
  return finish(r);
}

double main_rhs() { return std::pow(4.0 / 22.0, 16); }

double logdet_psd(const Matrix& m, JacobiOptions opts) { return sum_log(eigenvalues_sym(m.symmetrized(), opts)); }

double det_psd(const Matrix& m, JacobiOptions opts) {
  double p = 1.0;
  for (double e : eigenvalues_sym(m.symmetrized(), opts)) p *= std::max(e, 0.0);
  return p;
}

SchurSplit schur_split(const Matrix& q1, const Matrix& p, const Matrix& q2) {
  const double d1 = det_sym(q1.symmetrized());
  SchurSplit s;
  if (std::abs(d1) <= 1e-300) {
    if (p.max_abs() != 0.0) throw std::domain_error("Schur undefined");
    s.complement = q2;
    s.det = 0.0;
  } else {
    s.complement = (q2 - p.transpose() * inverse_sym(q1.symmetrized()) * p).symmetrized();
    s.det = d1 * det_sym(s.complement);
  }
  const double scale = std::max({1.0, q1.max_abs(), q2.max_abs()});
  s.psd = min_eigenvalue(q1.symmetrized()) >= -1e-12 * scale && min_eigenvalue(s.complement) >= -1e-12 * scale;
  return s;
}

SlackReport main_ratio(const FormPair& fp, double tol, double rel_tol, JacobiOptions opts) {
  const RatioLogs r = ratio_logs(fp, opts);
  if (r.degenerate) return degenerate_report(tol, "main_ratio: det(Id - 2H + Hhat) vanishes");
  const double log_rhs = std::log(main_rhs());
  SlackReport rep;
  rep.lhs = std::exp(r.log_lhs);
  rep.rhs = main_rhs();
  rep.slack = rep.rhs - rep.lhs;
  rep.rel_slack = r.log_lhs == kNegInf ? 1.0 : -std::expm1(r.log_lhs - log_rhs);
  rep.tol = tol;
  rep.rel_tol = rel_tol;
  rep.passed = rep.slack >= -tol && rep.rel_slack >= -rel_tol;
  rep.context = "main_ratio";
  return rep;
}

Matrix block_u(const BlockForm& bf) {
  Matrix u(16, 16);
  u.set_block(0, 8, bf.c);
  u.set_block(8, 0, bf.c.transpose());
  return u;
}

std::pair<SlackReport, SlackReport> key_lemma_check(const BlockForm& bf, double alpha, double tol,
                                                    JacobiOptions opts) {
  const Matrix h = bf.h();
  const Matrix u = block_u(bf) * alpha;
  const double det_h = det_psd(h, opts);

  const double lhs1 = det_sym((bf.hhat() - h + u).symmetrized(), opts);
  const double rhs1 = std::pow(7.0, 16) * det_h;

  const double lhs2 = det_sym((Matrix::identity(16) - h - u).symmetrized(), opts);
  const double rhs2 =
      det_h > 0.0
          ? std::exp(16.0 * std::log(15.0) - 16.0 * (11.0 / 15.0) * std::log(16.0) + (4.0 / 15.0) * std::log(det_h))
          : 0.0;
  return {geq_report(lhs1, rhs1, tol, "key_lemma part 1"), geq_report(lhs2, rhs2, tol, "key_lemma part 2")};
}

Case case_classify(const BlockForm& bf) {
  return (2.0 * bf.a[0] <= bf.lambda && 2.0 * bf.b[0] <= bf.mu) ? Case::kBalanced : Case::kDominant;
}

SlackReport log_concavity_bound(const BlockForm& bf, double alpha, double tol) {
  const Matrix h = bf.h();
  const Matrix u = block_u(bf) * alpha;
  const Matrix x1 = (Matrix::identity(16) - h - u).symmetrized();
  const Matrix x2 = (bf.hhat() - h + u).symmetrized();
  Matrix t = Matrix::identity(16) - h * 2.0;
  t += bf.hhat();

  const std::vector<double> e1 = eigenvalues_sym(x1);
  const std::vector<double> e2 = eigenvalues_sym(x2);
  if (min_of(e1) < -1e-12 || min_of(e2) < -1e-12) {
    SlackReport r = degenerate_report(tol, "log_concavity_bound: inner matrix not PSD");
    r.passed = false;
    return r;
  }
  const double log_bound = 16.0 * std::log(22.0) + (15.0 / 22.0) * (sum_log(e1) - 16.0 * std::log(15.0)) +
                           (7.0 / 22.0) * (sum_log(e2) - 16.0 * std::log(7.0));
  return geq_report(det_sym(t.symmetrized()), std::exp(log_bound), tol, "log_concavity_bound");
}

SlackReport log_concavity_bound(const FormPair& fp, double alpha, double tol) {
  return log_concavity_bound(block_reduce(fp), alpha, tol);
}

SlackReport easy_linalg_check(const Matrix& h1, const Matrix& h2, const Matrix& w, double tol) {
  if (min_eigenvalue((h1 - h2).symmetrized()) < -1e-10) throw std::invalid_argument("easy_linalg_check: H1 >= H2 fails");
  if (min_eigenvalue((h2 - w).symmetrized()) < -1e-10) throw std::invalid_argument("easy_linalg_check: H2 >= W fails");
  if (min_eigenvalue(w.symmetrized()) < -1e-10) throw std::invalid_argument("easy_linalg_check: W >= 0 fails");
  const double lhs = det_sym((h2 - w).symmetrized()) * det_sym(h1.symmetrized());
  const double rhs = det_sym((h1 - w).symmetrized()) * det_sym(h2.symmetrized());
  return leq_report(lhs, rhs, tol, "easy_linalg");
}

SlackReport reverse_amgm_check(const Matrix& q, double m, double big_m, double k, double tol) {
  if (q.rows() != 8 || q.cols() != 8) throw std::invalid_argument("reverse_amgm_check: Q must be 8x8");
  if (!(m > 0.0)) throw std::invalid_argument("reverse_amgm_check: m > 0 fails");
  if (!(m <= big_m)) throw std::invalid_argument("reverse_amgm_check: m <= M fails");
  const std::vector<double> ev = eigenvalues_sym(q.symmetrized());
  const double slop = 1e-12 * big_m;
  if (ev.back() < m - slop || ev.front() > big_m + slop)
    throw std::invalid_argument("reverse_amgm_check: eigenvalues of Q must lie in [m, M]");
  if (!(k > 3.0 * m + 5.0 * big_m)) throw std::invalid_argument("reverse_amgm_check: K > 3m + 5M fails");
  if (q.trace() < k - 1e-12 * std::abs(k)) throw std::invalid_argument("reverse_amgm_check: tr Q >= K fails");
  const double rhs = m * m * (k - 2.0 * m - 5.0 * big_m) * std::pow(big_m, 5);
  return geq_report(product(ev), rhs, tol, "reverse_amgm");
}

EbetaMax ebeta_max(const std::array<double, 8>& mus, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("ebeta_max: beta must lie in [0, 1]");
  double mu = 0.0;
  for (std::size_t j = 0; j < 8; ++j) {
    if (mus[j] < 0.0) throw std::invalid_argument("ebeta_max: entries must be nonnegative");
    if (j > 0 && mus[j] > mus[j - 1]) throw std::invalid_argument("ebeta_max: entries must be descending");
    mu += mus[j];
  }
  if (!(mu > 0.0)) throw std::invalid_argument("ebeta_max: entries must have positive sum");

  // Tax the top k entries down to a common level L with
  // sum_{j<=k} (mu_j - L) = beta mu and mu_{k+1} <= L <= mu_k.
  const double tax = beta * mu;
  double level = 0.0;
  double top = 0.0;
  for (std::size_t k = 1; k <= 8; ++k) {
    top += mus[k - 1];
    level = (top - tax) / static_cast<double>(k);
    if (k == 8 || level >= mus[k]) break;
  }
  level = std::max(level, 0.0);

  EbetaMax out;
  out.level = level;
  for (std::size_t j = 0; j < 8; ++j) {
    out.zetas[j] = std::max(0.0, mus[j] - level);
    if (mus[j] > 0.0) out.sup *= std::min(1.0, level / mus[j]);
  }
  return out;
}

double concavity_threshold() {
  const double s = std::sqrt(4.0 / 15.0);
  return s / (1.0 + s);
}

double fn_l(double x) {
  require_domain(x >= 0.0 && x <= 1.0 / 22.0, "L(x) needs x in [0, 1/22]");
  const double c = std::pow(7.0, 4.0 / 15.0) * std::pow(4.0 / 7.0, 32.0 / 15.0);
  return c * std::pow(1.0 - 1.75 * x, 8) / ((1.0 - 7.0 * x) * std::pow(1.0 - x, 7));
}

double fn_l_logderiv(double x) {
  require_domain(x >= 0.0 && x <= 1.0 / 22.0, "(ln L)' needs x in [0, 1/22]");
  return 7.0 / (1.0 - 7.0 * x) + 7.0 / (1.0 - x) - 14.0 / (1.0 - 14.0 * x / 8.0);
}

double fn_r(double x) {
  require_domain(x >= 0.0 && x < 1.0 / 22.0, "R(x) needs x in [0, 1/22)");
  return std::pow(1.0 - 15.0 * x, 4.0 / 15.0) * x * x * x / (15.0 * std::pow(1.0 - x, 15));
}

double fn_r_logderiv(double x) {
  require_domain(x > 0.0 && x < 1.0 / 22.0, "(ln R)' needs x in (0, 1/22)");
  return -4.0 / (1.0 - 15.0 * x) + 3.0 / x + 15.0 / (1.0 - x);
}

double fn_x(double t) { return t * t - t * t * t; }

double fn_f(double t) {
  require_domain(t > 0.0 && t < 1.0, "f(t) needs t in (0, 1)");
  return -std::log1p(-t) + (4.0 / 15.0) * std::log(t);
}

double fn_f_deriv(double t) {
  require_domain(t > 0.0 && t < 1.0, "f'(t) needs t in (0, 1)");
  return 4.0 / (15.0 * t) + 1.0 / (1.0 - t);
}

double fn_f_deriv2(double t) {
  require_domain(t > 0.0 && t < 1.0, "f''(t) needs t in (0, 1)");
  return -4.0 / (15.0 * t * t) + 1.0 / ((1.0 - t) * (1.0 - t));
}

double fn_k1(double alpha) {
  require_domain(alpha >= 0.0 && alpha <= 1.0, "K1(a) needs a in [0, 1]");
  return std::pow((9.0 - (1.0 + alpha) * (1.0 + alpha)) / 8.0, -8);
}

double fn_big_f(const std::array<double, 16>& x) {
  double p = 1.0;
  for (double v : x) {
    require_domain(v >= 0.0 && v < 1.0, "F needs entries in [0, 1)");
    p *= std::pow(v, 4.0 / 15.0) / (1.0 - v);
  }
  return p;
}

ScalarValues scalar_functions(double x) {
  ScalarValues s;
  auto attempt = [](auto&& fn, double arg) -> std::optional<double> {
    try {
      return fn(arg);
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  };
  s.l = attempt(fn_l, x);
  s.r = attempt(fn_r, x);
  s.xfun = fn_x(x);
  s.f = attempt(fn_f, x);
  s.k1 = attempt(fn_k1, x);
  return s;
}

AlphaWindow alpha_window() {
  AlphaWindow w;
  w.lo = 1.0 - std::sqrt(2.0 / 3.0);
  w.hi = -1.0 + std::sqrt(9.0 - 8.0 * std::pow(fn_l(1.0 / 22.0), 1.0 / 8.0));
  if (!(w.lo < 0.2)) throw std::logic_error("alpha window: lower end not below 0.2");
  if (!(w.hi > 0.26)) throw std::logic_error("alpha window: upper end not above 0.26");
  if (!(w.lo < 0.25 && 0.25 < w.hi)) throw std::logic_error("alpha window: 1/4 outside the window");
  return w;
}

std::array<double, 16> f_gmax_reduce(const std::array<double, 16>& nu) {
  double total = 0.0;
  for (std::size_t j = 0; j < 16; ++j) {
    if (nu[j] < -1e-15) throw std::invalid_argument("f_gmax_reduce: entries must be nonnegative");
    if (j > 0 && nu[j] > nu[j - 1] + 1e-12) throw std::invalid_argument("f_gmax_reduce: entries must be descending");
    total += nu[j];
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("f_gmax_reduce: entries must sum to 1");
  double tail = 0.0;
  for (std::size_t j = 9; j < 16; ++j) tail += nu[j];
  if (nu[0] < tail - 1e-12) throw std::invalid_argument("f_gmax_reduce: needs nu_1 >= nu_10 + ... + nu_16");

  const double t = concavity_threshold();
  const double nu1p = std::max(nu[0], nu[0] + nu[1] - t);
  const double second = nu[0] + nu[1] - nu1p;
  const double xp = tail / 7.0;
  double yp = second;
  for (std::size_t j = 2; j < 9; ++j) yp += nu[j];
  yp /= 8.0;

  std::array<double, 16> out{};
  out[0] = nu1p;
  const double avg = (8.0 * yp + 7.0 * xp) / 15.0;
  if (nu1p >= 7.0 * avg) {
    for (std::size_t j = 1; j < 16; ++j) out[j] = avg;
  } else {
    const double x = nu1p / 7.0;
    const double y = (1.0 - nu1p - 7.0 * x) / 8.0;
    for (std::size_t j = 1; j < 9; ++j) out[j] = y;
    for (std::size_t j = 9; j < 16; ++j) out[j] = x;
  }
  return out;
}

double FGmaxDefects::max() const {
  return std::max(ordering, *std::max_element(condition.begin(), condition.end()));
}

FGmaxDefects f_gmax_conditions(const std::array<double, 16>& nu, const std::array<double, 16>& np) {
  FGmaxDefects d;
  auto tail7 = [](const std::array<double, 16>& v) { return std::accumulate(v.begin() + 9, v.end(), 0.0); };
  for (std::size_t j = 2; j < 9; ++j) d.condition[0] = std::max(d.condition[0], std::abs(np[j] - np[1]));
  for (std::size_t j = 10; j < 16; ++j) d.condition[0] = std::max(d.condition[0], std::abs(np[j] - np[9]));

  const double expected1 = std::max(nu[0], nu[0] + nu[1] - concavity_threshold());
  d.condition[1] = std::max({std::abs(np[0] - expected1), tail7(np) - np[0], tail7(nu) - tail7(np), 0.0});

  if (np[0] > tail7(np) + 1e-12)
    for (std::size_t j = 2; j < 16; ++j) d.condition[2] = std::max(d.condition[2], std::abs(np[j] - np[1]));
  if (np[1] > np[15] + 1e-12) d.condition[3] = std::abs(np[0] - tail7(np));
  d.condition[4] = std::abs(std::accumulate(np.begin(), np.end(), 0.0) - 1.0);
  for (std::size_t j = 1; j < 16; ++j) d.ordering = std::max(d.ordering, np[j] - np[j - 1]);
  return d;
}

double uniform_deviation(const Matrix& h) {
  double s = 0.0;
  for (double e : eigenvalues_sym(h.symmetrized())) s += (e - 1.0 / 16.0) * (e - 1.0 / 16.0);
  return s;
}

SlackReport sharp_ratio(const FormPair& fp, double k, double tol, double rel_tol) {
  if (!(k >= 0.0)) throw std::invalid_argument("sharp_ratio: K must be nonnegative");
  const RatioLogs r = ratio_logs(fp, {});
  if (r.degenerate) return degenerate_report(tol, "sharp_ratio: det(Id - 2H + Hhat) vanishes");
  double dev = 0.0;
  for (double e : r.nus) dev += (e - 1.0 / 16.0) * (e - 1.0 / 16.0);
  SlackReport rep;
  rep.lhs = std::exp(r.log_lhs);
  rep.rhs = main_rhs() * (1.0 - k * dev);
  rep.slack = rep.rhs - rep.lhs;
  // Relative to (4/22)^16 so the scale matches main_ratio.
  const double rel_main = r.log_lhs == kNegInf ? 1.0 : -std::expm1(r.log_lhs - std::log(main_rhs()));
  rep.rel_slack = rel_main - k * dev;
  rep.tol = tol;
  rep.rel_tol = rel_tol;
  rep.passed = rep.slack >= -tol && rep.rel_slack >= -rel_tol;
  rep.context = "sharp_ratio";
  return rep;
}

std::optional<double> sharp_quotient(const FormPair& fp, JacobiOptions opts) {
  const RatioLogs r = ratio_logs(fp, opts);
  if (r.degenerate) return std::nullopt;
  double dev = 0.0;
  for (double e : r.nus) dev += (e - 1.0 / 16.0) * (e - 1.0 / 16.0);
  if (dev < 1e-14) return std::nullopt;
  const double rel = r.log_lhs == kNegInf ? 1.0 : -std::expm1(r.log_lhs - std::log(main_rhs()));
  return rel / dev;
}

double decomp_c_residual(const Matrix& c, const std::array<double, 8>& d) {
  const Matrix direct = c.transpose() * Matrix::diagonal(d) * c;
  Matrix summed(8, 8);
  for (std::size_t k = 0; k < 8; ++k) {
    Matrix ck(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) ck(i, j) = c(k, i) * c(k, j);
    summed += ck * d[k];
  }
  return max_abs_diff(direct, summed);
}

double schur_h_min_eig(const BlockForm& bf) {
  return min_eigenvalue((bf.b_mat() - ct_d_c(bf.c, a_pinv(bf))).symmetrized());
}

double schur_gap_min_eig(const BlockForm& bf) {
  Matrix m = Matrix::identity(8) * bf.mu - bf.b_mat();
  m -= ct_d_c(bf.c, gap_pinv(bf));
  return min_eigenvalue(m.symmetrized());
}

std::pair<SlackReport, SlackReport> am_gm_good(const BlockForm& bf, double tol) {
  double la = 1.0, a = 1.0, lb = 1.0, b = 1.0;
  for (std::size_t k = 0; k < 8; ++k) {
    la *= bf.lambda - bf.a[k];
    a *= bf.a[k];
    lb *= bf.mu - bf.b[k];
    b *= bf.b[k];
  }
  const double k8 = std::pow(7.0, 8);
  return {geq_report(la, k8 * a, tol, "am_gm_good A"), geq_report(lb, k8 * b, tol, "am_gm_good B")};
}

double pos_def_mat_2_min_eig(const BlockForm& bf) {
  std::array<double, 8> g{};
  for (std::size_t k = 0; k < 8; ++k) g[k] = 1.0 - bf.a[k];
  const double s = max_abs(g);
  for (std::size_t k = 0; k < 8; ++k) g[k] = 9.0 * diag_pinv(g[k], s);
  Matrix m = Matrix::identity(8) - bf.b_mat();
  m -= ct_d_c(bf.c, g);
  return min_eigenvalue(m.symmetrized());
}

double id_minus_h_minus_2u_min_eig(const BlockForm& bf) {
  return min_eigenvalue((Matrix::identity(16) - bf.h() - block_u(bf) * 2.0).symmetrized());
}

double monotonicity_defect(const BlockForm& bf, int n) {
  const Matrix base = bf.hhat() - bf.h();
  const Matrix u = block_u(bf);
  std::vector<double> v;
  for (int i = 0; i < n; ++i) {
    const double alpha = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    v.push_back(det_sym((base + u * alpha).symmetrized()));
  }
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    scale = std::max(scale, std::abs(v[i]));
    if (i > 0) worst = std::max(worst, v[i - 1] - v[i]);
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

SlackReport good_case(const BlockForm& bf, double rel_tol) {
  const std::vector<double> gap = eigenvalues_sym((bf.hhat() - bf.h()).symmetrized());
  if (!(gap.back() > 0.0)) return degenerate_report(1e-12, "good_case: det(Hhat - H) is not positive");
  const std::vector<double> hv = eigenvalues_sym(bf.h().symmetrized());
  double det_h = 1.0;
  for (double e : hv) det_h *= std::max(e, 0.0);
  // Below 1e-7 relative the determinant of Hhat - H is not known to 1e-9, so
  // only the absolute tolerance applies.
  const bool well_conditioned = gap.back() >= 1e-7 * gap.front();
  return leq_report(det_h / product(gap), std::pow(7.0, -16), 1e-12,
                    well_conditioned ? "good_case" : "good_case (ill-conditioned, absolute only)",
                    well_conditioned ? rel_tol : 0.0);
}

BlockForm orient_dominant(const BlockForm& bf) {
  if (2.0 * bf.b[0] > bf.mu || !(2.0 * bf.a[0] > bf.lambda)) return bf;
  BlockForm s = bf;
  std::swap(s.a, s.b);
  std::swap(s.lambda, s.mu);
  s.c = bf.c.transpose();
  if (bf.basis.rows() == 16) {
    s.basis = Matrix(16, 16);
    s.basis.set_block(0, 0, bf.basis.block(0, 8, 16, 8));
    s.basis.set_block(0, 8, bf.basis.block(0, 0, 16, 8));
  }
  return s;
}

DominantChain dominant_chain(const BlockForm& input, double alpha, double tol) {
  const BlockForm bf = orient_dominant(input);
  if (!(2.0 * bf.b[0] > bf.mu)) throw std::invalid_argument("dominant_chain: form is not dominant");
  const double mu = bf.mu;
  const double mu1 = bf.b[0];
  const double s = (1.0 - alpha) * (1.0 - alpha);
  // Natural size of 8x8 determinants with trace mu.
  const double det_tol = tol * std::pow(std::max(mu, 1e-300), 8);

  const std::array<double, 8> gp = gap_pinv(bf);
  double beta_num = 0.0;
  for (std::size_t k = 1; k < 8; ++k) {
    double row = 0.0;
    for (std::size_t j = 0; j < 8; ++j) row += bf.c(k, j) * bf.c(k, j);
    beta_num += row * gp[k];
  }

  DominantChain out;
  out.beta = mu > 0.0 ? beta_num / mu : 0.0;
  out.beta_range = leq_report(out.beta, 1.0, 1e-9, "beta <= 1");

  Matrix q = Matrix::identity(8) * mu - bf.b_mat();
  q -= ct_d_c(bf.c, gp) * s;
  q = q.symmetrized();
  const std::vector<double> qe = eigenvalues_sym(q);
  const double k_bound = (7.0 - (1.0 + out.beta) * s) * mu;
  const double m_bound = (1.0 - s) * (mu - mu1);
  out.e1 = geq_report(q.trace(), k_bound, tol, "E1 trace bound");
  out.e2 = geq_report(qe.back(), m_bound, tol, "E2 smallest eigenvalue bound");

  const double det_q = product(qe);
  out.deno_est = geq_report(det_q, m_bound * m_bound * (k_bound - 2.0 * m_bound - 5.0 * mu) * std::pow(mu, 5),
                            det_tol, "deno_est");

  const double det_schur = det_sym((bf.b_mat() - ct_d_c(bf.c, a_pinv(bf))).symmetrized());
  out.num_est = leq_report(det_schur, (mu1 - out.beta * mu / 2.0) * std::pow((mu - mu1) / 7.0, 7), det_tol,
                           "num_est");
  out.ineq1 = geq_report(det_q, std::pow(7.0, 8) * det_schur, det_tol, "ineq1");
  return out;
}

std::array<double, 16> h_eigenvalues(const BlockForm& bf) {
  const std::vector<double> ev = eigenvalues_sym(bf.h().symmetrized());
  std::array<double, 16> out{};
  std::copy(ev.begin(), ev.end(), out.begin());
  return out;
}

}  // namespace cayley
