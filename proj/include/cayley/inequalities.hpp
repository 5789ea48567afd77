#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "cayley/boundary_forms.hpp"
#include "cayley/linalg.hpp"

namespace cayley {

/// Result of checking one inequality. `lhs` and `rhs` are the two sides as
/// written in the statement; `slack` is oriented so that the inequality holds
/// iff slack >= 0. `rel_slack` is slack divided by the larger side.
struct SlackReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double rel_slack = 0.0;
  double tol = 0.0;
  /// Extra relative requirement rel_slack >= -rel_tol; 0 disables it.
  double rel_tol = 0.0;
  bool passed = true;
  /// Set when the statement's quantities are undefined (zero denominator,
  /// non-PSD argument). Degenerate reports are excluded from slack minima.
  bool degenerate = false;
  std::string context;
};

/// lhs <= rhs, slack = rhs - lhs.
SlackReport leq_report(double lhs, double rhs, double tol, std::string context, double rel_tol = 0.0);
/// lhs >= rhs, slack = lhs - rhs.
SlackReport geq_report(double lhs, double rhs, double tol, std::string context, double rel_tol = 0.0);

/// (4/22)^16
double main_rhs();

// ---------------------------------------------------------------------------
// Determinant helpers. Determinants of symmetric matrices are always products
// of Jacobi eigenvalues.

/// Sum of log eigenvalues; -inf if any eigenvalue is <= 0.
double logdet_psd(const Matrix& m, JacobiOptions opts = {});
/// Product of eigenvalues with negative ones clipped to 0.
double det_psd(const Matrix& m, JacobiOptions opts = {});

struct SchurSplit {
  double det = 0.0;
  Matrix complement;  ///< Q2 - P^T Q1^{-1} P
  bool psd = false;
};

/// Block determinant through the Schur complement of Q1. Throws
/// std::domain_error("Schur undefined") when |det Q1| <= 1e-300 and P != 0.
SchurSplit schur_split(const Matrix& q1, const Matrix& p, const Matrix& q2);

// ---------------------------------------------------------------------------
// Main inequality.

/// det(H)^{1/2} / det(Id - 2H + Hhat) <= (4/22)^16. Computed in log space.
/// Passes iff slack >= -tol and rel_slack >= -rel_tol. A denominator with an
/// eigenvalue below 1e-14 is reported as degenerate.
SlackReport main_ratio(const FormPair& fp, double tol = 1e-12, double rel_tol = 1e-9,
                       JacobiOptions opts = {});

/// U = [[0, C], [C^T, 0]].
Matrix block_u(const BlockForm& bf);

/// (1) det(Hhat - H + aU) >= 7^16 det H
/// (2) det(Id - H - aU) >= 15^16 / 16^{16(1 - 4/15)} det(H)^{4/15}
std::pair<SlackReport, SlackReport> key_lemma_check(const BlockForm& bf, double alpha, double tol = 1e-12,
                                                    JacobiOptions opts = {});

enum class Case { kBalanced = 1, kDominant = 2 };
/// kBalanced iff 2 lambda_1 <= lambda and 2 mu_1 <= mu.
Case case_classify(const BlockForm& bf);

/// det(Id - H + (Hhat - H)) >= 22^16 det((Id - H - aU)/15)^{15/22} det((Hhat - H + aU)/7)^{7/22}.
/// A non-PSD inner matrix (beyond -1e-12) marks the report degenerate and
/// failed.
SlackReport log_concavity_bound(const BlockForm& bf, double alpha, double tol = 1e-10);
SlackReport log_concavity_bound(const FormPair& fp, double alpha, double tol = 1e-10);

/// det(H2 - W) det(H1) <= det(H1 - W) det(H2) for H1 >= H2 >= W >= 0.
/// Throws std::invalid_argument naming the violated ordering (checked at
/// -1e-10).
SlackReport easy_linalg_check(const Matrix& h1, const Matrix& h2, const Matrix& w, double tol = 1e-10);

/// det Q >= m^2 (K - 2m - 5M) M^5 for 8x8 Q with spectrum in [m, M] and
/// tr Q >= K > 3m + 5M. Throws std::invalid_argument naming the failing
/// precondition.
SlackReport reverse_amgm_check(const Matrix& q, double m, double big_m, double k, double tol = 1e-10);

struct EbetaMax {
  std::array<double, 8> zetas{};
  double level = 0.0;  ///< common after-tax value of the taxed entries
  double sup = 1.0;    ///< prod (1 - zeta_j / mu_j), factors with mu_j = 0 are 1
};

/// Maximizes prod (1 - z_j/mu_j) over 0 <= z_j <= mu_j, sum z_j >= beta mu by
/// lowering the largest entries to a common level. `mus` must be descending,
/// nonnegative, with positive sum. Throws std::invalid_argument otherwise or
/// for beta outside [0, 1].
EbetaMax ebeta_max(const std::array<double, 8>& mus, double beta);

// ---------------------------------------------------------------------------
// Scalar functions. Each throws std::invalid_argument outside its domain.

/// sqrt(4/15) / (1 + sqrt(4/15)): f is concave below, convex above.
double concavity_threshold();

/// x in [0, 1/22]
double fn_l(double x);
double fn_l_logderiv(double x);
/// x in [0, 1/22)
double fn_r(double x);
double fn_r_logderiv(double x);
/// t^2 - t^3
double fn_x(double t);
/// -ln(1 - t) + (4/15) ln t, t in (0, 1)
double fn_f(double t);
double fn_f_deriv(double t);
double fn_f_deriv2(double t);
/// [(9 - (1 + a)^2) / 8]^{-8}, a in [0, 1]
double fn_k1(double alpha);
/// prod x_j^{4/15} / (1 - x_j) over 16 entries in [0, 1).
double fn_big_f(const std::array<double, 16>& x);

struct ScalarValues {
  std::optional<double> l, r, xfun, f, k1;
};
/// Every scalar function at the same argument, empty where out of domain.
ScalarValues scalar_functions(double x);

struct AlphaWindow {
  double lo;  ///< 1 - sqrt(2/3)
  double hi;  ///< -1 + sqrt(9 - 8 L(1/22)^{1/8})
};
/// Throws std::logic_error unless lo < 0.2, hi > 0.26 and lo < 1/4 < hi.
AlphaWindow alpha_window();

/// The redistributed eigenvalue vector nu' with F(nu) <= F(nu'). Input: 16
/// descending nonnegative entries summing to 1 with
/// nu_1 >= nu_10 + ... + nu_16. Throws std::invalid_argument otherwise.
std::array<double, 16> f_gmax_reduce(const std::array<double, 16>& nu);

/// Largest violation of each of the five structural conditions on nu'
/// (0 means satisfied), plus descending order.
struct FGmaxDefects {
  std::array<double, 5> condition{};
  double ordering = 0.0;
  double max() const;
};
FGmaxDefects f_gmax_conditions(const std::array<double, 16>& nu, const std::array<double, 16>& nu_prime);

/// (4/22)^16 (1 - K sum (nu_i - 1/16)^2) - det(H)^{1/2} / det(Id - 2H + Hhat).
SlackReport sharp_ratio(const FormPair& fp, double k, double tol = 1e-12, double rel_tol = 1e-9);
/// (1 - ratio/(4/22)^16) / sum (nu_i - 1/16)^2; empty when the deviation sum
/// is below 1e-14 or the denominator is degenerate.
std::optional<double> sharp_quotient(const FormPair& fp, JacobiOptions opts = {});
/// sum (nu_i - 1/16)^2 over the eigenvalues of H.
double uniform_deviation(const Matrix& h);

// ---------------------------------------------------------------------------
// Identities and intermediate estimates of the key lemma proof.

/// max | C^T D C - sum_k d_k C_k |, C_k = (c_ki c_kj).
double decomp_c_residual(const Matrix& c, const std::array<double, 8>& d);

/// Smallest eigenvalue of B - C^T A^+ C.
double schur_h_min_eig(const BlockForm& bf);
/// Smallest eigenvalue of mu Id - B - C^T (lambda Id - A)^+ C.
double schur_gap_min_eig(const BlockForm& bf);
/// det(lambda Id - A) >= 7^8 det A and det(mu Id - B) >= 7^8 det B.
std::pair<SlackReport, SlackReport> am_gm_good(const BlockForm& bf, double tol = 1e-12);
/// Smallest eigenvalue of Id - B - 9 C^T (Id - A)^{-1} C.
double pos_def_mat_2_min_eig(const BlockForm& bf);
/// Smallest eigenvalue of Id - H - 2U.
double id_minus_h_minus_2u_min_eig(const BlockForm& bf);
/// alpha -> det(Hhat - H + aU) on the grid k/(n-1); returns the most negative
/// increment divided by the largest value (0 if monotone).
double monotonicity_defect(const BlockForm& bf, int n = 21);
/// det(H) / det(Hhat - H) <= 7^{-16} + 1e-12. When the smallest eigenvalue of
/// Hhat - H is at least 1e-7 times the largest, rel_slack >= -rel_tol is also
/// required. Degenerate when det(Hhat - H) is not positive.
SlackReport good_case(const BlockForm& bf, double rel_tol = 1e-9);

/// Swaps the two blocks when needed so that 2 mu_1 > mu holds if the form is
/// dominant on either side.
BlockForm orient_dominant(const BlockForm& bf);

/// Quantities of the dominant-case argument for part (1), computed on
/// orient_dominant(bf).
struct DominantChain {
  double beta = 0.0;
  SlackReport beta_range;   ///< 0 <= beta <= 1 (reported as beta <= 1)
  SlackReport e1;           ///< tr Q >= [7 - (1 + beta)(1 - a)^2] mu
  SlackReport e2;           ///< lambda_min(Q) >= [1 - (1 - a)^2](mu - mu_1)
  SlackReport deno_est;     ///< det Q >= m^2 (K - 2m - 5M) M^5
  SlackReport num_est;      ///< det(B - C^T A^+ C) <= (mu_1 - beta mu / 2)((mu - mu_1)/7)^7
  SlackReport ineq1;        ///< det Q >= 7^8 det(B - C^T A^+ C)
};
/// Q = mu Id - B - (1 - a)^2 C^T (lambda Id - A)^+ C. Requires a dominant form.
DominantChain dominant_chain(const BlockForm& bf, double alpha, double tol = 1e-12);

/// Eigenvalues of H descending, with the two sides of the (7_ineq) chain:
/// nu_1 >= mu_1 >= mu - mu_1 >= nu_10 + ... + nu_16 (for an oriented
/// dominant form).
std::array<double, 16> h_eigenvalues(const BlockForm& bf);

}  // namespace cayley
