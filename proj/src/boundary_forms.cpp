#include "cayley/boundary_forms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cayley/cayley_lines.hpp"
#include "cayley/random.hpp"

namespace cayley {

DiscreteMeasure DiscreteMeasure::from_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("measure needs at least one atom");
  double total = 0.0;
  for (Atom& at : atoms) {
    if (!(at.weight > 0.0) || !std::isfinite(at.weight))
      throw std::invalid_argument("atom weights must be positive and finite");
    if (!(at.dir.norm() > 1e-12)) throw std::invalid_argument("atom direction must be nonzero");
    at.dir = normalized(at.dir);
    total += at.weight;
  }
  for (Atom& at : atoms) at.weight /= total;
  return DiscreteMeasure{std::move(atoms)};
}

DiscreteMeasure parse_measure(std::string_view text) {
  std::vector<Atom> atoms;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> xs;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size())
        throw std::invalid_argument("measure line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      xs.push_back(x);
    }
    if (xs.empty()) continue;
    if (xs.size() != 17)
      throw std::invalid_argument("measure line " + std::to_string(lineno) + ": expected 17 numbers, got " +
                                  std::to_string(xs.size()));
    atoms.push_back(Atom{TangentVec::from_array(std::span<const double>(xs).subspan(1)), xs[0]});
  }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

DiscreteMeasure load_measure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open measure file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_measure(buf.str());
}

void save_measure(const DiscreteMeasure& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write measure file " + path.string());
  out << std::setprecision(17);
  for (const Atom& at : m.atoms) {
    out << at.weight;
    for (double x : at.dir.to_array()) out << ' ' << x;
    out << '\n';
  }
}

FormPair build_forms(const DiscreteMeasure& m) {
  FormPair fp{Matrix(16, 16), Matrix(16, 16)};
  for (const Atom& at : m.atoms) {
    fp.h.add_outer(at.dir.to_array(), at.weight);
    for (const TangentVec& f : cay_line(at.dir).frame) fp.hhat.add_outer(f.to_array(), at.weight);
  }
  return fp;
}

Matrix BlockForm::a_mat() const { return Matrix::diagonal(a); }
Matrix BlockForm::b_mat() const { return Matrix::diagonal(b); }

Matrix BlockForm::h() const { return assemble_blocks(a_mat(), c, c.transpose(), b_mat()); }

Matrix BlockForm::hhat() const {
  Matrix m(16, 16);
  for (std::size_t i = 0; i < 8; ++i) {
    m(i, i) = lambda;
    m(8 + i, 8 + i) = mu;
  }
  return m;
}

BlockDefect block_defect(const BlockForm& bf) {
  BlockDefect d;
  double ta = 0.0, tb = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    ta += bf.a[i];
    tb += bf.b[i];
  }
  d.trace_a = std::abs(ta - bf.lambda);
  d.trace_b = std::abs(tb - bf.mu);
  d.mass = std::abs(bf.lambda + bf.mu - 1.0);
  const Matrix h = bf.h();
  d.min_eig_h = min_eigenvalue(h);
  d.min_eig_gap = min_eigenvalue(bf.hhat() - h);
  return d;
}

bool admissible(const BlockForm& bf) {
  const BlockDefect d = block_defect(bf);
  return d.trace_a <= 1e-8 && d.trace_b <= 1e-8 && d.mass <= 1e-8 && d.min_eig_h >= -1e-9 &&
         d.min_eig_gap >= -1e-9;
}

namespace {

// Columns [first, first + count) of m.
Matrix columns(const Matrix& m, std::size_t first, std::size_t count) {
  return m.block(0, first, m.rows(), count);
}

// Rotates the 16x8 block `f` so that f^T H f is diagonal with descending
// entries, which are returned.
std::array<double, 8> diagonalize_block(Matrix& f, const Matrix& h, JacobiOptions opts) {
  const SymmetricEigen e = eigen_sym((f.transpose() * h * f).symmetrized(), opts);
  f = f * e.vectors;
  std::array<double, 8> d{};
  std::copy(e.values.begin(), e.values.end(), d.begin());
  return d;
}

}  // namespace

BlockForm block_reduce(const FormPair& fp, JacobiOptions opts) {
  const SymmetricEigen e = eigen_sym(fp.hhat.symmetrized(), opts);
  const double scale_ref = std::max(1.0, std::abs(e.values.front()));
  const double tol = 1e-9 * scale_ref;
  if (e.values[0] - e.values[7] > tol || e.values[8] - e.values[15] > tol)
    throw std::domain_error("block_reduce: spectrum of Hhat does not split into two clusters of eight");

  double lambda = 0.0, mu = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    lambda += e.values[i] / 8.0;
    mu += e.values[8 + i] / 8.0;
  }

  BlockForm bf;
  bf.hhat_scale = 1.0 / (lambda + mu);
  lambda *= bf.hhat_scale;
  mu *= bf.hhat_scale;

  Matrix f_lambda, f_mu;
  const bool degenerate = lambda - mu <= 1e-6;
  if (!degenerate) {
    f_lambda = columns(e.vectors, 0, 8);
    f_mu = columns(e.vectors, 8, 8);
  } else {
    // Any orthonormal basis diagonalizes Hhat. Split along the Cayley line of
    // the top eigenvector of H, or the standard split if H is scalar too.
    const SymmetricEigen eh = eigen_sym(fp.h.symmetrized(), opts);
    TangentVec u{Octonion::real(1.0), Octonion{}};
    if (eh.values.front() - eh.values.back() > 1e-6) u = TangentVec::from_array(eh.vectors.column(0));
    f_lambda = cay_line(u).frame_matrix();
    f_mu = complement_line(u).frame_matrix();
  }

  bf.a = diagonalize_block(f_lambda, fp.h, opts);
  bf.b = diagonalize_block(f_mu, fp.h, opts);
  bf.c = f_lambda.transpose() * fp.h * f_mu;
  if (degenerate) {
    // Hhat is scalar only to 1e-6 here; the per-line traces are the exact
    // Rayleigh quotients of Hhat on the two lines.
    lambda = 0.0;
    mu = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      lambda += bf.a[i];
      mu += bf.b[i];
    }
  }
  bf.lambda = lambda;
  bf.mu = mu;
  bf.basis = Matrix(16, 16);
  bf.basis.set_block(0, 0, f_lambda);
  bf.basis.set_block(0, 8, f_mu);
  return bf;
}

DiscreteMeasure sample_measure(std::uint64_t seed, std::size_t n_atoms) {
  if (n_atoms == 0) throw std::invalid_argument("sample_measure: n_atoms must be at least 1");
  Rng rng(seed);
  std::vector<Atom> atoms;
  atoms.reserve(n_atoms);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    TangentVec d;
    do {
      d = TangentVec{rng.normal_octonion(), rng.normal_octonion()};
    } while (d.norm() < 1e-6);
    double w;
    do {
      w = rng.exponential();
    } while (w <= 0.0);
    atoms.push_back(Atom{d, w});
  }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

namespace {

std::array<double, 8> sorted_dirichlet(Rng& rng, double concentration, double total) {
  std::array<double, 8> d{};
  double sum = 0.0;
  while (!(sum > 0.0)) {
    sum = 0.0;
    for (double& x : d) sum += (x = rng.gamma(concentration));
  }
  for (double& x : d) x *= total / sum;
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

double sigma_max(const Matrix& m) {
  return std::sqrt(std::max(0.0, max_eigenvalue((m.transpose() * m).symmetrized())));
}

}  // namespace

BlockForm sample_blockform(Rng& rng, const BlockSampleOptions& opts) {
  BlockForm bf;
  bf.lambda = rng.uniform(0.5, 1.0);
  bf.mu = 1.0 - bf.lambda;
  const double log_lo = std::log(opts.concentration_lo), log_hi = std::log(opts.concentration_hi);
  bf.a = sorted_dirichlet(rng, std::exp(rng.uniform(log_lo, log_hi)), bf.lambda);
  bf.b = sorted_dirichlet(rng, std::exp(rng.uniform(log_lo, log_hi)), bf.mu);
  bf.c = Matrix(8, 8);
  if (rng.uniform() < opts.zero_coupling) return bf;

  Matrix g(8, 8);
  for (double& x : g.data()) x = rng.normal();
  // With C = Da G Db the two PSD conditions become |Sa G Sb| <= 1 and
  // |Ta G Tb| <= 1 in operator norm.
  std::array<double, 8> sa{}, ta{}, sb{}, tb{};
  for (std::size_t k = 0; k < 8; ++k) {
    const double ga = std::max(bf.lambda - bf.a[k], 0.0), gb = std::max(bf.mu - bf.b[k], 0.0);
    sa[k] = std::sqrt(ga);
    ta[k] = std::sqrt(bf.a[k]);
    sb[k] = std::sqrt(gb);
    tb[k] = std::sqrt(bf.b[k]);
  }
  const double n1 = sigma_max(Matrix::diagonal(sa) * g * Matrix::diagonal(sb));
  const double n2 = sigma_max(Matrix::diagonal(ta) * g * Matrix::diagonal(tb));
  const double n = std::max(n1, n2);
  if (!(n > 0.0)) return bf;
  const double scale = std::pow(rng.uniform(), opts.coupling_power) / n;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) bf.c(i, j) = scale * ta[i] * sa[i] * g(i, j) * tb[j] * sb[j];
  return bf;
}

}  // namespace cayley
