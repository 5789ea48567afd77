#include "cayley/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cayley/cayley_lines.hpp"
#include "cayley/inequalities.hpp"
#include "cayley/random.hpp"

namespace cayley {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlockParams = 1 + 8 + 8 + 64 + 1;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---------------------------------------------------------------------------
// Objective evaluation

Evaluation undefined_eval() {
  Evaluation e;
  e.value = kInf;
  e.slack = kInf;
  e.defined = false;
  return e;
}

// value = ln(larger side / smaller side) with the sign of the slack, so that
// configurations far from equality still rank by how far they are.
Evaluation from_report(const SlackReport& r, bool leq) {
  if (r.degenerate) return undefined_eval();
  Evaluation e;
  const double big = leq ? r.rhs : r.lhs, small = leq ? r.lhs : r.rhs;
  if (big > 0.0 && small > 0.0) {
    e.value = std::log(big) - std::log(small);
  } else {
    e.value = r.slack >= 0.0 ? kInf : -kInf;
  }
  e.slack = r.slack;
  e.passed = r.slack >= -1e-12 && r.rel_slack >= -1e-9;
  return e;
}

Evaluation eval_forms(const FormPair& fp, Objective obj, JacobiOptions opts) {
  if (obj == Objective::kMainRatio) return from_report(main_ratio(fp, 1e-12, 1e-9, opts), true);
  const std::optional<double> q = sharp_quotient(fp, opts);
  if (!q) return undefined_eval();
  Evaluation e;
  e.value = e.slack = *q;
  e.passed = main_ratio(fp, 1e-12, 1e-9, opts).passed;
  return e;
}

Evaluation eval_block(const BlockForm& bf, Objective obj, double alpha, JacobiOptions opts) {
  if (obj == Objective::kMainRatio || obj == Objective::kSharpK) return eval_forms(FormPair{bf.h(), bf.hhat()}, obj, opts);
  // With a singular H both sides are rounding noise.
  const std::vector<double> ev = eigenvalues_sym(bf.h().symmetrized(), opts);
  if (ev.back() < 1e-10 * std::max(ev.front(), 1e-300)) return undefined_eval();
  const auto [p1, p2] = key_lemma_check(bf, alpha, 1e-12, opts);
  return from_report(obj == Objective::kKeyLemma1 ? p1 : p2, false);
}

Evaluation eval_measure_forms(const FormPair& fp, Objective obj, double alpha, JacobiOptions opts) {
  if (obj == Objective::kMainRatio || obj == Objective::kSharpK) return eval_forms(fp, obj, opts);
  try {
    return eval_block(block_reduce(fp, opts), obj, alpha, opts);
  } catch (const std::domain_error&) {
    return undefined_eval();
  }
}

// ---------------------------------------------------------------------------
// Measure state: directions with cached Cayley frames and weight logits.

struct AtomState {
  Vec16 dir{};
  std::array<Vec16, 8> frame{};
  double logit = 0.0;
};

AtomState make_atom(const TangentVec& d, double logit) {
  AtomState a;
  const TangentVec u = normalized(d);
  a.dir = u.to_array();
  const CayleyLine line = cay_line(u);
  for (std::size_t t = 0; t < 8; ++t) a.frame[t] = line.frame[t].to_array();
  a.logit = logit;
  return a;
}

std::vector<double> weights(const std::vector<AtomState>& atoms) {
  double top = -kInf;
  for (const AtomState& a : atoms) top = std::max(top, a.logit);
  std::vector<double> w;
  double total = 0.0;
  for (const AtomState& a : atoms) total += w.emplace_back(std::exp(a.logit - top));
  for (double& x : w) x /= total;
  return w;
}

FormPair forms_of(const std::vector<AtomState>& atoms) {
  FormPair fp{Matrix(16, 16), Matrix(16, 16)};
  const std::vector<double> w = weights(atoms);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    fp.h.add_outer(atoms[i].dir, w[i]);
    for (const Vec16& f : atoms[i].frame) fp.hhat.add_outer(f, w[i]);
  }
  return fp;
}

TangentVec random_direction(Rng& rng) {
  TangentVec d;
  do {
    d = TangentVec{rng.normal_octonion(), rng.normal_octonion()};
  } while (d.norm() < 1e-6);
  return d;
}

std::vector<AtomState> init_measure(Rng& rng, const SearchConfig& cfg) {
  const auto n = static_cast<std::size_t>(rng.uniform_int(cfg.atoms_min, cfg.atoms_max));
  std::vector<AtomState> atoms;
  if (cfg.init == MeasureInit::kCayleyLine) {
    const CayleyLine line = cay_line(random_direction(rng));
    for (std::size_t i = 0; i < n; ++i) {
      TangentVec d = line.embed(rng.unit_octonion());
      d += TangentVec{rng.normal_octonion(), rng.normal_octonion()} * (1e-3 / 4.0);
      atoms.push_back(make_atom(d, rng.normal()));
    }
    return atoms;
  }
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(make_atom(random_direction(rng), rng.normal()));
  return atoms;
}

std::vector<AtomState> perturb_measure(const std::vector<AtomState>& cur, Rng& rng, double sigma,
                                       const SearchConfig& cfg) {
  std::vector<AtomState> next = cur;
  const double r = rng.uniform();
  const auto n = static_cast<std::int64_t>(next.size());
  if (r < 0.6) {
    AtomState& a = next[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
    Vec16 d = a.dir;
    for (double& x : d) x += sigma * rng.normal();
    TangentVec t = TangentVec::from_array(d);
    if (t.norm() < 1e-6) t = random_direction(rng);
    a = make_atom(t, a.logit);
  } else if (r < 0.9) {
    for (AtomState& a : next) a.logit += sigma * rng.normal();
  } else {
    const bool can_grow = n < cfg.atoms_max, can_shrink = n > cfg.atoms_min;
    if (can_grow && (!can_shrink || rng.uniform() < 0.5)) {
      double mean = 0.0;
      for (const AtomState& a : next) mean += a.logit / static_cast<double>(n);
      next.push_back(make_atom(random_direction(rng), mean + rng.normal()));
    } else if (can_shrink) {
      next.erase(next.begin() + rng.uniform_int(0, n - 1));
    }
  }
  return next;
}

json measure_json(const std::vector<AtomState>& atoms) {
  const std::vector<double> w = weights(atoms);
  json list = json::array();
  for (std::size_t i = 0; i < atoms.size(); ++i) list.push_back({{"weight", w[i]}, {"dir", atoms[i].dir}});
  return {{"kind", "measure"}, {"atoms", list}};
}

// ---------------------------------------------------------------------------
// Block form state: unconstrained parameters mapped onto admissible forms.
//   p[0]       lambda = (1 + sigmoid) / 2
//   p[1..8]    spectrum logits of A, p[9..16] of B
//   p[17..80]  G, C proportional to sqrt(a (lambda - a)) G sqrt(b (mu - b))
//   p[81]      fraction of the largest admissible coupling (sigmoid)

std::array<double, 8> softmax_scaled(const std::vector<double>& p, std::size_t first, double total) {
  std::array<double, 8> out{};
  const double top = *std::max_element(p.begin() + static_cast<std::ptrdiff_t>(first),
                                       p.begin() + static_cast<std::ptrdiff_t>(first + 8));
  double s = 0.0;
  for (std::size_t k = 0; k < 8; ++k) s += (out[k] = std::exp(p[first + k] - top));
  for (double& x : out) x *= total / s;
  return out;
}

std::array<std::size_t, 8> descending_order(const std::array<double, 8>& v) {
  std::array<std::size_t, 8> idx{};
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] > v[j]; });
  return idx;
}

double sigma_max(const Matrix& m) { return std::sqrt(std::max(0.0, max_eigenvalue((m.transpose() * m).symmetrized()))); }

BlockForm block_of(const std::vector<double>& p) {
  BlockForm bf;
  bf.lambda = 0.5 * (1.0 + sigmoid(p[0]));
  bf.mu = 1.0 - bf.lambda;
  const std::array<double, 8> a = softmax_scaled(p, 1, bf.lambda);
  const std::array<double, 8> b = softmax_scaled(p, 9, bf.mu);
  Matrix g(8, 8), m1(8, 8), m2(8, 8);
  std::array<double, 8> ra{}, rb{};
  for (std::size_t k = 0; k < 8; ++k) {
    ra[k] = std::sqrt(a[k] * std::max(bf.lambda - a[k], 0.0));
    rb[k] = std::sqrt(b[k] * std::max(bf.mu - b[k], 0.0));
  }
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      g(i, j) = p[17 + 8 * i + j];
      m1(i, j) = std::sqrt(std::max(bf.lambda - a[i], 0.0)) * g(i, j) * std::sqrt(std::max(bf.mu - b[j], 0.0));
      m2(i, j) = std::sqrt(a[i]) * g(i, j) * std::sqrt(b[j]);
    }
  const double n = std::max(sigma_max(m1), sigma_max(m2));
  const double scale = n > 0.0 ? sigmoid(p[81]) / n : 0.0;

  const std::array<std::size_t, 8> oa = descending_order(a), ob = descending_order(b);
  for (std::size_t i = 0; i < 8; ++i) {
    bf.a[i] = a[oa[i]];
    bf.b[i] = b[ob[i]];
  }
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) bf.c(i, j) = scale * ra[oa[i]] * g(oa[i], ob[j]) * rb[ob[j]];
  return bf;
}

std::vector<double> init_block(Rng& rng) {
  std::vector<double> p(kBlockParams);
  p[0] = 2.0 * rng.normal();
  const double sa = std::exp(rng.uniform(-1.0, 1.5)), sb = std::exp(rng.uniform(-1.0, 1.5));
  for (std::size_t k = 0; k < 8; ++k) {
    p[1 + k] = sa * rng.normal();
    p[9 + k] = sb * rng.normal();
  }
  for (std::size_t k = 17; k < 81; ++k) p[k] = rng.normal();
  p[81] = 2.0 + rng.normal();
  return p;
}

std::vector<double> perturb_block(const std::vector<double>& cur, Rng& rng, double sigma) {
  std::vector<double> next = cur;
  bool moved = false;
  for (double& x : next)
    if (rng.uniform() < 0.1) {
      x += sigma * rng.normal();
      moved = true;
    }
  if (!moved) next[static_cast<std::size_t>(rng.uniform_int(0, kBlockParams - 1))] += sigma * rng.normal();
  return next;
}

// ---------------------------------------------------------------------------

template <class State>
struct Problem {
  std::function<State(Rng&)> init;
  std::function<State(const State&, Rng&, double)> perturb;
  std::function<Evaluation(const State&)> eval;
  std::function<json(const State&)> serialize;
};

struct Tracker {
  SearchResult result;
  bool any = false;

  template <class State>
  void offer(const Evaluation& e, const State& s, const std::function<json(const State&)>& ser) {
    ++result.evaluations;
    if (!e.defined) return;
    if (!any || e.value < result.best_slack) {
      any = true;
      result.best_slack = e.value;
      result.best_abs_slack = e.slack;
      result.best_config = ser(s);
      result.trace.emplace_back(result.evaluations - 1, e.value);
    }
  }
};

template <class State>
void run_restart(const Problem<State>& pb, const SearchConfig& cfg, std::int64_t evals, Rng& rng, Tracker& tr) {
  State cur = pb.init(rng);
  Evaluation ce = pb.eval(cur);
  tr.offer(ce, cur, pb.serialize);
  const double t0 = 0.02 * (ce.defined ? std::max(std::abs(ce.value), 1e-3) : 1.0);
  for (std::int64_t k = 1; k < evals; ++k) {
    const double decay = std::pow(1e-3, static_cast<double>(k) / static_cast<double>(evals));
    State cand = pb.perturb(cur, rng, cfg.step * decay);
    const Evaluation e = pb.eval(cand);
    tr.offer(e, cand, pb.serialize);
    if (!e.defined) continue;
    const bool accept = !ce.defined || e.value <= ce.value || rng.uniform() < std::exp(-(e.value - ce.value) / (t0 * decay));
    if (accept) {
      cur = std::move(cand);
      ce = e;
    }
  }
}

template <class State>
SearchResult run(const Problem<State>& pb, const SearchConfig& cfg) {
  const std::int64_t restarts =
      cfg.restarts > 0 ? cfg.restarts : std::clamp<std::int64_t>(cfg.budget / 5000, 1, 50);
  const std::int64_t r_used = std::min(restarts, cfg.budget);
  Tracker tr;
  for (std::int64_t r = 0; r < r_used; ++r) {
    const std::int64_t evals = cfg.budget / r_used + (r < cfg.budget % r_used ? 1 : 0);
    Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
    run_restart(pb, cfg, evals, rng, tr);
  }
  SearchResult res = std::move(tr.result);
  if (!tr.any) {
    res.best_slack = res.best_abs_slack = kInf;
    res.certified = undefined_eval();
    return res;
  }
  res.certified = evaluate_config(res.best_config, cfg.objective, cfg.alpha, kCertifyJacobi);
  res.violation = res.certified.defined && !res.certified.passed;
  return res;
}

}  // namespace

std::string to_string(Objective o) {
  switch (o) {
    case Objective::kMainRatio: return "main_ratio";
    case Objective::kKeyLemma1: return "key_lemma_1";
    case Objective::kKeyLemma2: return "key_lemma_2";
    case Objective::kSharpK: return "sharp_K";
  }
  return "";
}

std::string to_string(Parametrization p) { return p == Parametrization::kMeasure ? "measure" : "blockform"; }

Objective parse_objective(const std::string& s) {
  for (Objective o : {Objective::kMainRatio, Objective::kKeyLemma1, Objective::kKeyLemma2, Objective::kSharpK})
    if (s == to_string(o)) return o;
  throw std::invalid_argument("unknown objective '" + s + "'");
}

Parametrization parse_parametrization(const std::string& s) {
  if (s == "measure") return Parametrization::kMeasure;
  if (s == "blockform") return Parametrization::kBlockForm;
  throw std::invalid_argument("unknown parametrization '" + s + "'");
}

void validate(const SearchConfig& cfg) {
  if (cfg.budget < 1) throw std::invalid_argument("search budget must be at least 1");
  if (!(cfg.step > 0.0)) throw std::invalid_argument("search step must be positive");
  if (cfg.atoms_min < 1 || cfg.atoms_max < cfg.atoms_min) throw std::invalid_argument("bad atom range");
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (cfg.restarts < 0) throw std::invalid_argument("restarts must be nonnegative");
}

SearchResult minimize_slack(const SearchConfig& cfg) {
  validate(cfg);
  const JacobiOptions opts{};
  if (cfg.parametrization == Parametrization::kMeasure) {
    using S = std::vector<AtomState>;
    Problem<S> pb{
        [&](Rng& rng) { return init_measure(rng, cfg); },
        [&](const S& s, Rng& rng, double sigma) { return perturb_measure(s, rng, sigma, cfg); },
        [&](const S& s) { return eval_measure_forms(forms_of(s), cfg.objective, cfg.alpha, opts); },
        measure_json,
    };
    return run(pb, cfg);
  }
  using S = std::vector<double>;
  Problem<S> pb{
      init_block,
      perturb_block,
      [&](const S& s) { return eval_block(block_of(s), cfg.objective, cfg.alpha, opts); },
      [](const S& s) { return to_json(block_of(s)); },
  };
  return run(pb, cfg);
}

namespace {

// Rethrows JSON access errors as std::invalid_argument.
template <class F>
auto with_schema(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

DiscreteMeasure measure_from_json_unchecked(const json& j) {
  std::vector<Atom> atoms;
  for (const json& a : j.at("atoms")) {
    const auto dir = a.at("dir").get<std::vector<double>>();
    if (dir.size() != 16) throw std::invalid_argument("atom direction must have 16 entries");
    atoms.push_back(Atom{TangentVec::from_array(dir), a.at("weight").get<double>()});
  }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

BlockForm blockform_from_json_unchecked(const json& j) {
  BlockForm bf;
  bf.lambda = j.at("lambda").get<double>();
  bf.mu = j.at("mu").get<double>();
  bf.a = j.at("a").get<std::array<double, 8>>();
  bf.b = j.at("b").get<std::array<double, 8>>();
  const auto c = j.at("c").get<std::vector<std::vector<double>>>();
  if (c.size() != 8) throw std::invalid_argument("C must be 8x8");
  for (std::size_t i = 0; i < 8; ++i) {
    if (c[i].size() != 8) throw std::invalid_argument("C must be 8x8");
    for (std::size_t k = 0; k < 8; ++k) bf.c(i, k) = c[i][k];
  }
  return bf;
}

}  // namespace

DiscreteMeasure measure_from_json(const json& j) {
  return with_schema("measure", [&] { return measure_from_json_unchecked(j); });
}

BlockForm blockform_from_json(const json& j) {
  return with_schema("blockform", [&] { return blockform_from_json_unchecked(j); });
}

Evaluation evaluate_config(const json& config, Objective objective, double alpha, JacobiOptions opts) {
  const std::string kind = with_schema("configuration", [&] { return config.at("kind").get<std::string>(); });
  if (kind == "measure") return eval_measure_forms(build_forms(measure_from_json(config)), objective, alpha, opts);
  if (kind == "blockform") return eval_block(blockform_from_json(config), objective, alpha, opts);
  throw std::invalid_argument("unknown configuration kind '" + kind + "'");
}

json to_json(const DiscreteMeasure& m) {
  json list = json::array();
  for (const Atom& a : m.atoms) list.push_back({{"weight", a.weight}, {"dir", a.dir.to_array()}});
  return {{"kind", "measure"}, {"atoms", list}};
}

json to_json(const BlockForm& bf) {
  json c = json::array();
  for (std::size_t i = 0; i < 8; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < 8; ++j) row.push_back(bf.c(i, j));
    c.push_back(row);
  }
  return {{"kind", "blockform"}, {"lambda", bf.lambda}, {"mu", bf.mu}, {"a", bf.a}, {"b", bf.b}, {"c", c}};
}

json to_json(const SearchResult& r) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json trace = json::array();
  for (const auto& [i, v] : r.trace) trace.push_back({i, v});
  return {{"best_config", r.best_config},
          {"best_slack", num(r.best_slack)},
          {"best_abs_slack", num(r.best_abs_slack)},
          {"certified",
           {{"value", num(r.certified.value)},
            {"slack", num(r.certified.slack)},
            {"defined", r.certified.defined},
            {"passed", r.certified.passed}}},
          {"violation", r.violation},
          {"evaluations", r.evaluations},
          {"trace", trace}};
}

// ---------------------------------------------------------------------------
// Projection of raw block data.

namespace {

double defect_of(const Matrix& h, const Matrix& d, double lambda, double mu) {
  double ta = 0.0, tb = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    ta += h(i, i);
    tb += h(8 + i, 8 + i);
  }
  return std::max({std::abs(ta - lambda), std::abs(tb - mu), -min_eigenvalue(h.symmetrized()),
                   -min_eigenvalue((d - h).symmetrized()), 0.0});
}

}  // namespace

double raw_defect(const RawBlock& raw) {
  const Matrix d = block_diag(Matrix::identity(8) * raw.lambda, Matrix::identity(8) * (1.0 - raw.lambda));
  const Matrix asym = raw.a.symmetrized(), bsym = raw.b.symmetrized();
  const double asymmetry = std::max(max_abs_diff(raw.a, asym), max_abs_diff(raw.b, bsym));
  return std::max(asymmetry, defect_of(assemble_blocks(asym, raw.c, raw.c.transpose(), bsym), d, raw.lambda,
                                       1.0 - raw.lambda));
}

Projection project_blockform(const RawBlock& raw) {
  for (const Matrix* m : {&raw.a, &raw.b, &raw.c})
    if (m->rows() != 8 || m->cols() != 8) throw std::invalid_argument("project_blockform: blocks must be 8x8");
  if (!(raw.lambda >= 0.0 && raw.lambda <= 1.0))
    throw std::invalid_argument("project_blockform: lambda must lie in [0, 1]");
  const double lambda = raw.lambda, mu = 1.0 - raw.lambda;
  const Matrix d = block_diag(Matrix::identity(8) * lambda, Matrix::identity(8) * mu);
  Matrix h = assemble_blocks(raw.a.symmetrized(), raw.c, raw.c.transpose(), raw.b.symmetrized());

  Projection out;
  out.defect = defect_of(h, d, lambda, mu);
  while (out.defect >= 1e-10 && out.rounds < 100) {
    h = clip_psd(h);
    h = d - clip_psd(d - h);
    double ta = 0.0, tb = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      ta += h(i, i);
      tb += h(8 + i, 8 + i);
    }
    for (std::size_t i = 0; i < 8; ++i) {
      h(i, i) += (lambda - ta) / 8.0;
      h(8 + i, 8 + i) += (mu - tb) / 8.0;
    }
    ++out.rounds;
    out.defect = defect_of(h, d, lambda, mu);
  }
  if (out.defect >= 1e-10) return out;

  const SymmetricEigen ea = eigen_sym(h.block(0, 0, 8, 8).symmetrized());
  const SymmetricEigen eb = eigen_sym(h.block(8, 8, 8, 8).symmetrized());
  BlockForm bf;
  bf.lambda = lambda;
  bf.mu = mu;
  std::copy(ea.values.begin(), ea.values.end(), bf.a.begin());
  std::copy(eb.values.begin(), eb.values.end(), bf.b.begin());
  bf.c = ea.vectors.transpose() * h.block(0, 8, 8, 8) * eb.vectors;
  out.form = bf;
  return out;
}

}  // namespace cayley
