#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cheeger/bound_entry.hpp"
#include "cheeger/congestion.hpp"
#include "cheeger/error.hpp"
#include "cheeger/expansion.hpp"
#include "cheeger/kernel.hpp"
#include "cheeger/setops.hpp"
#include "cheeger/shape.hpp"
#include "cheeger/spectra.hpp"

namespace cheeger {

/// Thread-safe compute-once cell.
template <class T>
class Lazy {
 public:
  explicit Lazy(std::function<T()> make) : make_(std::move(make)) {}
  Lazy(const Lazy&) = delete;
  Lazy& operator=(const Lazy&) = delete;

  const T& get() const {
    std::call_once(flag_, [this] { value_.emplace(make_()); });
    return *value_;
  }

 private:
  std::function<T()> make_;
  mutable std::once_flag flag_;
  mutable std::optional<T> value_;
};

/// Everything the bound formulas share for one kernel: the exact spectrum,
/// the routed kernels, transition minima, and lazily computed expansion
/// constants.
///
/// Non-reversible kernels route edge quantities through (P + P*)/2 and vertex
/// quantities through P itself with P0 replaced by P0/2.
class BoundContext {
 public:
  explicit BoundContext(const MarkovKernel& kernel, std::size_t workers = 1)
      : K(kernel),
        reversible(is_reversible(kernel)),
        edge(reversible ? kernel : additive_symmetrization(kernel)),
        spectrum(cheeger::spectrum(kernel)),
        p0(min_transition_prob(kernel, false)),
        p0_hat(min_transition_prob(kernel, true)),
        vertex_p0(reversible ? p0 : p0 / 2.0),
        workers(workers),
        h([this] { return conductance_global(edge, this->workers); }),
        h_sym([this] { return sym_conductance_global(edge, this->workers); }),
        vertex([this] { return vertex_expansions(K, this->workers); }),
        hbar_sym([this] { return modified_cheeger(K, this->workers); }),
        hbar_out_value([this] { return hbar_out(K); }) {
    require_enumerable(kernel);
  }

  std::string edge_route() const { return reversible ? "direct" : "symmetrized"; }
  std::string vertex_route() const { return reversible ? "direct" : "P0/2"; }

  const MarkovKernel K;
  const bool reversible;
  const MarkovKernel edge;
  const Spectrum spectrum;
  const double p0;
  const double p0_hat;
  const double vertex_p0;
  const std::size_t workers;

  Lazy<ExpansionProfile> h;
  Lazy<ExpansionProfile> h_sym;
  Lazy<VertexExpansions> vertex;
  Lazy<ExpansionProfile> hbar_sym;
  Lazy<HbarOut> hbar_out_value;
};

/// lambda >= 1 - sqrt(1 - h^2) >= h^2 / 2.
inline BoundEntry classic_cheeger(const BoundContext& c) {
  BoundEntry e;
  e.name = "classic_cheeger";
  e.route = c.edge_route();
  const auto& h = c.h.get();
  e.value = 1.0 - clamped_sqrt(1.0 - h.global_value * h.global_value, e.name);
  e.weaker = {{"h^2/2", h.global_value * h.global_value / 2.0}};
  e.witness = h.witness.bits;
  return attach_exact(e, c.spectrum);
}

/// h~ >= lambda >= 2(1 - sqrt(1 - h~^2/4)) >= h~^2 / 4.
inline BoundEntry chi_cheeger(const BoundContext& c) {
  BoundEntry e;
  e.name = "chi_cheeger";
  e.route = c.edge_route();
  const auto& hs = c.h_sym.get();
  const double ht = hs.global_value;
  e.value = 2.0 * (1.0 - clamped_sqrt(1.0 - ht * ht / 4.0, e.name));
  e.weaker = {{"h~^2/4", ht * ht / 4.0}};
  e.upper = ht;
  e.witness = hs.witness.bits;
  return attach_exact(e, c.spectrum);
}

namespace detail {

inline double unit_argument(double a, const std::string& where) {
  if (a < 0.0) {
    if (a >= -kIdentityTolerance) return 0.0;
  } else if (a > 1.0) {
    if (a <= 1.0 + kIdentityTolerance) return 1.0;
  } else {
    return a;
  }
  throw Error(ErrorCode::InconsistentParams, where + ": argument " + std::to_string(a) +
                                                 " outside [0,1]");
}

}  // namespace detail

/// lambda >= 2(1 - max_A [f(pi(A)+Q) + f(pi(A)-Q)] / (2 f(pi(A)))), Q = Q(A,A^c).
inline BoundEntry strong_cheeger(const BoundContext& c, const ShapeFunction& f) {
  BoundEntry e;
  e.name = "strong_cheeger[" + f.name + "]";
  e.route = c.edge_route();
  if (!f.concave) throw Error(ErrorCode::ConcavityRequired, f.name + " is not concave");
  const MarkovKernel& K = c.edge;
  const auto r = sweep(
      enumerate_proper_subsets(K, false), Sense::Maximize,
      [&](const VertexSet& A) -> std::optional<double> {
        const double denominator = f(A.measure);
        if (!(denominator > 0.0)) return std::nullopt;
        const double q = ergodic_flow(K, A, complement(K, A));
        const double up = detail::unit_argument(A.measure + q, e.name);
        const double down = detail::unit_argument(A.measure - q, e.name);
        return (f(up) + f(down)) / (2.0 * denominator);
      },
      c.workers);
  if (!r.found) throw Error(ErrorCode::ZeroDenominator, f.name + " vanishes on every set");
  e.value = 2.0 * (1.0 - r.value);
  e.witness = r.witness;
  return attach_exact(e, c.spectrum);
}

/// lambda >= min_A Q(A,A^c)^2 / (-f(pi(A)) / f''(pi(A))), for f and f'' concave.
inline BoundEntry diffiQ(const BoundContext& c, const ShapeFunction& f) {
  BoundEntry e;
  e.name = "diffiQ[" + f.name + "]";
  e.route = c.edge_route();
  if (!f.concave || !f.second_derivative_concave || !f.second_derivative) {
    throw Error(ErrorCode::ConcavityRequired, f.name + " needs f and f'' concave with closed-form f''");
  }
  const MarkovKernel& K = c.edge;
  const auto r = sweep(
      enumerate_proper_subsets(K, true), Sense::Minimize,
      [&](const VertexSet& A) -> std::optional<double> {
        const double q = ergodic_flow(K, A, complement(K, A));
        const double scale = -f(A.measure) / f.second_derivative(A.measure);
        if (!(scale > 0.0)) return std::nullopt;
        return q * q / scale;
      },
      c.workers);
  if (!r.found) throw Error(ErrorCode::ZeroDenominator, "no set with positive -f/f''");
  e.value = r.value;
  e.witness = r.witness;
  return attach_exact(e, c.spectrum);
}

/// The three vertex-expansion bounds, strongest forms with the simplified forms recorded.
inline std::array<BoundEntry, 3> vertex_bounds(const BoundContext& c) {
  const double p = c.vertex_p0;
  const auto& v = c.vertex.get();
  const double out = v.h_out.global_value;
  const double in = v.h_in.global_value;
  const double ins = v.h_in_sym.global_value;

  BoundEntry eo;
  eo.name = "vertex_h_out";
  eo.value = 1.0 - clamped_sqrt(1.0 - out * p, eo.name) - p * (std::sqrt(1.0 + out) - 1.0);
  eo.weaker = {{"P0/12*min(h_out^2,h_out)", p / 12.0 * std::min(out * out, out)}};
  eo.witness = v.h_out.witness.bits;

  BoundEntry ei;
  ei.name = "vertex_h_in";
  ei.value = 1.0 - std::sqrt(1.0 + in * p) - p * (clamped_sqrt(1.0 - in, ei.name) - 1.0);
  ei.weaker = {{"P0/8*h_in^2", p / 8.0 * in * in}};
  ei.witness = v.h_in.witness.bits;

  BoundEntry es;
  es.name = "vertex_h_in_sym";
  es.value = 1.0 - clamped_sqrt(1.0 - (ins * p / 2.0) * (ins * p / 2.0), es.name) -
             p * (clamped_sqrt(1.0 - (ins / 2.0) * (ins / 2.0), es.name) - 1.0);
  es.weaker = {{"P0(1+P0)/8*h~_in^2", p * (1.0 + p) / 8.0 * ins * ins}};
  es.witness = v.h_in_sym.witness.bits;

  std::array<BoundEntry, 3> out_entries{eo, ei, es};
  for (auto& e : out_entries) {
    e.route = c.vertex_route();
    attach_exact(e, c.spectrum);
  }
  return out_entries;
}

/// Reversible-chain consequences of the vertex bounds:
/// (P0/2) max{1 - sqrt(1-h_in), sqrt(1+h_out) - 1}^2 and
/// max{(P0/8) h~_in^2, (P0/12) min{h_out^2, h_out}}.
inline std::array<BoundEntry, 2> reversible_vertex_bounds(const BoundContext& c) {
  if (!c.reversible) throw Error(ErrorCode::NotReversible, "reversible vertex bounds");
  const double p = c.p0;
  const auto& v = c.vertex.get();
  const double out = v.h_out.global_value;
  const double in = v.h_in.global_value;
  const double ins = v.h_in_sym.global_value;

  BoundEntry strong;
  strong.name = "vertex_reversible";
  const double m = std::max(1.0 - clamped_sqrt(1.0 - in, strong.name), std::sqrt(1.0 + out) - 1.0);
  strong.value = p / 2.0 * m * m;

  BoundEntry weak;
  weak.name = "vertex_reversible_weak";
  weak.value = std::max(p / 8.0 * ins * ins, p / 12.0 * std::min(out * out, out));
  return {attach_exact(strong, c.spectrum), attach_exact(weak, c.spectrum)};
}

/// Earlier vertex-expansion bounds for reversible chains, kept as comparison rows.
inline std::array<BoundEntry, 2> stoyanov_baseline(const BoundContext& c) {
  if (!c.reversible) throw Error(ErrorCode::NotReversible, "stoyanov baseline");
  const double p = c.p0;
  const auto& v = c.vertex.get();
  const double out = v.h_out.global_value;
  const double in = v.h_in.global_value;

  BoundEntry strong;
  strong.name = "stoyanov";
  const double a = 1.0 - clamped_sqrt(1.0 - in, strong.name);
  const double b = std::sqrt(1.0 + out) - 1.0;
  strong.value = std::max(p / 2.0 * a * a, p / 4.0 * b * b);

  BoundEntry weak;
  weak.name = "stoyanov_weak";
  weak.value = std::max(p / 8.0 * in * in, p / 24.0 * std::min(out * out, out));
  return {attach_exact(strong, c.spectrum), attach_exact(weak, c.spectrum)};
}

/// Per-set combinations of edge and vertex expansion, each minimized over pi(A) <= 1/2:
/// the two mixed formulas and the per-set max of the three simplified bounds.
inline std::array<BoundEntry, 3> mixed_bounds(const BoundContext& c) {
  const double p = c.vertex_p0;
  const double rest = 1.0 - p;
  const MarkovKernel& K = c.K;

  struct PerSet {
    double h, ht, in, out, ins;
  };
  auto quantities = [&](const VertexSet& A) {
    const VertexSet Ac = complement(K, A);
    const double q = ergodic_flow(c.edge, A, Ac);
    const Boundaries b = boundaries(K, A);
    return PerSet{q / A.measure, q / (A.measure * Ac.measure), b.inner.measure / A.measure,
                  b.outer.measure / A.measure, b.inner.measure / (A.measure * Ac.measure)};
  };

  auto first = [&](const VertexSet& A) -> std::optional<double> {
    const PerSet s = quantities(A);
    const char* where = "mixed_edge_vertex";
    return 2.0 - p * clamped_sqrt(1.0 - s.in, where) - p * std::sqrt(1.0 + s.out) -
           clamped_sqrt(rest * rest - rest * (s.h - p * s.in), where) -
           clamped_sqrt(rest * rest + rest * (s.h - p * s.out), where);
  };
  auto second = [&](const VertexSet& A) -> std::optional<double> {
    const PerSet s = quantities(A);
    const char* where = "mixed_symmetrized";
    const double k = (s.ht - p * s.ins) / 2.0;
    return 2.0 - p * clamped_sqrt(1.0 - s.ins * s.ins / 4.0, where) -
           clamped_sqrt(1.0 - s.ht * s.ht / 4.0, where) - clamped_sqrt(rest * rest - k * k, where);
  };
  auto third = [&](const VertexSet& A) -> std::optional<double> {
    const PerSet s = quantities(A);
    return std::max({s.ht * s.ht / 4.0, p / 8.0 * s.ins * s.ins,
                     p / 12.0 * std::min(s.out * s.out, s.out)});
  };

  const auto stream = enumerate_proper_subsets(K, true);
  std::array<BoundEntry, 3> out;
  const std::array<std::string, 3> names{"mixed_edge_vertex", "mixed_symmetrized", "mixed_per_set_max"};
  const auto r1 = sweep(stream, Sense::Minimize, first, c.workers);
  const auto r2 = sweep(stream, Sense::Minimize, second, c.workers);
  const auto r3 = sweep(stream, Sense::Minimize, third, c.workers);
  const std::array<const SweepResult*, 3> results{&r1, &r2, &r3};
  for (std::size_t i = 0; i < 3; ++i) {
    out[i].name = names[i];
    out[i].route = c.reversible ? "direct" : "P0/2";
    out[i].value = results[i]->value;
    out[i].witness = results[i]->witness;
    attach_exact(out[i], c.spectrum);
  }
  return out;
}

/// 1 - lambda_* >= 1 - sqrt(1 - hbar~^2) >= hbar~^2 / 2.
inline BoundEntry modified_cheeger_bound(const BoundContext& c) {
  BoundEntry e;
  e.name = "modified_cheeger";
  e.target = Target::OneMinusLambdaStar;
  const auto& hb = c.hbar_sym.get();
  const double v = hb.global_value;
  e.value = 1.0 - clamped_sqrt(1.0 - v * v, e.name);
  e.weaker = {{"hbar~^2/2", v * v / 2.0}};
  e.witness = hb.witness.bits;
  return attach_exact(e, c.spectrum);
}

/// 1 - lambda_* >= (P0-hat / 12) min{hbar_out^2, hbar_out}.
inline BoundEntry hbar_out_bound(const BoundContext& c) {
  BoundEntry e;
  e.name = "hbar_out";
  e.target = Target::OneMinusLambdaStar;
  const auto& hb = c.hbar_out_value.get();
  e.value = c.p0_hat / 12.0 * std::min(hb.value * hb.value, hb.value);
  e.witness = hb.witness_a.bits;
  e.note = "hbar_out=" + std::to_string(hb.value) + " skipped_sets=" + std::to_string(hb.skipped);
  return attach_exact(e, c.spectrum);
}

/// lambda_P = 2 lambda_{P'} >= 2 (1 - C_{sin(pi a)}(P')) with P' = lazify(P).
inline BoundEntry sin_congestion_gap(const BoundContext& c) {
  BoundEntry e;
  e.name = "sin_congestion_gap";
  e.route = "lazified";
  const MarkovKernel lazy = lazify(c.K);
  const auto cf = f_congestion(lazy, shapes::sin_pi_a(), c.workers);
  e.value = 2.0 * (1.0 - cf.value);
  e.weaker = {{"1-C_sin(P')", 1.0 - cf.value}};
  e.witness = cf.witness.bits;
  return attach_exact(e, c.spectrum);
}

/// 1 - lambda_max >= 1 - C_{sin(pi a)}(P), on the (reversible) kernel itself.
inline BoundEntry sin_psi_eigen_bound(const BoundContext& c) {
  if (!c.reversible) throw Error(ErrorCode::NotReversible, "sin_psi_eigen_bound");
  BoundEntry e;
  e.name = "sin_psi_eigen";
  e.target = Target::OneMinusLambdaMax;
  const auto cf = f_congestion(c.K, shapes::sin_pi_a(), c.workers);
  e.value = 1.0 - cf.value;
  e.witness = cf.witness.bits;
  return attach_exact(e, c.spectrum);
}

inline BoundEntry generalized_cheeger_bound(const BoundContext& c, const ShapeFunction& f) {
  return generalized_cheeger_bound(c.K, f, c.spectrum, c.workers);
}

struct BoundReport {
  std::size_t n = 0;
  bool reversible = false;
  double p0 = 0.0;
  double p0_hat = 0.0;
  Spectrum spectrum;
  std::vector<BoundEntry> entries;

  bool all_valid() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const BoundEntry& e) { return e.error || (e.valid && e.upper_valid); });
  }
  const BoundEntry* find(const std::string& name) const {
    for (const auto& e : entries) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }
};

/// Every bound applicable to the kernel class, with exact targets attached.
/// Per-bound failures are recorded on their rows instead of aborting.
inline BoundReport full_report(const MarkovKernel& K, std::size_t workers = 1) {
  require_enumerable(K);
  const BoundContext c(K, workers);

  struct Task {
    std::vector<std::string> names;
    std::function<std::vector<BoundEntry>()> run;
  };
  auto one = [](std::string name, std::function<BoundEntry()> f) {
    return Task{{std::move(name)}, [f] { return std::vector<BoundEntry>{f()}; }};
  };
  auto many = [](std::vector<std::string> names, auto f) {
    return Task{std::move(names), [f] {
                  const auto r = f();
                  return std::vector<BoundEntry>(r.begin(), r.end());
                }};
  };

  const auto rooted = shapes::sqrt_a_one_minus_a();
  const auto root = shapes::sqrt_a();
  const auto sine = shapes::sin_pi_a();

  std::vector<Task> tasks;
  tasks.push_back(one("classic_cheeger", [&] { return classic_cheeger(c); }));
  tasks.push_back(one("chi_cheeger", [&] { return chi_cheeger(c); }));
  tasks.push_back(one("strong_cheeger[" + rooted.name + "]", [&] { return strong_cheeger(c, rooted); }));
  tasks.push_back(one("strong_cheeger[" + sine.name + "]", [&] { return strong_cheeger(c, sine); }));
  tasks.push_back(one("diffiQ[" + rooted.name + "]", [&] { return diffiQ(c, rooted); }));
  tasks.push_back(one("diffiQ[" + root.name + "]", [&] { return diffiQ(c, root); }));
  tasks.push_back(many({"vertex_h_out", "vertex_h_in", "vertex_h_in_sym"}, [&] { return vertex_bounds(c); }));
  if (c.reversible) {
    tasks.push_back(many({"vertex_reversible", "vertex_reversible_weak"},
                         [&] { return reversible_vertex_bounds(c); }));
    tasks.push_back(many({"stoyanov", "stoyanov_weak"}, [&] { return stoyanov_baseline(c); }));
  }
  tasks.push_back(many({"mixed_edge_vertex", "mixed_symmetrized", "mixed_per_set_max"},
                       [&] { return mixed_bounds(c); }));
  for (const ShapeFunction* f : {&root, &rooted, &sine}) {
    tasks.push_back(one("generalized_cheeger[" + f->name + "]",
                        [&c, f] { return generalized_cheeger_bound(c, *f); }));
  }
  tasks.push_back(one("modified_cheeger", [&] { return modified_cheeger_bound(c); }));
  tasks.push_back(one("hbar_out", [&] { return hbar_out_bound(c); }));
  tasks.push_back(one("sin_congestion_gap", [&] { return sin_congestion_gap(c); }));
  if (c.reversible) tasks.push_back(one("sin_psi_eigen", [&] { return sin_psi_eigen_bound(c); }));

  std::vector<std::vector<BoundEntry>> results(tasks.size());
  const std::size_t lanes = std::max<std::size_t>(1, std::min(workers, tasks.size()));
  run_parallel(lanes, [&](std::size_t lane) {
    for (std::size_t i = lane; i < tasks.size(); i += lanes) {
      try {
        results[i] = tasks[i].run();
      } catch (const Error& err) {
        for (const auto& name : tasks[i].names) {
          BoundEntry e;
          e.name = name;
          e.error = err.what();
          results[i].push_back(e);
        }
      }
    }
  });

  BoundReport report;
  report.n = K.n();
  report.reversible = c.reversible;
  report.p0 = c.p0;
  report.p0_hat = c.p0_hat;
  report.spectrum = c.spectrum;
  for (auto& r : results) {
    for (auto& e : r) report.entries.push_back(std::move(e));
  }
  return report;
}

/// Single-kernel conveniences that build their own context.
inline BoundEntry classic_cheeger(const MarkovKernel& K) { return classic_cheeger(BoundContext(K)); }
inline BoundEntry chi_cheeger(const MarkovKernel& K) { return chi_cheeger(BoundContext(K)); }
inline BoundEntry strong_cheeger(const MarkovKernel& K, const ShapeFunction& f) {
  return strong_cheeger(BoundContext(K), f);
}
inline BoundEntry diffiQ(const MarkovKernel& K, const ShapeFunction& f) {
  return diffiQ(BoundContext(K), f);
}
inline std::array<BoundEntry, 3> vertex_bounds(const MarkovKernel& K) {
  return vertex_bounds(BoundContext(K));
}
inline std::array<BoundEntry, 2> reversible_vertex_bounds(const MarkovKernel& K) {
  return reversible_vertex_bounds(BoundContext(K));
}
inline std::array<BoundEntry, 2> stoyanov_baseline(const MarkovKernel& K) {
  return stoyanov_baseline(BoundContext(K));
}
inline std::array<BoundEntry, 3> mixed_bounds(const MarkovKernel& K) {
  return mixed_bounds(BoundContext(K));
}
inline BoundEntry modified_cheeger_bound(const MarkovKernel& K) {
  return modified_cheeger_bound(BoundContext(K));
}
inline BoundEntry hbar_out_bound(const MarkovKernel& K) { return hbar_out_bound(BoundContext(K)); }
inline BoundEntry sin_congestion_gap(const MarkovKernel& K) {
  return sin_congestion_gap(BoundContext(K));
}
inline BoundEntry sin_psi_eigen_bound(const MarkovKernel& K) {
  return sin_psi_eigen_bound(BoundContext(K));
}

}  // namespace cheeger
