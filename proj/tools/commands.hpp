#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cheeger/cheeger.hpp"

namespace cheeger::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kInputError = 2,
  kTooManyStates = 3,
  kSoundnessViolation = 4,
};

struct RunConfig {
  std::string command;
  std::optional<std::string> input;
  std::optional<std::string> chain;
  std::optional<std::size_t> n;
  std::optional<std::size_t> d;
  std::optional<double> laziness;
  std::uint64_t seed = 7;
  std::size_t samples = 10000;
  std::size_t steps = 10;
  std::string format = "table";
  std::string suite = "all";
  std::size_t count = 100;
  std::size_t n_max = 8;
  std::optional<std::string> out;
  std::size_t workers = 1;
};

inline ChainSpec chain_spec(const RunConfig& c) {
  ChainSpec s;
  s.family = chain_family(*c.chain);
  if (s.family != ChainFamily::TwoPoint && s.family != ChainFamily::Hypercube && !c.n) {
    throw Error(ErrorCode::InvalidSpec, "--chain " + *c.chain + " needs --n");
  }
  if (s.family == ChainFamily::Hypercube && !c.d) {
    throw Error(ErrorCode::InvalidSpec, "--chain hypercube needs --d");
  }
  s.n = c.n.value_or(2);
  s.d = c.d.value_or(1);
  s.seed = c.seed;
  s.laziness = c.laziness;
  return s;
}

inline MarkovKernel load_kernel(const RunConfig& c) {
  if (c.input.has_value() == c.chain.has_value()) {
    throw Error(ErrorCode::InvalidInput, "give exactly one of --input or --chain");
  }
  if (c.input) return read_kernel_json(*c.input);
  return generate(chain_spec(c));
}

inline void check_format(const RunConfig& c) {
  if (c.format != "table" && c.format != "csv" && c.format != "json") {
    throw Error(ErrorCode::InvalidInput, "--format must be table, csv or json");
  }
}

/// Sends the finished text to --out (atomically) or to the stream.
inline void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out) {
    write_file_atomic(*c.out, text);
  } else {
    out << text;
  }
}

inline std::string label_list(const MarkovKernel& K, Mask bits) {
  std::string s = "{";
  bool first = true;
  for (std::size_t x : members(bits)) {
    s += (first ? "" : ",") + K.label(x);
    first = false;
  }
  return s + "}";
}

inline std::string render_report_csv(const BoundReport& r) {
  std::string s = "name,value,target,exact,valid,witness_bitmask\n";
  for (const auto& e : r.entries) {
    s += e.name + ",";
    s += (e.error ? std::string("nan") : format_double(e.value)) + ",";
    s += std::string(to_string(e.target)) + ",";
    s += (e.error ? std::string("nan") : format_double(e.exact)) + ",";
    s += e.error ? "error" : (e.valid && e.upper_valid ? "true" : "false");
    s += ",";
    if (e.witness) s += std::to_string(*e.witness);
    s += "\n";
  }
  return s;
}

inline nlohmann::json report_json(const MarkovKernel& K, const BoundReport& r) {
  auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["n"] = r.n;
  j["reversible"] = r.reversible;
  j["p0"] = r.p0;
  j["p0_hat"] = r.p0_hat;
  j["gap"] = number(r.spectrum.gap);
  j["lambda_max"] = number(r.spectrum.lambda_max);
  j["lambda_star"] = number(r.spectrum.lambda_star);
  j["entries"] = nlohmann::json::array();
  for (const auto& e : r.entries) {
    nlohmann::json row;
    row["name"] = e.name;
    row["target"] = std::string(to_string(e.target));
    if (e.error) {
      row["error"] = *e.error;
      j["entries"].push_back(row);
      continue;
    }
    row["value"] = number(e.value);
    row["exact"] = number(e.exact);
    row["valid"] = e.valid && e.upper_valid;
    row["route"] = e.route;
    if (e.witness) {
      row["witness_bitmask"] = *e.witness;
      row["witness"] = label_list(K, *e.witness);
    }
    for (const auto& [name, value] : e.weaker) row["weaker"][name] = number(value);
    if (e.upper) row["upper"] = number(*e.upper);
    if (!e.note.empty()) row["note"] = e.note;
    j["entries"].push_back(row);
  }
  return j;
}

inline std::string render_report_table(const MarkovKernel& K, const BoundReport& r) {
  std::ostringstream s;
  s << std::setprecision(10);
  s << "states " << r.n << (r.reversible ? ", reversible" : ", non-reversible") << ", P0 " << r.p0
    << ", P0-hat " << r.p0_hat << "\n";
  s << "gap " << r.spectrum.gap << ", lambda_max " << r.spectrum.lambda_max << ", lambda_star "
    << r.spectrum.lambda_star << "\n\n";
  s << std::left << std::setw(34) << "bound" << std::setw(16) << "value" << std::setw(15) << "target"
    << std::setw(16) << "exact" << std::setw(8) << "valid"
    << "witness\n";
  for (const auto& e : r.entries) {
    s << std::setw(34) << e.name;
    if (e.error) {
      s << "error: " << *e.error << "\n";
      continue;
    }
    s << std::setw(16) << e.value << std::setw(15) << to_string(e.target) << std::setw(16) << e.exact
      << std::setw(8) << (e.valid && e.upper_valid ? "yes" : "NO")
      << (e.witness ? label_list(K, *e.witness) : "-");
    if (e.route != "direct") s << "  [" << e.route << "]";
    s << "\n";
  }
  return s.str();
}

inline int cmd_analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_format(c);
  const MarkovKernel K = load_kernel(c);
  const BoundReport r = full_report(K, c.workers);
  std::string text;
  if (c.format == "csv") {
    text = render_report_csv(r);
  } else if (c.format == "json") {
    text = report_json(K, r).dump(2) + "\n";
  } else {
    text = render_report_table(K, r);
  }
  emit(c, text, out);
  if (!r.all_valid()) {
    for (const auto& e : r.entries) {
      if (!e.error && !(e.valid && e.upper_valid)) {
        err << "soundness violation: " << e.name << " value " << format_double(e.value) << " exceeds "
            << to_string(e.target) << " " << format_double(e.exact) << "\n";
      }
    }
    return kSoundnessViolation;
  }
  return kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream&) {
  check_format(c);
  VerifyConfig v;
  v.seed = c.seed;
  v.count = c.count;
  v.n_max = c.n_max;
  v.workers = c.workers;
  if (c.count == 0) throw Error(ErrorCode::InvalidInput, "--count must be positive");
  if (c.n_max < 3 || c.n_max > kMaxEnumerationStates) {
    throw Error(ErrorCode::InvalidInput, "--n-max must lie in [3,24]");
  }
  std::vector<std::string> names = suite_names();
  if (c.suite != "all") names = {c.suite};

  std::vector<SuiteResult> results;
  for (const auto& name : names) results.push_back(run_suite(name, v));

  std::string text;
  bool ok = true;
  if (c.format == "csv") {
    text = "suite,passed,failed,first_failure\n";
    for (const auto& r : results) {
      text += r.name + "," + std::to_string(r.passed) + "," + std::to_string(r.failed) + ",\"" +
              r.first_failure + "\"\n";
      ok = ok && r.ok();
    }
  } else if (c.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results) {
      j.push_back({{"suite", r.name}, {"passed", r.passed}, {"failed", r.failed},
                   {"first_failure", r.first_failure}});
      ok = ok && r.ok();
    }
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream s;
    for (const auto& r : results) {
      s << (r.ok() ? "PASS " : "FAIL ") << std::left << std::setw(12) << r.name << " passed "
        << r.passed << " failed " << r.failed << "\n";
      if (!r.ok()) s << "  first failure: " << r.first_failure << "\n";
      ok = ok && r.ok();
    }
    text = s.str();
  }
  emit(c, text, out);
  return ok ? kOk : kVerifyFailed;
}

struct MixRow {
  std::size_t step;
  double exact_tv;
  double mp_bound;
  double mp_stderr;
  double eigen_envelope;
};

/// Worst start state for exact TV and for the Monte-Carlo bound, each maximized
/// over starting states; the reported stderr belongs to the maximizing start.
inline std::vector<MixRow> mixing_rows(const MarkovKernel& K, std::size_t steps, std::size_t samples,
                                       std::uint64_t seed, std::size_t workers) {
  const std::vector<double> exact = max_tv_distances(K, steps);
  std::vector<MixRow> rows(steps + 1);
  for (std::size_t t = 0; t <= steps; ++t) rows[t] = {t, exact[t], 0.0, 0.0, std::nan("")};
  for (std::size_t x = 0; x < K.n(); ++x) {
    const auto traj = mp_mixing_bound_trajectory(K, x, steps, samples, seed, workers);
    for (std::size_t t = 0; t <= steps; ++t) {
      if (x == 0 || traj[t].mean > rows[t].mp_bound) {
        rows[t].mp_bound = traj[t].mean;
        rows[t].mp_stderr = traj[t].std_error;
      }
    }
  }
  if (is_reversible(K)) {
    const double lmax = lambda_max(K);
    const double pmin = K.pi().minCoeff();
    for (std::size_t t = 0; t <= steps; ++t) {
      rows[t].eigen_envelope = 0.5 * std::pow(lmax, static_cast<double>(t)) / pmin;
    }
  }
  return rows;
}

inline int cmd_mix(const RunConfig& c, std::ostream& out, std::ostream&) {
  check_format(c);
  if (c.samples == 0) throw Error(ErrorCode::InvalidInput, "--samples must be positive");
  const MarkovKernel K = load_kernel(c);
  require_enumerable(K);
  const auto rows = mixing_rows(K, c.steps, c.samples, c.seed, c.workers);
  std::string text;
  if (c.format == "csv") {
    text = "step,exact_tv,mp_bound,mp_stderr,eigen_envelope\n";
    for (const auto& r : rows) {
      text += std::to_string(r.step) + "," + format_double(r.exact_tv) + "," + format_double(r.mp_bound) +
              "," + format_double(r.mp_stderr) + "," + format_double(r.eigen_envelope) + "\n";
    }
  } else if (c.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      j.push_back({{"step", r.step},
                   {"exact_tv", r.exact_tv},
                   {"mp_bound", r.mp_bound},
                   {"mp_stderr", r.mp_stderr},
                   {"eigen_envelope", std::isfinite(r.eigen_envelope) ? nlohmann::json(r.eigen_envelope)
                                                                      : nlohmann::json(nullptr)}});
    }
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream s;
    s << std::setprecision(8) << std::left << std::setw(6) << "step" << std::setw(16) << "exact_tv"
      << std::setw(16) << "mp_bound" << std::setw(16) << "mp_stderr"
      << "eigen_envelope\n";
    for (const auto& r : rows) {
      s << std::setw(6) << r.step << std::setw(16) << r.exact_tv << std::setw(16) << r.mp_bound
        << std::setw(16) << r.mp_stderr << r.eigen_envelope << "\n";
    }
    text = s.str();
  }
  emit(c, text, out);
  return kOk;
}

inline int cmd_generate(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (!c.chain) throw Error(ErrorCode::InvalidSpec, "generate needs --chain");
  const MarkovKernel K = generate(chain_spec(c));
  emit(c, kernel_json(K), out);
  return kOk;
}

/// Runs one command, mapping library errors onto exit codes.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "analyze") return cmd_analyze(c, out, err);
    if (c.command == "verify") return cmd_verify(c, out, err);
    if (c.command == "mix") return cmd_mix(c, out, err);
    if (c.command == "generate") return cmd_generate(c, out, err);
    err << "unknown command '" << c.command << "'\n";
    return kInputError;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.code() == ErrorCode::TooManyStates ? kTooManyStates : kInputError;
  }
}

}  // namespace cheeger::cli
