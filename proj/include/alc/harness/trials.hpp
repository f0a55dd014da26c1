#pragma once

// Seeded Monte Carlo trials for the recovery experiments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "alc/decode.hpp"
#include "alc/error.hpp"
#include "alc/harness/config.hpp"
#include "alc/measureop.hpp"
#include "alc/numfmt.hpp"
#include "alc/parallel.hpp"
#include "alc/rng.hpp"
#include "alc/setgen.hpp"

namespace alc {

/// Outcome counts of a zero-error recovery experiment. Any trial that does
/// not return the true signal as the unique answer counts as an error.
struct TrialStats {
  std::int64_t trials = 0;
  std::int64_t unique_correct = 0;
  std::int64_t unique_wrong = 0;
  std::int64_t ambiguous = 0;
  std::int64_t no_solution = 0;
  double empirical_error = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();

  bool operator==(const TrialStats&) const = default;
};

enum class TrialClass { unique_correct, unique_wrong, ambiguous, no_solution };

inline std::string to_string(TrialClass c) {
  switch (c) {
    case TrialClass::unique_correct: return "unique_correct";
    case TrialClass::unique_wrong: return "unique_wrong";
    case TrialClass::ambiguous: return "ambiguous";
    case TrialClass::no_solution: return "no_solution";
  }
  return "unknown";
}

struct TrialRecord {
  std::int64_t trial = 0;
  TrialClass outcome = TrialClass::no_solution;
  double residual = 0.0;
  double margin = std::numeric_limits<double>::infinity();
};

struct TrialRun {
  TrialStats stats;
  std::vector<TrialRecord> records;  // in trial order
};

struct RunOptions {
  unsigned threads = 1;
  bool fresh_matrix = false;  // draw a new A per trial instead of one per experiment
};

/// Seed of trial i. The shared matrix uses trial_seed(master, 0) directly;
/// trial i draws its signal from mix(trial_seed, 1), its own matrix (if any)
/// from mix(trial_seed, 2) and decoder starts from mix(trial_seed, 3).
inline std::uint64_t trial_seed(std::uint64_t master, std::int64_t i) {
  return mix(master, static_cast<std::uint64_t>(i));
}

inline TrialStats summarize(const std::vector<TrialRecord>& records) {
  TrialStats st;
  st.trials = static_cast<std::int64_t>(records.size());
  for (const auto& r : records) {
    switch (r.outcome) {
      case TrialClass::unique_correct: ++st.unique_correct; break;
      case TrialClass::unique_wrong: ++st.unique_wrong; break;
      case TrialClass::ambiguous: ++st.ambiguous; break;
      case TrialClass::no_solution: ++st.no_solution; break;
    }
    st.min_margin = std::min(st.min_margin, r.margin);
  }
  if (st.trials > 0)
    st.empirical_error = static_cast<double>(st.unique_wrong + st.ambiguous + st.no_solution) /
                         static_cast<double>(st.trials);
  return st;
}

namespace detail {

inline TrialClass classify(const DecodeOutcome& out, const Vector& truth, double rel_tol) {
  switch (out.status) {
    case DecodeStatus::ambiguous: return TrialClass::ambiguous;
    case DecodeStatus::no_solution: return TrialClass::no_solution;
    case DecodeStatus::unique: break;
  }
  const double scale = std::max(1.0, truth.cwiseAbs().maxCoeff());
  return (out.estimate - truth).cwiseAbs().maxCoeff() <= rel_tol * scale ? TrialClass::unique_correct
                                                                         : TrialClass::unique_wrong;
}

}  // namespace detail

/// Runs the recover or kron experiment described by cfg. Results are
/// independent of the thread count.
inline TrialRun run_trials_detailed(const ExperimentConfig& cfg, const RunOptions& run = {}) {
  if (cfg.kind != ExperimentKind::recover && cfg.kind != ExperimentKind::kron)
    throw invalid_argument("run_trials: kind must be recover or kron");
  const auto trials = cfg.integer("trials");
  if (trials < 1) throw invalid_argument("run_trials: trials must be >= 1");
  const std::uint64_t master = cfg.master_seed();
  const bool sparse = cfg.kind == ExperimentKind::recover;
  const Index n = cfg.integer("n");
  const Index m = sparse ? cfg.integer("m") : cfg.integer("k") * cfg.integer("l");
  const MeasurementMatrix shared = sample_matrix(n, m, trial_seed(master, 0));

  std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
  parallel_for(records.size(), run.threads, [&](std::size_t idx) {
    const auto i = static_cast<std::int64_t>(idx);
    const std::uint64_t ts = trial_seed(master, i);
    const MeasurementMatrix fresh = run.fresh_matrix ? sample_matrix(n, m, mix(ts, 2)) : shared;
    const MeasurementMatrix& a = run.fresh_matrix ? fresh : shared;
    try {
      TrialRecord rec;
      rec.trial = i;
      if (sparse) {
        const Vector x = embed(gen_sparse(m, cfg.integer("s"), mix(ts, 1)));
        DecodeOptions opt;
        opt.tol = cfg.real("tol");
        const auto out = l0_decode(a, apply(a, x), cfg.integer("s"), opt);
        rec.outcome = detail::classify(out, x, 1e-9);
        rec.residual = out.residual;
        rec.margin = out.margin;
      } else {
        const Index k = cfg.integer("k"), l = cfg.integer("l"), r = cfg.integer("r"), t = cfg.integer("t");
        const Vector x = embed(gen_kron(k, l, r, t, mix(ts, 1)));
        KronDecodeOptions opt;
        opt.tol = cfg.real("tol");
        opt.starts = static_cast<int>(cfg.integer("starts"));
        opt.seed = mix(ts, 3);
        const auto out = kron_decode(a, apply(a, x), k, l, r, t, opt);
        rec.outcome = detail::classify(out, x, 1e-6);
        rec.residual = out.residual;
        rec.margin = out.margin;
      }
      records[idx] = rec;
    } catch (const resource_limit& e) {
      throw resource_limit("trial " + std::to_string(i) + ": " + e.what());
    }
  });
  TrialRun out;
  out.stats = summarize(records);
  out.records = std::move(records);
  return out;
}

inline TrialStats run_trials(const ExperimentConfig& cfg, const RunOptions& run = {}) {
  return run_trials_detailed(cfg, run).stats;
}

// ---- CSV -----------------------------------------------------------------

/// Per-trial rows: trial, status, residual.
inline void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial,status,residual\n";
  for (const auto& r : records) out << r.trial << ',' << to_string(r.outcome) << ',' << format_double(r.residual) << '\n';
}

/// One summary row: (param, value, stat).
struct SummaryRow {
  std::string param;
  std::string value;
  std::string stat;
};

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "param,value,stat\n";
  for (const auto& r : rows) out << r.param << ',' << r.value << ',' << r.stat << '\n';
}

inline std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "param,value,stat")
    throw invalid_argument("summary CSV: expected header 'param,value,stat'");
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    SummaryRow r;
    if (!std::getline(ss, r.param, ',') || !std::getline(ss, r.value, ',') || !std::getline(ss, r.stat))
      throw invalid_argument("summary CSV: malformed row '" + line + "'");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<SummaryRow> summary_rows(const TrialStats& st) {
  return {{"trials", std::to_string(st.trials), "count"},
          {"unique_correct", std::to_string(st.unique_correct), "count"},
          {"unique_wrong", std::to_string(st.unique_wrong), "count"},
          {"ambiguous", std::to_string(st.ambiguous), "count"},
          {"no_solution", std::to_string(st.no_solution), "count"},
          {"empirical_error", format_double(st.empirical_error), "rate"},
          {"min_margin", format_double(st.min_margin), "min"}};
}

inline void emit_csv(std::ostream& out, const TrialStats& st) { write_summary_csv(out, summary_rows(st)); }

inline TrialStats read_trial_stats_csv(std::istream& in) {
  std::map<std::string, std::string> values;
  for (auto& r : read_summary_csv(in)) values[r.param] = r.value;
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = values.find(key);
    if (it == values.end()) throw invalid_argument("trial stats CSV: missing '" + key + "'");
    return it->second;
  };
  TrialStats st;
  st.trials = parse_int(get("trials"));
  st.unique_correct = parse_int(get("unique_correct"));
  st.unique_wrong = parse_int(get("unique_wrong"));
  st.ambiguous = parse_int(get("ambiguous"));
  st.no_solution = parse_int(get("no_solution"));
  st.empirical_error = parse_double(get("empirical_error"));
  st.min_margin = get("min_margin") == "inf" ? std::numeric_limits<double>::infinity() : parse_double(get("min_margin"));
  return st;
}

}  // namespace alc
