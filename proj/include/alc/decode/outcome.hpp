#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alc/error.hpp"
#include "alc/setgen.hpp"

namespace alc {

enum class DecodeStatus { unique, ambiguous, no_solution };

inline std::string to_string(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::unique: return "unique";
    case DecodeStatus::ambiguous: return "ambiguous";
    case DecodeStatus::no_solution: return "no_solution";
  }
  return "unknown";
}

inline DecodeStatus parse_status(const std::string& s) {
  if (s == "unique") return DecodeStatus::unique;
  if (s == "ambiguous") return DecodeStatus::ambiguous;
  if (s == "no_solution") return DecodeStatus::no_solution;
  throw invalid_argument("unknown decode status '" + s + "'");
}

/// An exact fit found by a decoder.
struct Candidate {
  std::vector<Index> support;  // support of the embedded vector, sorted
  Vector x;                    // embedded vector
  double residual = 0.0;
  int start = 0;               // multi-start index (0 for exhaustive search)
};

struct DecodeOptions {
  double tol = 1e-9;                 // exact fit: residual <= tol * max(1, ||y||)
  double zero_threshold = 1e-8;      // recovered entries below this disqualify a fit
  double distinct_threshold = 1e-6;  // embeddings closer than this are the same answer
  std::size_t max_candidates = 32;
};

/// What a decoder concluded from one measurement vector.
///
/// unique: exactly one distinct embedding fits; `estimate` holds it.
/// ambiguous: at least two distinct structurally valid embeddings fit.
/// no_solution: nothing fits (for the multi-start decoder this includes
/// local-minimum failures).
struct DecodeOutcome {
  DecodeStatus status = DecodeStatus::no_solution;
  Vector estimate;
  std::vector<Index> support;
  std::vector<Candidate> candidates;  // accepted fits, capped at max_candidates
  std::size_t candidate_count = 0;    // all accepted fits
  std::size_t distinct_count = 0;
  double residual = std::numeric_limits<double>::infinity();
  /// Smallest normalized residual among rejected fits; how close a wrong
  /// explanation came to being accepted.
  double margin = std::numeric_limits<double>::infinity();
  std::optional<KroneckerSignal> kron;  // normalized factors for a unique Kronecker fit
};

namespace detail {

inline std::vector<Index> support_of(const Vector& x) {
  std::vector<Index> s;
  for (Index i = 0; i < x.size(); ++i)
    if (x(i) != 0.0) s.push_back(i);
  return s;
}

/// Groups accepted candidates (already in canonical order) into distinct
/// embeddings and sets status / estimate accordingly.
inline void resolve(DecodeOutcome& out, std::vector<Candidate> accepted, const DecodeOptions& opt) {
  out.candidate_count = accepted.size();
  std::vector<const Candidate*> reps;
  for (const auto& c : accepted) {
    bool seen = false;
    for (const auto* r : reps)
      if ((r->x - c.x).norm() <= opt.distinct_threshold) {
        seen = true;
        break;
      }
    if (!seen) reps.push_back(&c);
  }
  out.distinct_count = reps.size();
  if (reps.empty()) {
    out.status = DecodeStatus::no_solution;
  } else if (reps.size() == 1) {
    out.status = DecodeStatus::unique;
    out.estimate = reps.front()->x;
    out.support = reps.front()->support;
    out.residual = reps.front()->residual;
  } else {
    out.status = DecodeStatus::ambiguous;
    for (const auto& c : accepted) out.residual = std::min(out.residual, c.residual);
  }
  if (accepted.size() > opt.max_candidates) accepted.resize(opt.max_candidates);
  out.candidates = std::move(accepted);
}

}  // namespace detail

inline nlohmann::json to_json(const DecodeOutcome& o) {
  std::vector<double> values;
  for (Index i : o.support) values.push_back(o.estimate(i));
  return {{"status", to_string(o.status)},
          {"residual", o.residual},
          {"support", o.support},
          {"values", values}};
}

}  // namespace alc
