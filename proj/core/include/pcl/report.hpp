#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcl/random.hpp"

namespace pcl {

enum class Verdict { Verified, Falsified, DegenerateRetryExhausted };

std::string_view to_string(Verdict v);

/// Named serialized values (coordinates as "p/q" strings for exact data).
using Witness = std::vector<std::pair<std::string, std::string>>;

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool passed = true;
  double residual = 0.0;      // magnitude, for statistics
  std::string residual_text;  // exact value ("0", "p/q") or decimal string
  std::size_t resamples = 0;
  std::vector<std::pair<std::string, std::string>> notes;
};

struct VerificationReport {
  std::string theorem_id;
  std::size_t trials_requested = 0;
  std::size_t trials_completed = 0;
  Verdict verdict = Verdict::Verified;
  bool exact = true;
  double tolerance = 0.0;  // 0 for exact runs
  std::uint64_t seed = 0;
  std::vector<TrialResult> trials;
  std::optional<Witness> witness;
  std::vector<std::pair<std::string, std::string>> metadata;

  bool verified() const { return verdict == Verdict::Verified; }
  /// Largest residual over completed trials, as text.
  std::string max_residual_text() const;
  double max_residual() const;
  double mean_residual() const;
};

/// Outcome of one trial as produced by a theorem driver.
struct TrialOutcome {
  bool passed = true;
  double residual = 0.0;
  std::string residual_text;
  Witness witness;
  std::vector<std::pair<std::string, std::string>> notes;
};

/// Policy shared by every randomized driver: a trial that throws
/// GeometryError is resampled with a fresh stream, up to max_resamples;
/// the run stops at the first falsified trial.
struct TrialPolicy {
  std::size_t max_resamples = 100;
};

VerificationReport run_trials(const std::string& id, std::size_t trials, std::uint64_t seed,
                              bool exact, double tolerance,
                              const std::function<TrialOutcome(Rng&)>& trial,
                              const TrialPolicy& policy = {});

/// Outcome of a numeric residual against a tolerance.
TrialOutcome numeric_outcome(double residual, double tolerance);

}  // namespace pcl
