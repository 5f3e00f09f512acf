#include "pcl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pcl/errors.hpp"

namespace pcl {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Falsified: return "falsified";
    case Verdict::DegenerateRetryExhausted: return "degenerate-retry-exhausted";
  }
  return "unknown";
}

std::string VerificationReport::max_residual_text() const {
  if (trials.empty()) return exact ? "0" : format_double(0.0);
  auto it = std::max_element(trials.begin(), trials.end(), [](const auto& a, const auto& b) {
    return a.residual < b.residual;
  });
  return it->residual_text;
}

double VerificationReport::max_residual() const {
  double m = 0.0;
  for (const auto& t : trials) m = std::max(m, t.residual);
  return m;
}

double VerificationReport::mean_residual() const {
  if (trials.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : trials) s += t.residual;
  return s / static_cast<double>(trials.size());
}

TrialOutcome numeric_outcome(double residual, double tolerance) {
  TrialOutcome out;
  out.residual = residual;
  out.residual_text = format_double(residual);
  out.passed = std::isfinite(residual) && residual <= tolerance;
  return out;
}

VerificationReport run_trials(const std::string& id, std::size_t trials, std::uint64_t seed,
                              bool exact, double tolerance,
                              const std::function<TrialOutcome(Rng&)>& trial,
                              const TrialPolicy& policy) {
  VerificationReport report;
  report.theorem_id = id;
  report.trials_requested = trials;
  report.exact = exact;
  report.tolerance = exact ? 0.0 : tolerance;
  report.seed = seed;
  for (std::size_t t = 0; t < trials; ++t) {
    bool done = false;
    for (std::size_t attempt = 0; attempt <= policy.max_resamples && !done; ++attempt) {
      const std::uint64_t trial_seed = Rng::derive(Rng::derive(seed, t), attempt);
      Rng rng(trial_seed);
      TrialOutcome outcome;
      try {
        outcome = trial(rng);
      } catch (const GeometryError&) {
        continue;
      }
      done = true;
      TrialResult r;
      r.index = t;
      r.seed = trial_seed;
      r.passed = outcome.passed;
      r.residual = outcome.residual;
      r.residual_text = outcome.residual_text.empty() ? (exact ? "0" : format_double(outcome.residual))
                                                      : outcome.residual_text;
      r.resamples = attempt;
      r.notes = std::move(outcome.notes);
      report.trials.push_back(std::move(r));
      ++report.trials_completed;
      if (!outcome.passed) {
        report.verdict = Verdict::Falsified;
        report.witness = std::move(outcome.witness);
        return report;
      }
    }
    if (!done) {
      report.verdict = Verdict::DegenerateRetryExhausted;
      return report;
    }
  }
  report.verdict = Verdict::Verified;
  return report;
}

}  // namespace pcl
