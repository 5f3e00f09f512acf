#pragma once

#include <string>

#include "json.hpp"
#include "pcl/report.hpp"

namespace pcl::cli {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Run summary in the fixed report schema. Every number is a decimal string.
struct RunReport {
  std::string subcommand;
  ordered_json config = ordered_json::object();
  std::string verdict;
  ordered_json trials = ordered_json::array();
  std::string residual_max = "0";
  std::string residual_mean = "0";
  ordered_json witnesses = ordered_json::array();
  ordered_json details = ordered_json::object();
  double runtime_ms = 0.0;
  bool timing = true;

  ordered_json to_json() const;
};

std::string num(double x);

/// Fill verdict, trials, residual statistics and witness from a report.
void absorb(RunReport& out, const VerificationReport& r);

/// Per-trial records of a report.
ordered_json trials_json(const VerificationReport& r);

ordered_json witness_json(const Witness& w);
Witness witness_from_json(const ordered_json& j);

}  // namespace pcl::cli
