#include "json_report.hpp"

#include <cstdio>
#include <cstdlib>

#include "pcl/errors.hpp"
#include "pcl/scalar.hpp"

namespace pcl::cli {

std::string num(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

ordered_json RunReport::to_json() const {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["verdict"] = verdict;
  j["trials"] = trials;
  j["residual_stats"] = {{"max", residual_max}, {"mean", residual_mean}};
  j["witnesses"] = witnesses;
  if (!details.empty()) j["details"] = details;
  j["runtime_ms"] = timing ? num(runtime_ms) : std::string("0");
  return j;
}

ordered_json trials_json(const VerificationReport& r) {
  ordered_json a = ordered_json::array();
  for (const auto& t : r.trials) {
    ordered_json e;
    e["index"] = std::to_string(t.index);
    e["seed"] = std::to_string(t.seed);
    e["passed"] = t.passed ? "true" : "false";
    e["residual"] = t.residual_text.empty() ? num(t.residual) : t.residual_text;
    e["resamples"] = std::to_string(t.resamples);
    if (!t.notes.empty()) {
      ordered_json notes = ordered_json::object();
      for (const auto& [k, v] : t.notes) notes[k] = v;
      e["notes"] = notes;
    }
    a.push_back(std::move(e));
  }
  return a;
}

ordered_json witness_json(const Witness& w) {
  ordered_json values = ordered_json::object();
  for (const auto& [k, v] : w) values[k] = v;
  return values;
}

Witness witness_from_json(const ordered_json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, "witness must be an object of name: value strings");
  Witness w;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) fail(ErrorKind::InvalidArgument, "witness value '" + k + "' is not a string");
    w.emplace_back(k, v.get<std::string>());
  }
  return w;
}

void absorb(RunReport& out, const VerificationReport& r) {
  out.verdict = std::string(to_string(r.verdict));
  out.trials = trials_json(r);
  out.residual_max = r.trials.empty() ? "0" : r.max_residual_text();
  out.residual_mean = num(r.mean_residual());
  if (!r.verified() && r.witness) {
    ordered_json w;
    w["trial"] = std::to_string(r.trials.empty() ? 0 : r.trials.back().index);
    w["values"] = witness_json(*r.witness);
    out.witnesses.push_back(std::move(w));
  }
  for (const auto& [k, v] : r.metadata) out.details[k] = v;
}

}  // namespace pcl::cli
