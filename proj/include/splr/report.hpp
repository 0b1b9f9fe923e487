#pragma once

// Machine-readable run report. Serialized as one JSON document; parse(dump(r)) == r.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "splr/error.hpp"
#include "splr/solvers.hpp"

namespace splr {

using Json = nlohmann::ordered_json;

struct SolverDiagnostics {
  std::string algorithm;
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  double initial_step = 0.0;
  double final_step = 0.0;
  std::size_t trace_length = 0;
  double objective_first = 0.0;
  double objective_last = 0.0;
  double objective_min = 0.0;

  bool operator==(const SolverDiagnostics&) const = default;
};

struct PenaltyRecord {
  double tau = 0.0;
  double gamma = 0.0;
  std::string constraint = "none";

  bool operator==(const PenaltyRecord&) const = default;
};

struct RunReport {
  std::string command;
  std::vector<std::string> args;
  Json config = Json::object();
  Json metrics = Json::object();
  std::optional<SolverDiagnostics> solver;
  std::optional<PenaltyRecord> penalty;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> artifacts;

  bool operator==(const RunReport&) const = default;
};

/// JSON has no infinities; non-finite diagnostics are clamped to the largest double.
inline double finite_or_max(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? 0.0 : std::copysign(std::numeric_limits<double>::max(), v);
}

inline SolverDiagnostics diagnostics_of(const EstimateReport& r, Algorithm algorithm) {
  SolverDiagnostics d;
  d.algorithm = std::string(to_string(algorithm));
  d.iterations = r.iterations_run;
  d.converged = r.converged;
  d.final_residual = finite_or_max(r.final_residual);
  d.initial_step = r.initial_step;
  d.final_step = r.final_step;
  d.trace_length = r.objective_trace.size();
  if (!r.objective_trace.empty()) {
    d.objective_first = finite_or_max(r.objective_trace.front());
    d.objective_last = finite_or_max(r.objective_trace.back());
    double lo = r.objective_trace.front();
    for (double v : r.objective_trace) lo = std::min(lo, v);
    d.objective_min = finite_or_max(lo);
  }
  return d;
}

inline void to_json(Json& j, const SolverDiagnostics& d) {
  j = Json{{"algorithm", d.algorithm},           {"iterations", d.iterations},
           {"converged", d.converged},           {"final_residual", d.final_residual},
           {"initial_step", d.initial_step},     {"final_step", d.final_step},
           {"trace_length", d.trace_length},     {"objective_first", d.objective_first},
           {"objective_last", d.objective_last}, {"objective_min", d.objective_min}};
}

inline void from_json(const Json& j, SolverDiagnostics& d) {
  j.at("algorithm").get_to(d.algorithm);
  j.at("iterations").get_to(d.iterations);
  j.at("converged").get_to(d.converged);
  j.at("final_residual").get_to(d.final_residual);
  j.at("initial_step").get_to(d.initial_step);
  j.at("final_step").get_to(d.final_step);
  j.at("trace_length").get_to(d.trace_length);
  j.at("objective_first").get_to(d.objective_first);
  j.at("objective_last").get_to(d.objective_last);
  j.at("objective_min").get_to(d.objective_min);
}

inline void to_json(Json& j, const PenaltyRecord& p) {
  j = Json{{"tau", p.tau}, {"gamma", p.gamma}, {"constraint", p.constraint}};
}

inline void from_json(const Json& j, PenaltyRecord& p) {
  j.at("tau").get_to(p.tau);
  j.at("gamma").get_to(p.gamma);
  j.at("constraint").get_to(p.constraint);
}

inline void to_json(Json& j, const RunReport& r) {
  j = Json::object();
  j["command"] = r.command;
  j["args"] = r.args;
  j["config"] = r.config;
  j["metrics"] = r.metrics;
  j["solver"] = r.solver ? Json(*r.solver) : Json(nullptr);
  j["penalty"] = r.penalty ? Json(*r.penalty) : Json(nullptr);
  j["seed"] = r.seed;
  j["wall_clock_seconds"] = r.wall_clock_seconds;
  j["artifacts"] = r.artifacts;
}

inline void from_json(const Json& j, RunReport& r) {
  j.at("command").get_to(r.command);
  j.at("args").get_to(r.args);
  r.config = j.at("config");
  r.metrics = j.at("metrics");
  r.solver.reset();
  if (!j.at("solver").is_null()) r.solver = j.at("solver").get<SolverDiagnostics>();
  r.penalty.reset();
  if (!j.at("penalty").is_null()) r.penalty = j.at("penalty").get<PenaltyRecord>();
  j.at("seed").get_to(r.seed);
  j.at("wall_clock_seconds").get_to(r.wall_clock_seconds);
  j.at("artifacts").get_to(r.artifacts);
}

inline std::string dump_report(const RunReport& r) { return Json(r).dump(2); }

inline RunReport parse_report(const std::string& text) {
  try {
    return Json::parse(text).get<RunReport>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("<report>", 0, e.what());
  }
}

}  // namespace splr
