#pragma once

// Command-line front end. One subcommand per run; the JSON report goes to
// `out`, matrices go to files under --out-dir.
//
// Exit codes: 0 success, 1 usage error, 2 I/O or parse error, 3 numerical
// failure or solver non-convergence.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "splr/bounds.hpp"
#include "splr/experiments.hpp"
#include "splr/io.hpp"
#include "splr/report.hpp"

namespace splr::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kNumerical = 3 };

/// Set (non-empty, not "0") in test harnesses: every random command then needs --seed.
inline bool test_mode() {
  const char* v = std::getenv("SPLR_TEST_MODE");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

/// Comma-separated items; each is a number or "log:lo:hi:count" (geometric).
inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto body = std::string(io::detail::trim(item));
    if (body.empty()) throw InvalidArgument("empty item in grid '" + text + "'");
    if (body.rfind("log:", 0) == 0) {
      std::vector<std::string> parts;
      std::stringstream ps(body.substr(4));
      std::string p;
      while (std::getline(ps, p, ':')) parts.push_back(p);
      if (parts.size() != 3) throw InvalidArgument("log grid item must be log:lo:hi:count, got '" + body + "'");
      const double lo = io::detail::parse_double(parts[0], "grid", 0);
      const double hi = io::detail::parse_double(parts[1], "grid", 0);
      const double count = io::detail::parse_double(parts[2], "grid", 0);
      if (count != std::floor(count)) throw InvalidArgument("log grid count must be an integer");
      for (double v : log_grid(lo, hi, static_cast<int>(count))) out.push_back(v);
    } else {
      try {
        out.push_back(io::detail::parse_double(body, "grid", 0));
      } catch (const ParseError&) {
        throw InvalidArgument("bad grid value '" + body + "'");
      }
    }
  }
  if (out.empty()) throw InvalidArgument("grid '" + text + "' is empty");
  return out;
}

namespace detail {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

inline std::uint64_t resolve_seed(const Common& c, bool uses_randomness) {
  if (c.seed) return *c.seed;
  if (uses_randomness && test_mode()) throw InvalidArgument("--seed is required (SPLR_TEST_MODE is set)");
  if (!uses_randomness) return 0;
  return static_cast<std::uint64_t>(std::chrono::system_clock::now().time_since_epoch().count());
}

inline std::string artifact(const Common& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  return (std::filesystem::path(c.out_dir) / name).string();
}

inline Mat load_matrix(const std::string& path, const std::string& format) {
  if (format == "csv") return io::parse_dense_matrix(path, io::MatrixFormat::Csv);
  if (format == "mtx") return io::parse_dense_matrix(path, io::MatrixFormat::MatrixMarketArray);
  return io::parse_dense_matrix(path, io::format_from_path(path));
}

/// Graphs: .csv / .mtx / .mm are dense adjacency files, anything else an edge list.
inline Mat load_graph(const std::string& path, std::vector<std::string>& warnings) {
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".csv" || ext == ".mtx" || ext == ".mm") return load_matrix(path, "auto");
  auto edges = io::parse_edge_list(path);
  warnings.insert(warnings.end(), edges.warnings.begin(), edges.warnings.end());
  return std::move(edges.adjacency);
}

inline Json matrix_summary(const Mat& m) {
  return Json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"rank", numerical_rank(m)},
              {"nnz", sparsity_index(m)},
              {"trace_norm", norm(m, NormKind::Trace)},
              {"l1_norm", norm(m, NormKind::L1)},
              {"frobenius", norm(m, NormKind::Frobenius)}};
}

inline Json cv_json(const CvResult& cv, const CvGrid& grid, CvMetric metric) {
  return Json{{"metric", std::string(to_string(metric))},
              {"tau_values", grid.tau_values},
              {"gamma_values", grid.gamma_values},
              {"replicates", grid.replicates},
              {"best_tau", cv.best_tau},
              {"best_gamma", cv.best_gamma},
              {"best_score", cv.best_score},
              {"best_stderr", cv.surface_stderr(cv.best_tau_index, cv.best_gamma_index)}};
}

struct SolverFlags {
  std::string algorithm = "ipd";
  std::optional<double> theta;
  int max_iters = 5000;
  double tol = 1e-8;
  std::string order = "cyclic";
  std::string schedule = "constant";

  void add_to(CLI::App* app) {
    app->add_option("--algorithm", algorithm, "Solver")->check(CLI::IsMember({"gfb", "ipd"}))->capture_default_str();
    app->add_option("--theta", theta, "Step size (default: solver-specific fraction of 2/L)");
    app->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--tol", tol, "Fixed-point tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--order", order, "IPD prox order")->check(CLI::IsMember({"cyclic", "random"}))->capture_default_str();
    app->add_option("--schedule", schedule, "Step schedule")
        ->check(CLI::IsMember({"constant", "continuation"}))
        ->capture_default_str();
  }

  SolverConfig config(std::uint64_t seed) const {
    SolverConfig c;
    c.algorithm = algorithm == "gfb" ? Algorithm::GFB : Algorithm::IPD;
    c.step_theta = theta;
    c.max_iters = max_iters;
    c.fp_tolerance = tol;
    c.cycle_order = order == "random" ? CycleOrder::Randomized : CycleOrder::Cyclic;
    c.schedule = schedule == "continuation" ? StepSchedule::Continuation : StepSchedule::Constant;
    c.seed = seed;
    return c;
  }

  Json to_json() const {
    return Json{{"algorithm", algorithm},
                {"theta", theta ? Json(*theta) : Json(nullptr)},
                {"max_iters", max_iters},
                {"tol", tol},
                {"order", order},
                {"schedule", schedule}};
  }
};

inline ConstraintSet parse_constraint(const std::string& s) {
  return s == "psd" ? ConstraintSet::PsdCone : ConstraintSet::Unconstrained;
}

inline LinkMethod parse_method(const std::string& s) {
  if (s == "splr") return LinkMethod::SPLR;
  if (s == "lr") return LinkMethod::LR;
  if (s == "sp") return LinkMethod::SP;
  if (s == "nn") return LinkMethod::NN;
  return LinkMethod::Katz;
}

}  // namespace detail

/// Parses and runs one command. Never throws; all failures map to an exit code
/// with a diagnostic on `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse and low-rank matrix estimation"};
  app.name("splr");
  app.require_subcommand(1);
  app.fallthrough();

  detail::Common common;
  app.add_option("--seed", common.seed, "Seed for every random choice");
  app.add_option("--out-dir", common.out_dir, "Directory for matrix outputs")->capture_default_str();

  RunReport report;
  bool nonconverged = false;
  // Each subcommand installs its action here; it runs after parsing succeeds.
  std::function<void()> action;

  // estimate ---------------------------------------------------------------
  struct {
    std::string input, format = "auto", loss = "frobenius", mask, constraint = "none", output = "estimate.csv", truth;
    double tau = 0.0, gamma = 0.0;
    detail::SolverFlags solver;
  } est;
  auto* estimate = app.add_subcommand("estimate", "Penalized estimate of one matrix");
  estimate->add_option("input", est.input, "Observed matrix (CSV or MatrixMarket array)")->required();
  estimate->add_option("--format", est.format, "Input format")->check(CLI::IsMember({"auto", "csv", "mtx"}))->capture_default_str();
  estimate->add_option("--loss", est.loss, "Data-fit term")->check(CLI::IsMember({"frobenius", "hinge"}))->capture_default_str();
  estimate->add_option("--mask", est.mask, "Observed-entry mask for the hinge loss (0/1 matrix)");
  estimate->add_option("--tau", est.tau, "Trace-norm weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  estimate->add_option("--gamma", est.gamma, "l1 weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  estimate->add_option("--constraint", est.constraint, "Feasible set")->check(CLI::IsMember({"none", "psd"}))->capture_default_str();
  estimate->add_option("--output", est.output, "Estimate file name under --out-dir")->capture_default_str();
  estimate->add_option("--truth", est.truth, "Ground truth for normalized RMSE");
  est.solver.add_to(estimate);
  estimate->callback([&] {
    action = [&] {
      if (!est.mask.empty() && est.loss != "hinge") throw InvalidArgument("--mask only applies to --loss hinge");
      const std::uint64_t seed = detail::resolve_seed(common, est.solver.order == "random");
      const Mat a = detail::load_matrix(est.input, est.format);
      Mask mask = Mask::Constant(a.rows(), a.cols(), true);
      if (!est.mask.empty()) {
        const Mat m = detail::load_matrix(est.mask, "auto");
        if (!is_binary(m)) throw InvalidArgument("--mask must contain only 0 and 1");
        require_same_shape(a, m, "--mask");
        mask = m.array() != 0.0;
      }
      const LossSpec spec = est.loss == "hinge" ? LossSpec::smoothed_hinge(a, mask) : LossSpec::squared_frobenius(a);
      const Penalty pen{est.tau, est.gamma, detail::parse_constraint(est.constraint)};
      const SolverConfig cfg = est.solver.config(seed);
      const EstimateReport r = solve(spec, pen, cfg);

      const auto path = detail::artifact(common, est.output);
      io::write_dense_matrix(path, r.solution);
      report.artifacts.push_back(path);
      report.seed = seed;
      report.config = Json{{"input", est.input}, {"loss", est.loss}, {"solver", est.solver.to_json()}};
      report.penalty = PenaltyRecord{est.tau, est.gamma, est.constraint};
      report.solver = diagnostics_of(r, cfg.algorithm);
      report.metrics = Json{{"objective", finite_or_max(objective(spec, r.solution, pen))},
                            {"estimate", detail::matrix_summary(r.solution)}};
      if (!est.truth.empty()) {
        const Mat truth = detail::load_matrix(est.truth, "auto");
        report.metrics["normalized_rmse"] = normalized_rmse(r.solution, truth);
      }
      nonconverged = !r.converged;
    };
  });

  // synth-cov --------------------------------------------------------------
  BlockCovSpec cov;
  std::string cov_prefix = "cov";
  auto* synth_cov = app.add_subcommand("synth-cov", "Block-diagonal covariance and its noisy empirical estimate");
  synth_cov->add_option("--n", cov.n, "Dimension")->check(CLI::PositiveNumber)->capture_default_str();
  synth_cov->add_option("--r", cov.r_blocks, "Number of blocks")->check(CLI::PositiveNumber)->capture_default_str();
  synth_cov->add_option("--samples", cov.n_samples, "Samples N")->check(CLI::PositiveNumber)->capture_default_str();
  synth_cov->add_option("--sigma", cov.noise_sigma, "Entrywise noise std")->check(CLI::NonNegativeNumber)->capture_default_str();
  synth_cov->add_option("--prefix", cov_prefix, "Output file prefix")->capture_default_str();
  synth_cov->callback([&] {
    action = [&] {
      cov.seed = detail::resolve_seed(common, true);
      const SynthInstance inst = gen_block_covariance(cov);
      for (const auto& [suffix, m] : {std::pair<std::string, const Mat*>{"_truth.csv", &inst.truth},
                                      std::pair<std::string, const Mat*>{"_observation.csv", &inst.observation}}) {
        const auto path = detail::artifact(common, cov_prefix + suffix);
        io::write_dense_matrix(path, *m);
        report.artifacts.push_back(path);
      }
      report.seed = cov.seed;
      report.config = Json{{"n", cov.n}, {"r", cov.r_blocks}, {"samples", cov.n_samples}, {"sigma", cov.noise_sigma}};
      report.metrics = Json{{"block_bounds", inst.block_bounds},
                            {"truth_rank", numerical_rank(inst.truth)},
                            {"observation_rmse", normalized_rmse(inst.observation, inst.truth)}};
    };
  });

  // synth-graph ------------------------------------------------------------
  Index graph_n = 100, graph_r = 5;
  std::string graph_prefix = "graph";
  auto* synth_graph = app.add_subcommand("synth-graph", "Union of cliques on random consecutive blocks");
  synth_graph->add_option("--n", graph_n, "Nodes")->check(CLI::PositiveNumber)->capture_default_str();
  synth_graph->add_option("--r", graph_r, "Number of cliques")->check(CLI::PositiveNumber)->capture_default_str();
  synth_graph->add_option("--prefix", graph_prefix, "Output file prefix")->capture_default_str();
  synth_graph->callback([&] {
    action = [&] {
      const std::uint64_t seed = detail::resolve_seed(common, true);
      const SynthInstance inst = gen_block_graph(graph_n, graph_r, seed);
      const auto csv = detail::artifact(common, graph_prefix + ".csv");
      io::write_dense_matrix(csv, inst.truth);
      const auto edges = detail::artifact(common, graph_prefix + ".edges");
      {
        auto f = io::detail::open_output(edges);
        io::write_edge_list(f, inst.truth);
        if (!f) throw IoError("failed writing '" + edges + "'");
      }
      report.artifacts = {csv, edges};
      report.seed = seed;
      report.config = Json{{"n", graph_n}, {"r", graph_r}};
      report.metrics = Json{{"block_bounds", inst.block_bounds}, {"edges", sparsity_index(inst.truth) / 2}};
    };
  });

  // corrupt ----------------------------------------------------------------
  struct {
    std::string input, mode = "flip", output = "corrupted.csv";
    double fraction = 0.1, eta = 0.0;
    bool eta_given = false;
  } cor;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Corrupt a symmetric matrix or graph");
  corrupt_cmd->add_option("input", cor.input, "Matrix (CSV/MatrixMarket) or edge list")->required();
  corrupt_cmd->add_option("--mode", cor.mode, "flip: toggle edges; uniform: add U[0, eta]")
      ->check(CLI::IsMember({"flip", "uniform"}))
      ->capture_default_str();
  corrupt_cmd->add_option("--fraction", cor.fraction, "Fraction of node pairs")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  auto* eta_opt = corrupt_cmd->add_option("--eta", cor.eta, "Amplitude for uniform mode")->check(CLI::NonNegativeNumber);
  corrupt_cmd->add_option("--output", cor.output, "Output file name under --out-dir")->capture_default_str();
  corrupt_cmd->callback([&] {
    action = [&] {
      if (cor.mode == "flip" && eta_opt->count() > 0) throw InvalidArgument("--eta only applies to --mode uniform");
      if (cor.mode == "uniform" && eta_opt->count() == 0) throw InvalidArgument("--mode uniform needs --eta");
      const std::uint64_t seed = detail::resolve_seed(common, true);
      std::vector<std::string> warnings;
      SynthInstance inst;
      inst.observation = detail::load_graph(cor.input, warnings);
      inst.truth = inst.observation;
      GraphNoiseSpec noise;
      noise.mode = cor.mode == "flip" ? GraphNoiseSpec::Mode::EdgeFlip : GraphNoiseSpec::Mode::UniformEntry;
      noise.fraction = cor.fraction;
      noise.eta = cor.eta;
      noise.seed = seed;
      const SynthInstance outi = corrupt(inst, noise);
      const auto path = detail::artifact(common, cor.output);
      io::write_dense_matrix(path, outi.observation);
      report.artifacts.push_back(path);
      report.seed = seed;
      report.config = Json{{"input", cor.input}, {"mode", cor.mode}, {"fraction", cor.fraction}, {"eta", cor.eta}};
      report.metrics = Json{{"corrupted_pairs", outi.corrupted.size()}, {"warnings", warnings}};
    };
  });

  // linkpred ---------------------------------------------------------------
  struct {
    std::string input, method = "splr", truth, output = "scores.csv";
    std::string tau_grid = "log:1:16:5", gamma_grid = "0,0.0125,0.025,0.05,0.1";
    double holdout = 0.1;
    int replicates = 5;
    KatzParams katz;
    detail::SolverFlags solver;
  } lp;
  auto* linkpred = app.add_subcommand("linkpred", "Score node pairs of a graph");
  linkpred->add_option("input", lp.input, "Graph: edge list, or dense CSV/MatrixMarket adjacency")->required();
  linkpred->add_option("--method", lp.method, "Scoring method")
      ->check(CLI::IsMember({"splr", "lr", "sp", "nn", "katz"}))
      ->capture_default_str();
  linkpred->add_option("--holdout", lp.holdout, "Held-out pair fraction for weight selection")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  linkpred->add_option("--tau-grid", lp.tau_grid, "Trace-norm weights")->capture_default_str();
  linkpred->add_option("--gamma-grid", lp.gamma_grid, "l1 weights")->capture_default_str();
  linkpred->add_option("--replicates", lp.replicates, "Holdout draws per cell")->check(CLI::PositiveNumber)->capture_default_str();
  linkpred->add_option("--katz-beta", lp.katz.beta, "Katz decay")->check(CLI::PositiveNumber)->capture_default_str();
  linkpred->add_option("--katz-k", lp.katz.max_path_length, "Katz truncation length")->check(CLI::PositiveNumber)->capture_default_str();
  linkpred->add_flag("--katz-closed-form", lp.katz.closed_form, "Exact resolvent instead of truncation");
  linkpred->add_option("--truth", lp.truth, "Clean graph for AUC over all pairs");
  linkpred->add_option("--output", lp.output, "Score file name under --out-dir")->capture_default_str();
  lp.solver.tol = 1e-6;
  lp.solver.add_to(linkpred);
  linkpred->callback([&] {
    action = [&] {
      const LinkMethod method = detail::parse_method(lp.method);
      const std::uint64_t seed = detail::resolve_seed(common, true);
      std::vector<std::string> warnings;
      const Mat a = detail::load_graph(lp.input, warnings);
      LinkPredConfig cfg;
      cfg.holdout = lp.holdout;
      cfg.solver = lp.solver.config(seed);
      cfg.katz = lp.katz;
      const CvGrid grid{parse_grid(lp.tau_grid), parse_grid(lp.gamma_grid), lp.replicates, seed};
      const LinkPredResult res = run_link_prediction(a, method, grid, cfg);

      const auto path = detail::artifact(common, lp.output);
      io::write_dense_matrix(path, res.scores);
      report.artifacts.push_back(path);
      report.seed = seed;
      report.config = Json{{"input", lp.input},
                           {"method", lp.method},
                           {"holdout", lp.holdout},
                           {"katz", Json{{"beta", lp.katz.beta},
                                         {"max_path_length", lp.katz.max_path_length},
                                         {"closed_form", lp.katz.closed_form}}},
                           {"solver", lp.solver.to_json()}};
      report.metrics = Json{{"warnings", warnings}};
      if (res.cv) {
        report.penalty = PenaltyRecord{res.tau, res.gamma, "none"};
        report.metrics["cv"] = detail::cv_json(*res.cv, method_grid(grid, method), CvMetric::AUC);
      }
      if (!lp.truth.empty()) {
        std::vector<std::string> ignored;
        const Mat truth = detail::load_graph(lp.truth, ignored);
        require_same_shape(res.scores, truth, "--truth");
        report.metrics["auc"] = denoising_auc(res.scores, truth);
      }
    };
  });

  // cv ---------------------------------------------------------------------
  struct {
    std::string tau_grid, gamma_grid, metric = "rmse", input, constraint = "psd";
    int replicates = 10;
    double holdout = 0.1;
    detail::SolverFlags solver;
  } cvf;
  auto* cv = app.add_subcommand("cv", "Grid search over (tau, gamma)");
  cv->add_option("--tau-grid", cvf.tau_grid, "Comma list; items may be log:lo:hi:count")->required();
  cv->add_option("--gamma-grid", cvf.gamma_grid, "Comma list; items may be log:lo:hi:count")->required();
  cv->add_option("--replicates", cvf.replicates, "Replicates per cell")->check(CLI::PositiveNumber)->capture_default_str();
  cv->add_option("--metric", cvf.metric, "rmse: synthetic covariance study; auc: link prediction")
      ->check(CLI::IsMember({"rmse", "auc"}))
      ->capture_default_str();
  auto* cv_input = cv->add_option("--input", cvf.input, "Graph for --metric auc (holdout CV)");
  cv->add_option("--holdout", cvf.holdout, "Held-out pair fraction for --metric auc")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cv->add_option("--constraint", cvf.constraint, "Feasible set for --metric rmse")
      ->check(CLI::IsMember({"none", "psd"}))
      ->capture_default_str();
  cv->add_option("--n", cov.n, "Covariance dimension")->check(CLI::PositiveNumber)->capture_default_str();
  cv->add_option("--r", cov.r_blocks, "Covariance blocks")->check(CLI::PositiveNumber)->capture_default_str();
  cv->add_option("--samples", cov.n_samples, "Covariance samples N")->check(CLI::PositiveNumber)->capture_default_str();
  cv->add_option("--sigma", cov.noise_sigma, "Covariance noise std")->check(CLI::NonNegativeNumber)->capture_default_str();
  cvf.solver.add_to(cv);
  cv->callback([&] {
    action = [&] {
      if (cvf.metric == "auc" && cv_input->count() == 0) throw InvalidArgument("--metric auc needs --input");
      if (cvf.metric == "rmse" && cv_input->count() > 0) throw InvalidArgument("--input only applies to --metric auc");
      const std::uint64_t seed = detail::resolve_seed(common, true);
      const CvGrid grid{parse_grid(cvf.tau_grid), parse_grid(cvf.gamma_grid), cvf.replicates, seed};
      CvResult res;
      const CvMetric metric = cvf.metric == "auc" ? CvMetric::AUC : CvMetric::RMSE;
      if (metric == CvMetric::RMSE) {
        CovarianceExperiment exp;
        exp.data = cov;
        exp.constraint = detail::parse_constraint(cvf.constraint);
        exp.solver = cvf.solver.config(seed);
        res = covariance_cv(exp, grid);
        report.config = Json{{"n", cov.n}, {"r", cov.r_blocks}, {"samples", cov.n_samples}, {"sigma", cov.noise_sigma},
                             {"constraint", cvf.constraint}};
      } else {
        std::vector<std::string> warnings;
        const Mat a = detail::load_graph(cvf.input, warnings);
        LinkPredConfig cfg;
        cfg.holdout = cvf.holdout;
        cfg.solver = cvf.solver.config(seed);
        res = linkpred_cv(a, grid, cfg);
        report.config = Json{{"input", cvf.input}, {"holdout", cvf.holdout}};
      }
      report.config["solver"] = cvf.solver.to_json();
      const auto surface = detail::artifact(common, "cv_surface.csv");
      const auto stderr_path = detail::artifact(common, "cv_stderr.csv");
      io::write_dense_matrix(surface, res.surface);
      io::write_dense_matrix(stderr_path, res.surface_stderr);
      report.artifacts = {surface, stderr_path};
      report.seed = seed;
      report.penalty = PenaltyRecord{res.best_tau, res.best_gamma, metric == CvMetric::RMSE ? cvf.constraint : "none"};
      report.metrics = Json{{"cv", detail::cv_json(res, grid, metric)}};
    };
  });

  // bounds -----------------------------------------------------------------
  struct {
    double n = 0, r = 1, s = 0, edges = 1, delta = 0.05, empirical = 0.0, beta = 0.5, alpha = 0.5, tau = 0, gamma = 0;
    bool prop2 = false;
    std::string n_grid = "20,40,80,160,320", s0;
  } bf;
  auto* bounds = app.add_subcommand("bounds", "Generalization and oracle bounds");
  auto* n_opt = bounds->add_option("--n", bf.n, "Dimension");
  auto* r_opt = bounds->add_option("--r", bf.r, "Rank budget");
  auto* s_opt = bounds->add_option("--s", bf.s, "Sparsity budget (adds the sparse low-rank bound)");
  auto* e_opt = bounds->add_option("--edges", bf.edges, "Observed entries |E|");
  auto* d_opt = bounds->add_option("--delta", bf.delta, "Confidence parameter");
  auto* l_opt = bounds->add_option("--empirical-loss", bf.empirical, "Empirical zero-one loss");
  auto* p_opt = bounds->add_flag("--prop2", bf.prop2, "Log-ratio of the two counting bounds over --n-grid");
  auto* b_opt = bounds->add_option("--beta", bf.beta, "r_n = round(beta n)")->capture_default_str();
  auto* a_opt = bounds->add_option("--alpha", bf.alpha, "s_n = round(alpha n)")->capture_default_str();
  auto* g_opt = bounds->add_option("--n-grid", bf.n_grid, "Increasing dimensions")->capture_default_str();
  auto* s0_opt = bounds->add_option("--s0", bf.s0, "Target matrix for the oracle bound");
  auto* t_opt = bounds->add_option("--tau", bf.tau, "Oracle bound trace weight")->check(CLI::NonNegativeNumber);
  auto* gm_opt = bounds->add_option("--gamma", bf.gamma, "Oracle bound l1 weight")->check(CLI::NonNegativeNumber);
  for (auto* o : {n_opt, r_opt, s_opt, e_opt, d_opt, l_opt, s0_opt, t_opt, gm_opt}) o->excludes(p_opt);
  for (auto* o : {b_opt, a_opt, g_opt}) o->needs(p_opt);
  for (auto* o : {t_opt, gm_opt}) o->needs(s0_opt);
  bounds->callback([&] {
    action = [&] {
      report.seed = 0;
      if (bf.prop2) {
        const std::vector<double> grid = parse_grid(bf.n_grid);
        const std::vector<double> diff = prop2_divergence_check(bf.beta, bf.alpha, grid);
        bool increasing = true;
        for (std::size_t i = 1; i < diff.size(); ++i) increasing = increasing && diff[i] > diff[i - 1];
        report.config = Json{{"beta", bf.beta}, {"alpha", bf.alpha}, {"n_grid", grid}};
        report.metrics = Json{{"log_ratio", diff}, {"strictly_increasing", increasing}};
        return;
      }
      report.metrics = Json::object();
      if (s0_opt->count() > 0) {
        const Mat s0 = detail::load_matrix(bf.s0, "auto");
        report.config["s0"] = bf.s0;
        report.penalty = PenaltyRecord{bf.tau, bf.gamma, "none"};
        report.metrics["oracle_bound"] = oracle_bound(s0, bf.tau, bf.gamma);
        if (n_opt->count() == 0) return;
      }
      if (n_opt->count() == 0) throw InvalidArgument("bounds needs --n (or --prop2, or --s0)");
      BoundInputs in;
      in.n = bf.n;
      in.r = bf.r;
      in.s = s_opt->count() > 0 ? bf.s : 1;
      in.e_count = bf.edges;
      in.delta = bf.delta;
      in.empirical_loss = bf.empirical;
      report.config.update(Json{{"n", in.n}, {"r", in.r}, {"edges", in.e_count}, {"delta", in.delta},
                                {"empirical_loss", in.empirical_loss}});
      report.metrics["log_delta"] = log_delta(in.n, in.r);
      report.metrics["bound_lowrank"] = gen_bound_lowrank(in);
      if (s_opt->count() > 0) {
        report.config["s"] = in.s;
        report.metrics["log_gamma"] = log_gamma_count(in.n, in.r, in.s);
        report.metrics["bound_sparse_lowrank"] = gen_bound_sparse_lowrank(in);
      }
    };
  });

  for (int i = 0; i < argc; ++i) report.args.emplace_back(argv[i]);
  if (!report.args.empty()) report.args.erase(report.args.begin());

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "splr: " << e.what() << '\n';
    return kUsage;
  }

  for (auto* sub : app.get_subcommands()) report.command = sub->get_name();
  const auto started = std::chrono::steady_clock::now();
  try {
    action();
  } catch (const IoError& e) {
    err << "splr " << report.command << ": " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "splr " << report.command << ": " << e.what() << '\n';
    return kIo;
  } catch (const InvalidArgument& e) {
    err << "splr " << report.command << ": " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "splr " << report.command << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "splr " << report.command << ": " << e.what() << '\n';
    return kNumerical;
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out << dump_report(report) << '\n';
  if (nonconverged) {
    err << "splr " << report.command << ": solver did not reach the fixed-point tolerance\n";
    return kNumerical;
  }
  return kOk;
}

/// Convenience overload for tests: args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"splr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace splr::cli
