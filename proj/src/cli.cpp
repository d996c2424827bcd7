#include "gsynth/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gsynth/dynamics.hpp"
#include "gsynth/io.hpp"
#include "gsynth/noise.hpp"
#include "gsynth/structure.hpp"
#include "gsynth/synthesis.hpp"

namespace gsynth::cli {

namespace {

using io::json;

struct Common {
  double tol = kDefaultTol;
  unsigned seed = 0;
  std::string format = "json";
  std::string output;
};

struct LoadedState {
  std::string digest;
  std::optional<CovarianceMatrix> covariance;
  std::optional<GraphMatrix> graph;   // set when the state is pure
};

/// Raised inside commands to leave with a specific exit code after the
/// report has been written.
struct ExitWith {
  int code;
};

json certificate_json(const BlockDecomposition& dec) {
  json blocks = json::array();
  for (const auto& b : dec.blocks)
    blocks.push_back(json{{"kind", to_string(b.kind)},
                          {"modes", b.modes},
                          {"entries", io::complex_to_json(b.entries)}});
  json components = json::array();
  for (const auto& c : dec.components) components.push_back(c);
  return json{{"feasible", dec.certificate.feasible},
              {"reason", dec.certificate.reason},
              {"components", components},
              {"permutation", std::vector<std::size_t>(dec.permutation.image().begin(),
                                                       dec.permutation.image().end())},
              {"blocks", blocks}};
}

json constraints_json(const ConstraintReport& c) {
  return json{{"passive_diagonal_hamiltonian", c.passive_diagonal},
              {"single_channel", c.single_channel},
              {"rank_condition", c.rank_condition},
              {"krylov_rank", c.krylov_rank},
              {"violations", c.violations}};
}

json generation_json(const GenerationReport& g) {
  json out{{"hurwitz", g.hurwitz},
           {"spectral_abscissa", g.spectral_abscissa},
           {"generated", g.generated()},
           {"tolerance", g.tolerance},
           {"constraints", constraints_json(g.constraints)}};
  if (g.hurwitz) {
    out["lyapunov_residual"] = g.lyapunov_residual;
    if (std::isfinite(g.max_error)) out["steady_state_error"] = g.max_error;
    out["purity"] = g.purity;
    out["steady_state"] = io::real_to_json(g.steady);
  }
  return out;
}

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << "," << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const json& report, const Common& common, std::ostream& out) {
  std::ostringstream text;
  if (common.format == "csv") {
    text << "key,value\n";
    flatten(report, "", text);
  } else {
    text << report.dump(2) << "\n";
  }
  out << text.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Parse, "cannot write " + path);
  f << content;
}

LoadedState load_state(const std::string& path, const Common& common) {
  const std::string text = io::read_text(path);
  const io::MatrixFile file = io::parse_matrix_file(text, common.tol);
  LoadedState s;
  s.digest = io::digest(text);
  if (file.kind == io::MatrixKind::Graph) {
    s.graph.emplace(file.graph, common.tol);
    s.covariance.emplace(graph_to_covariance(*s.graph));
  } else {
    s.covariance.emplace(file.covariance, common.tol);
    if (!s.covariance->is_physical(common.tol * std::max(1.0, max_norm(file.covariance))))
      throw Error(ErrorKind::Parse, "line 1: covariance violates the uncertainty relation");
    if (s.covariance->is_pure(common.tol)) s.graph.emplace(factor_covariance(*s.covariance, common.tol));
  }
  return s;
}

json pairwise_negativities(const CovarianceMatrix& v) {
  json out = json::array();
  for (std::size_t a = 0; a < v.modes(); ++a)
    for (std::size_t b = a + 1; b < v.modes(); ++b)
      out.push_back(json{{"modes", {a, b}},
                         {"log_negativity", log_negativity(reduced_state(v, {a, b}))}});
  return out;
}

int cmd_analyze(const std::string& path, const Common& common, std::ostream& out) {
  const LoadedState s = load_state(path, common);
  const CovarianceMatrix& v = *s.covariance;
  json report{{"command", "analyze"},
              {"input_digest", s.digest},
              {"modes", v.modes()},
              {"purity", purity(v)},
              {"pure", s.graph.has_value()},
              {"uncertainty_margin", v.uncertainty_margin()}};
  if (s.graph) {
    report["graph"] = json{{"X", io::real_to_json(s.graph->x())},
                           {"Y", io::real_to_json(s.graph->y())}};
  }
  if (v.modes() == 2) report["log_negativity"] = log_negativity(v);
  if (v.modes() >= 2) report["pairwise_log_negativity"] = pairwise_negativities(v);
  emit(report, common, out);
  return kOk;
}

int cmd_feasible(const std::string& path, const Common& common, std::ostream& out) {
  const LoadedState s = load_state(path, common);
  json report{{"command", "feasible"}, {"input_digest", s.digest}};
  if (!s.graph) {
    report["pure"] = false;
    report["purity"] = purity(*s.covariance);
    emit(report, common, out);
    return kImpure;
  }
  const BlockDecomposition dec = decompose(*s.graph, common.tol);
  report["pure"] = true;
  report["certificate"] = certificate_json(dec);
  emit(report, common, out);
  return dec.certificate.feasible ? kOk : kInfeasible;
}

int cmd_synthesize(const std::string& path, const std::string& realization_out,
                   const Common& common, std::ostream& out) {
  const LoadedState s = load_state(path, common);
  json report{{"command", "synthesize"}, {"input_digest", s.digest}};
  if (!s.graph) {
    report["pure"] = false;
    report["purity"] = purity(*s.covariance);
    emit(report, common, out);
    return kImpure;
  }
  const BlockDecomposition dec = decompose(*s.graph, common.tol);
  report["certificate"] = certificate_json(dec);
  if (!dec.certificate.feasible) {
    emit(report, common, out);
    return kInfeasible;
  }
  const Realization r = synthesize(*s.graph, SynthesisOptions{common.tol, common.seed});
  const json file = io::realization_file(r);
  report["realization"] = file;
  report["frequencies"] = std::vector<double>(r.R.diagonal().data(),
                                              r.R.diagonal().data() + r.R.rows());
  const GenerationReport gen = verify_generation(r, *s.covariance, kGenerationTol, common.tol);
  report["verification"] = generation_json(gen);
  if (!realization_out.empty()) write_file(realization_out, file.dump(2) + "\n");
  emit(report, common, out);
  return gen.generated() ? kOk : (gen.hurwitz ? kNotGenerated : kUnstable);
}

int cmd_verify(const std::string& path, const std::string& target_path, const Common& common,
               std::ostream& out) {
  const std::string text = io::read_text(path);
  const io::RealizationFile file = io::parse_realization_file(text, common.tol);
  const Realization& r = file.realization;
  std::optional<CovarianceMatrix> target;
  if (!target_path.empty()) {
    target = load_state(target_path, common).covariance;
  } else {
    target = graph_to_covariance(r.graph);
  }
  const GenerationReport gen = verify_generation(r, *target, kGenerationTol, common.tol);
  json report{{"command", "verify"},
              {"input_digest", io::digest(text)},
              {"modes", r.modes()},
              {"channels", r.channels()},
              {"verification", generation_json(gen)}};
  emit(report, common, out);
  if (!gen.hurwitz) return kUnstable;
  return gen.generated() ? kOk : kNotGenerated;
}

struct SimulateArgs {
  std::string realization;
  std::string v0;
  double t_end = 50.0;
  std::size_t samples = 51;
  bool allow_unstable = false;
  bool rk4 = false;
  double gamma = 0.0;
  double nbar = 0.0;
};

int cmd_simulate(const SimulateArgs& a, const Common& common, std::ostream& out) {
  const io::RealizationFile file =
      io::parse_realization_file(io::read_text(a.realization), common.tol);
  std::vector<NoiseChannel> noise = file.noise;
  if (a.gamma > 0.0) {
    auto extra = thermal_baths(file.realization.modes(), a.gamma, a.nbar);
    noise.insert(noise.end(), extra.begin(), extra.end());
  }
  const MomentSystem ms = augment(file.realization, noise);
  if (!is_hurwitz(ms.A) && !a.allow_unstable)
    throw ExitWith{kUnstable};

  const CovarianceMatrix v0 = a.v0.empty() ? CovarianceMatrix::vacuum(ms.modes())
                                           : *load_state(a.v0, common).covariance;
  if (v0.modes() != ms.modes())
    throw Error(ErrorKind::Dimension, "simulate: initial state has the wrong mode count");
  if (a.samples < 1) throw Error(ErrorKind::Dimension, "simulate: --samples must be >= 1");
  std::vector<double> times(a.samples);
  for (std::size_t k = 0; k < a.samples; ++k)
    times[k] = a.samples == 1 ? a.t_end
                              : a.t_end * static_cast<double>(k) /
                                    static_cast<double>(a.samples - 1);
  const Trajectory traj =
      evolve(ms, v0, RealVector::Zero(ms.A.rows()), times, EvolveOptions{a.rk4});

  std::ostringstream csv;
  csv << std::setprecision(12);
  const Eigen::Index n2 = ms.A.rows();
  csv << "t";
  for (Eigen::Index i = 0; i < n2; ++i)
    for (Eigen::Index j = i; j < n2; ++j) csv << ",V_" << i << "_" << j;
  csv << ",purity\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const RealMatrix& v = traj.covariances[k];
    csv << traj.times[k];
    for (Eigen::Index i = 0; i < n2; ++i)
      for (Eigen::Index j = i; j < n2; ++j) csv << "," << v(i, j);
    const double det = v.determinant();
    const double p = det > 0.0 ? 1.0 / (std::ldexp(1.0, static_cast<int>(ms.modes())) *
                                         std::sqrt(det))
                               : 0.0;
    csv << "," << p << "\n";
  }
  if (!common.output.empty()) {
    write_file(common.output, csv.str());
  } else {
    out << csv.str();
  }
  return kOk;
}

int cmd_thermal(const std::string& path, double gamma, double nbar,
                const std::string& target_path, const Common& common, std::ostream& out) {
  const std::string text = io::read_text(path);
  const io::RealizationFile file = io::parse_realization_file(text, common.tol);
  const Realization& r = file.realization;
  std::vector<NoiseChannel> noise = file.noise;
  if (gamma > 0.0) {
    auto extra = thermal_baths(r.modes(), gamma, nbar);
    noise.insert(noise.end(), extra.begin(), extra.end());
  }
  const CovarianceMatrix target = target_path.empty() ? graph_to_covariance(r.graph)
                                                      : *load_state(target_path, common).covariance;
  const RobustnessReport rep = robustness_report(r, noise, target);
  auto metrics = [](const NoisyMetrics& m) {
    json j{{"purity", m.purity}, {"covariance", io::real_to_json(m.covariance)}};
    if (m.log_negativity) j["log_negativity"] = *m.log_negativity;
    return j;
  };
  json report{{"command", "thermal"},
              {"input_digest", io::digest(text)},
              {"noise", io::noise_to_json(noise)},
              {"with_designed_coupling", metrics(rep.with_design)},
              {"without_designed_coupling", metrics(rep.without_design)},
              {"distance_to_target", rep.distance_to_target}};
  emit(report, common, out);
  return kOk;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NotPure: return kImpure;
    case ErrorKind::Infeasible: return kInfeasible;
    case ErrorKind::NotHurwitz: return kUnstable;
    default: return kIoError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dissipative preparation of pure Gaussian states: feasibility, synthesis "
               "and verification",
               "gsynth"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", common.tol, "Relative tolerance for structural tests")
        ->envname("GSYNTH_TOL")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", common.seed, "Seed for randomised fallbacks");
    sub->add_option("--format", common.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  std::string input;
  std::string target;
  std::string realization_out;

  auto* analyze = app.add_subcommand("analyze", "Purity, graph matrix and entanglement of a state");
  analyze->add_option("file", input, "Matrix file")->required();
  add_common(analyze);

  auto* feasible = app.add_subcommand("feasible", "Block characterization certificate");
  feasible->add_option("file", input, "Matrix file")->required();
  add_common(feasible);

  auto* synth = app.add_subcommand("synthesize", "Construct a constrained realization");
  synth->add_option("file", input, "Matrix file")->required();
  synth->add_option("-o,--output", realization_out, "Write the realization file here");
  add_common(synth);

  auto* verify = app.add_subcommand("verify", "Solve the steady state of a realization");
  verify->add_option("realization", input, "Realization file")->required();
  verify->add_option("--target", target, "Target state (defaults to the realization's graph)");
  add_common(verify);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Transient moment trajectory as CSV");
  simulate->add_option("realization", sim.realization, "Realization file")->required();
  simulate->add_option("--v0", sim.v0, "Initial state (defaults to vacuum)");
  simulate->add_option("--t-end", sim.t_end, "Final time")->check(CLI::NonNegativeNumber);
  simulate->add_option("--samples", sim.samples, "Number of equally spaced samples");
  simulate->add_flag("--allow-unstable", sim.allow_unstable, "Integrate non-Hurwitz systems");
  simulate->add_flag("--rk4", sim.rk4, "Use the RK4 integrator instead of the closed form");
  simulate->add_option("--gamma", sim.gamma, "Thermal damping rate on every mode")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--nbar", sim.nbar, "Thermal occupation")->check(CLI::NonNegativeNumber);
  simulate->add_option("-o,--output", common.output, "Write CSV here instead of stdout");
  add_common(simulate);

  double gamma = 0.0;
  double nbar = 0.0;
  auto* thermal = app.add_subcommand("thermal", "Purity and entanglement under thermal noise");
  thermal->add_option("realization", input, "Realization file")->required();
  thermal->add_option("--gamma", gamma, "Damping rate on every mode")->check(CLI::NonNegativeNumber);
  thermal->add_option("--nbar", nbar, "Thermal occupation")->check(CLI::NonNegativeNumber);
  thermal->add_option("--target", target, "Target state (defaults to the realization's graph)");
  add_common(thermal);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }

  try {
    if (*analyze) return cmd_analyze(input, common, out);
    if (*feasible) return cmd_feasible(input, common, out);
    if (*synth) return cmd_synthesize(input, realization_out, common, out);
    if (*verify) return cmd_verify(input, target, common, out);
    if (*simulate) return cmd_simulate(sim, common, out);
    if (*thermal) return cmd_thermal(input, gamma, nbar, target, common, out);
  } catch (const ExitWith& e) {
    err << "error: drift matrix is not Hurwitz; pass --allow-unstable to integrate anyway\n";
    return e.code;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kIoError;
}

}  // namespace gsynth::cli
