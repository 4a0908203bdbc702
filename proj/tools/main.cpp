// riemcorr: Riemannian covariance/correlation toolkit for S^2 and SO(3).
//
// Subcommands: simulate, analyze, sweep, frechet-mean, vcg. All results are
// deterministic given flags and input files; angles are radians throughout.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riemcorr/riemcorr.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using riemcorr::io::json;

// ---------------------------------------------------------------------------
// Error reporting: machine-readable JSON on stderr, stable type tags.

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const riemcorr::CutLocusError*>(&e)) return "cut-locus";
  if (dynamic_cast<const riemcorr::BaseMismatchError*>(&e)) return "base-mismatch";
  if (dynamic_cast<const riemcorr::ComparisonDomainError*>(&e)) return "comparison-domain";
  if (dynamic_cast<const riemcorr::ConvergenceError*>(&e)) return "convergence";
  if (dynamic_cast<const riemcorr::NonUniqueMeanError*>(&e)) return "non-unique-mean";
  if (dynamic_cast<const riemcorr::DegenerateVarianceError*>(&e)) return "degenerate-variance";
  if (dynamic_cast<const riemcorr::Error*>(&e)) return "data";
  if (dynamic_cast<const json::exception*>(&e)) return "data";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid-argument";
  return "internal";
}

void print_error(const std::string& type, const std::string& message) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

// ---------------------------------------------------------------------------
// Small flag-parsing helpers

std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const std::string& field : riemcorr::io::split_csv_line(s))
    out.push_back(riemcorr::io::detail::parse_double(field, what));
  return out;
}

riemcorr::Vec3 parse_vec3(const std::string& s, const std::string& what) {
  const std::vector<double> v = parse_numbers(s, what);
  if (v.size() != 3) throw riemcorr::Error(what + ": expected 3 comma-separated numbers");
  return {v[0], v[1], v[2]};
}

// --point accepts 3 values (sphere direction), 4 (SO(3) axis-angle: x,y,z,angle)
// or 9 (SO(3) matrix, row-major).
riemcorr::ManifoldPoint parse_point(const std::string& s, bool lenient) {
  const std::vector<double> v = parse_numbers(s, "--point");
  if (v.size() == 3) {
    const riemcorr::Vec3 d{v[0], v[1], v[2]};
    const double n = riemcorr::norm(d);
    if (!lenient && std::abs(n - 1.0) > 1e-6)
      throw riemcorr::Error("--point: direction norm is not 1 (within 1e-6); pass --lenient to normalize");
    if (n < 1e-12) throw riemcorr::Error("--point: zero direction");
    return riemcorr::ManifoldPoint::sphere_normalized(d);
  }
  if (v.size() == 4) {
    riemcorr::Vec3 axis{v[0], v[1], v[2]};
    const double n = riemcorr::norm(axis);
    if (!lenient && std::abs(n - 1.0) > 1e-6)
      throw riemcorr::Error("--point: axis norm is not 1 (within 1e-6); pass --lenient to normalize");
    if (n < 1e-12) throw riemcorr::Error("--point: zero axis");
    return riemcorr::ManifoldPoint::rotation_projected(
        riemcorr::so3::rotation_from_axis_angle({riemcorr::normalized(axis), v[3]}));
  }
  if (v.size() == 9) {
    riemcorr::Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = v[static_cast<std::size_t>(3 * i + j)];
    if (riemcorr::det(r) <= 0.0) throw riemcorr::Error("--point: matrix has nonpositive determinant");
    if (!lenient && !riemcorr::so3::is_rotation(r, 1e-6))
      throw riemcorr::Error("--point: matrix is not a rotation (within 1e-6); pass --lenient to project");
    return riemcorr::ManifoldPoint::rotation_projected(r);
  }
  throw riemcorr::Error("--point: expected 3 (sphere), 4 (axis-angle) or 9 (matrix) numbers");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    riemcorr::io::write_text_file(out_path, content);
}

json with_warnings(json j, const std::vector<std::string>& warnings) {
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

struct SolverFlags {
  double tolerance = 1e-10;
  int max_iterations = 1000;
  double step = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tolerance", tolerance, "Gradient-norm tolerance of the mean solver");
    cmd->add_option("--max-iterations", max_iterations, "Iteration cap of the mean solver");
    cmd->add_option("--step", step, "Initial fixed-point step size");
  }
  riemcorr::FrechetSolverConfig config() const {
    riemcorr::FrechetSolverConfig c;
    c.tolerance = tolerance;
    c.max_iterations = max_iterations;
    c.step = step;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian covariance and correlation for spherical and rotation data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("riemcorr ") + kVersion);

  // --- simulate ------------------------------------------------------------
  CLI::App* simulate = app.add_subcommand("simulate", "Draw a paired synthetic sample");
  std::string sim_manifold, sim_scenario;
  int sim_n = 100;
  double sim_noise = 0.0;
  std::uint64_t sim_seed = 1;
  std::string sim_out_x, sim_out_y;
  std::string sim_mu, sim_axis, sim_mu2, sim_b_axis;
  double sim_kappa = 0, sim_angle = 0, sim_kappa2 = 0, sim_alpha = 0, sim_alpha2 = 0,
         sim_theta = 0, sim_b_angle = 0;
  simulate->add_option("--manifold", sim_manifold, "sphere or so3")->required();
  simulate
      ->add_option("--scenario", sim_scenario, "same-mean, rotated, negative or independent")
      ->required();
  simulate->add_option("--n", sim_n, "Sample size per margin");
  simulate->add_option("--noise", sim_noise, "Noise level epsilon");
  simulate->add_option("--seed", sim_seed, "Generator seed");
  simulate->add_option("--out-x", sim_out_x, "Output CSV for the X margin")->required();
  simulate->add_option("--out-y", sim_out_y, "Output CSV for the Y margin")->required();
  auto* f_mu = simulate->add_option("--mu", sim_mu, "Sphere mean direction x,y,z");
  auto* f_kappa = simulate->add_option("--kappa", sim_kappa, "VMF concentration of X");
  auto* f_axis = simulate->add_option("--rotation-axis", sim_axis, "Transform axis x,y,z");
  auto* f_angle = simulate->add_option("--rotation-angle", sim_angle, "Transform angle (radians)");
  auto* f_mu2 = simulate->add_option("--mu2", sim_mu2, "Independent-Y mean direction x,y,z");
  auto* f_kappa2 = simulate->add_option("--kappa2", sim_kappa2, "VMF concentration of Y");
  auto* f_alpha = simulate->add_option("--alpha", sim_alpha, "Tangent clipping bound of X");
  auto* f_alpha2 = simulate->add_option("--alpha2", sim_alpha2, "Tangent clipping bound of Y");
  auto* f_theta = simulate->add_option("--theta", sim_theta, "Tangent rotation angle (radians)");
  auto* f_b_axis = simulate->add_option("--b-axis", sim_b_axis, "Left-translation axis x,y,z");
  auto* f_b_angle =
      simulate->add_option("--b-angle", sim_b_angle, "Left-translation angle (radians)");

  // --- analyze -------------------------------------------------------------
  CLI::App* analyze = app.add_subcommand("analyze", "Estimate dependence between two samples");
  std::string an_x, an_y, an_policy = "midpoint", an_weights, an_point, an_out;
  bool an_skip_dcorr = false, an_lenient = false;
  SolverFlags an_solver;
  analyze->add_option("--x", an_x, "CSV of the X margin")->required();
  analyze->add_option("--y", an_y, "CSV of the Y margin")->required();
  analyze->add_option("--policy", an_policy,
                      "Reference point: common-mean, midpoint, weighted or point");
  analyze->add_option("--weights", an_weights, "w1,w2 for the weighted policy");
  analyze->add_option("--point", an_point,
                      "Explicit reference point (3, 4 or 9 comma-separated numbers)");
  analyze->add_option("--out", an_out, "Output JSON path (default: stdout)");
  analyze->add_flag("--skip-dcorr", an_skip_dcorr, "Skip the O(n^2) distance correlation");
  analyze->add_flag("--lenient", an_lenient, "Normalize slightly invalid inputs with warnings");
  an_solver.attach(analyze);

  // --- sweep ---------------------------------------------------------------
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a noise-grid replication study");
  std::string sw_config, sw_out;
  std::uint64_t sw_seed = 0;
  sweep_cmd->add_option("--config", sw_config, "Sweep configuration JSON")->required();
  sweep_cmd->add_option("--out", sw_out, "Output CSV path (default: stdout)");
  auto* f_sw_seed =
      sweep_cmd->add_option("--seed", sw_seed, "Override the base seed of the config");

  // --- frechet-mean --------------------------------------------------------
  CLI::App* fmean = app.add_subcommand("frechet-mean", "Fréchet mean of one sample");
  std::string fm_input, fm_out;
  bool fm_lenient = false;
  SolverFlags fm_solver;
  fmean->add_option("--input", fm_input, "Sample CSV (sphere or SO(3))")->required();
  fmean->add_option("--out", fm_out, "Output JSON path (default: stdout)");
  fmean->add_flag("--lenient", fm_lenient, "Normalize slightly invalid inputs with warnings");
  fm_solver.attach(fmean);

  // --- vcg -----------------------------------------------------------------
  CLI::App* vcg = app.add_subcommand("vcg", "Paired-directions case study (midpoint rcorr + dcorr)");
  std::string vcg_f, vcg_mp, vcg_out;
  bool vcg_lenient = false;
  SolverFlags vcg_solver;
  vcg->add_option("--f-system", vcg_f, "Sphere CSV of the F-system directions")->required();
  vcg->add_option("--mp-system", vcg_mp, "Sphere CSV of the MP-system directions")->required();
  vcg->add_option("--out", vcg_out, "Output JSON path (default: stdout)");
  vcg->add_flag("--lenient", vcg_lenient, "Normalize slightly invalid inputs with warnings");
  vcg_solver.attach(vcg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    using namespace riemcorr;

    if (simulate->parsed()) {
      ScenarioConfig cfg = make_scenario(manifold_from_name(sim_manifold),
                                         scenario_from_name(sim_scenario), sim_n, sim_noise,
                                         sim_seed);
      if (f_mu->count()) cfg.mu = parse_vec3(sim_mu, "--mu");
      if (f_kappa->count()) cfg.kappa = sim_kappa;
      if (f_axis->count()) cfg.rotation_axis = parse_vec3(sim_axis, "--rotation-axis");
      if (f_angle->count()) cfg.rotation_angle = sim_angle;
      if (f_mu2->count()) cfg.mu2 = parse_vec3(sim_mu2, "--mu2");
      if (f_kappa2->count()) cfg.kappa2 = sim_kappa2;
      if (f_alpha->count()) cfg.alpha = sim_alpha;
      if (f_alpha2->count()) cfg.alpha2 = sim_alpha2;
      if (f_theta->count()) cfg.theta = sim_theta;
      if (f_b_axis->count() || f_b_angle->count()) {
        if (!f_b_axis->count() || !f_b_angle->count())
          throw Error("simulate: --b-axis and --b-angle must be given together");
        cfg.b_rotation = so3::rotation_from_axis_angle(
            {normalized(parse_vec3(sim_b_axis, "--b-axis")), sim_b_angle});
      }
      const PairedSample sample = generate(cfg);
      io::write_text_file(sim_out_x, io::points_csv(sample.xs()));
      io::write_text_file(sim_out_y, io::points_csv(sample.ys()));
      return 0;
    }

    if (analyze->parsed()) {
      std::vector<std::string> warnings;
      std::vector<ManifoldPoint> xs = io::load_sample_csv(an_x, an_lenient, &warnings);
      std::vector<ManifoldPoint> ys = io::load_sample_csv(an_y, an_lenient, &warnings);
      const PairedSample sample(std::move(xs), std::move(ys));
      const PointPolicy policy = policy_from_name(an_policy);
      std::optional<std::pair<double, double>> weights;
      if (!an_weights.empty()) {
        const std::vector<double> w = parse_numbers(an_weights, "--weights");
        if (w.size() != 2) throw Error("--weights: expected two comma-separated numbers");
        weights = std::make_pair(w[0], w[1]);
      }
      std::optional<ManifoldPoint> point;
      if (!an_point.empty()) point = parse_point(an_point, an_lenient);
      EvalOptions options;
      options.solver = an_solver.config();
      options.with_dcorr = !an_skip_dcorr;
      const DependenceReport report =
          evaluate_dependence(sample, policy, options, weights, point);
      emit(an_out, with_warnings(io::dependence_report_json(report), warnings).dump(2) + "\n");
      return 0;
    }

    if (sweep_cmd->parsed()) {
      SweepConfig config = io::sweep_config_from_json(json::parse(io::read_text_file(sw_config)));
      if (f_sw_seed->count()) config.base_seed = sw_seed;
      const std::vector<SweepRow> rows = run_sweep(config);
      emit(sw_out, io::sweep_csv(rows));
      for (const SweepRow& row : rows)
        if (!row.error.empty()) return 3;
      return 0;
    }

    if (fmean->parsed()) {
      std::vector<std::string> warnings;
      const std::vector<ManifoldPoint> points = io::load_sample_csv(fm_input, fm_lenient, &warnings);
      const FrechetResult result = frechet_mean(points, fm_solver.config());
      emit(fm_out, with_warnings(io::frechet_result_json(result), warnings).dump(2) + "\n");
      return 0;
    }

    if (vcg->parsed()) {
      std::vector<std::string> warnings;
      const PairedSample sample = io::load_vcg_dataset(vcg_f, vcg_mp, vcg_lenient, &warnings);
      EvalOptions options;
      options.solver = vcg_solver.config();
      const DependenceReport report = evaluate_dependence(sample, PointPolicy::midpoint, options);
      json out{{"n", report.n},
               {"rcorr", report.rcorr},
               {"dcorr", report.dcorr ? json(*report.dcorr) : json(nullptr)},
               {"report", io::dependence_report_json(report)}};
      emit(vcg_out, with_warnings(std::move(out), warnings).dump(2) + "\n");
      return 0;
    }
  } catch (const std::exception& e) {
    print_error(error_type(e), e.what());
    return 1;
  }
  return 0;
}
