#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rvlab/lab.hpp"

namespace fs = std::filesystem;
using namespace rvlab;

namespace {

ScenarioConfig resolve_scenario(const std::string& ref) {
  if (fs::exists(ref)) return scenario_from_json_file(ref);
  return catalog_lookup(ref);
}

// kind:param[:extra], extra = beta for scale_tail, width for block
PerturbationSpec parse_spec(const std::string& text) {
  std::vector<std::string> fields;
  std::string::size_type from = 0;
  while (true) {
    const auto colon = text.find(':', from);
    fields.push_back(text.substr(from, colon - from));
    if (colon == std::string::npos) break;
    from = colon + 1;
  }
  PerturbationSpec spec;
  spec.kind = perturbation_kind_from(fields.at(0));
  if (fields.size() > 1) spec.param = std::stod(fields[1]);
  if (fields.size() > 2) {
    if (spec.kind == PerturbationKind::scale_tail)
      spec.beta = std::stod(fields[2]);
    else if (spec.kind == PerturbationKind::block)
      spec.width = std::stod(fields[2]);
    else
      throw std::invalid_argument("perturbation '" + fields[0] +
                                  "' takes a single parameter");
  } else if (spec.kind == PerturbationKind::scale_tail) {
    throw std::invalid_argument("scale_tail needs kind:x_max:beta");
  }
  return spec;
}

void print_record(const ExperimentRecord& rec) {
  std::cout << "scenario " << rec.scenario.name << "\n"
            << "verdict " << to_string(rec.verdict.outcome) << " ("
            << rec.verdict.peak_count << " peak(s))\n"
            << "recovery_error " << rec.recovery_error << "\n"
            << "delta_p " << rec.metrics.delta_p << "\n";
  if (rec.metrics.delta_h1)
    std::cout << "delta_h1 " << *rec.metrics.delta_h1 << "\n";
  if (rec.metrics.delta_h1_tilde)
    std::cout << "delta_h1_tilde " << *rec.metrics.delta_h1_tilde << "\n";
  if (rec.metrics.delta_h_rel)
    std::cout << "delta_h_rel " << *rec.metrics.delta_h_rel << "\n";
  std::cout << "wall_seconds " << rec.wall_seconds << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forward/perturb/reverse experiments on beam and field models"};
  app.require_subcommand(1);
  std::cout.precision(12);

  std::string scenario_ref, out_dir = "rvlab-out";
  CLI::App* run_cmd =
      app.add_subcommand("run", "run a scenario by catalog name or config file");
  run_cmd->add_option("scenario", scenario_ref, "catalog name or JSON path")
      ->required();
  run_cmd->add_option("--out", out_dir, "output directory");

  std::string snap_path, system_name = "nls1d";
  double rev_depth = 0.0, rev_eps = 1e-3, rev_cfl = 0.02;
  int rev_stride = 50;
  CLI::App* rev_cmd = app.add_subcommand(
      "reverse", "back-propagate a saved beam snapshot and classify it");
  rev_cmd->add_option("snapshot", snap_path, "snapshot file")->required();
  rev_cmd->add_option("--system", system_name, "nls1d or nls2d");
  rev_cmd->add_option("--depth", rev_depth, "back-propagation distance")
      ->required();
  rev_cmd->add_option("--epsilon", rev_eps, "quintic coefficient");
  rev_cmd->add_option("--cfl", rev_cfl, "peak phase advance per step");
  rev_cmd->add_option("--stride", rev_stride, "snapshot stride");
  rev_cmd->add_option("--out", out_dir, "output directory");

  std::string family_path;
  double tol = 0.0;
  std::vector<double> zf_list;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "threshold bisection across a list of forward endpoints");
  sweep_cmd->add_option("family-config", family_path, "family JSON path")
      ->required();
  sweep_cmd->add_option("--zf", zf_list, "endpoint list override");
  sweep_cmd->add_option("--tol", tol, "bracket tolerance override");
  sweep_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* th_cmd = app.add_subcommand(
      "threshold", "bisect one perturbation family at the base endpoint");
  th_cmd->add_option("family-config", family_path, "family JSON path")
      ->required();
  th_cmd->add_option("--tol", tol, "bracket tolerance override");
  th_cmd->add_option("--out", out_dir, "output directory");

  std::string snap_a, snap_b, spec_text;
  CLI::App* met_cmd = app.add_subcommand(
      "metrics", "error indicators between a snapshot and its perturbed copy");
  met_cmd->add_option("snapshot", snap_a, "unperturbed snapshot")->required();
  met_cmd->add_option("perturbed", snap_b, "perturbed snapshot")->required();
  met_cmd
      ->add_option("--perturbation", spec_text,
                   "kind:param[:extra] (beta for scale_tail, width for block)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const ScenarioConfig config = resolve_scenario(scenario_ref);
      const ExperimentRecord rec = run_reversal_experiment(config, out_dir);
      print_record(rec);
      std::cout << "record " << (fs::path(out_dir) / (config.name + "-record.json")).string()
                << "\n";
    } else if (rev_cmd->parsed()) {
      const System system = system_from(system_name);
      if (system != System::nls1d && system != System::nls2d)
        throw std::invalid_argument(
            "reverse handles beam snapshots; field states run through 'run'");
      const ComplexField psi = load_snapshot(snap_path);
      const bool radial = std::holds_alternative<RadialGrid>(psi.grid);
      if (radial != (system == System::nls2d))
        throw std::invalid_argument("snapshot grid does not match --system");
      NlsParams params;
      params.epsilon = rev_eps;
      StepControl ctrl;
      ctrl.cfl_like_factor = rev_cfl;
      const Trajectory traj =
          rvlab::reverse(psi, params, rev_depth, ctrl, rev_stride);
      const ReversalVerdict verdict = classify_reversal(traj);
      std::cout << "verdict " << to_string(verdict.outcome) << " ("
                << verdict.peak_count << " peak(s))\n";
      fs::create_directories(out_dir);
      const fs::path out_path =
          fs::path(out_dir) /
          (fs::path(snap_path).stem().string() + "-reversed.rvlb");
      save_snapshot(traj.final_state(), out_path);
      std::cout << "reversed " << out_path.string() << "\n";
    } else if (sweep_cmd->parsed() || th_cmd->parsed()) {
      FamilyConfig fam = family_from_json_file(family_path);
      if (tol > 0.0) fam.tol = tol;
      if (!zf_list.empty()) fam.zf_list = zf_list;
      fs::create_directories(out_dir);
      const fs::path csv =
          fs::path(out_dir) / (fam.family + "-thresholds.csv");
      if (sweep_cmd->parsed()) {
        if (fam.zf_list.empty())
          throw std::invalid_argument(
              "sweep needs zf_list in the config or --zf");
        const std::vector<ThresholdResult> results = sweep_zf(
            fam.base, fam.family, fam.lo, fam.hi, fam.zf_list, fam.tol);
        for (const ThresholdResult& r : results) {
          std::cout << threshold_to_json(r);
          append_threshold_csv(csv, r);
        }
      } else {
        const ThresholdResult r =
            threshold_bisect(fam.base, fam.family, fam.lo, fam.hi, fam.tol);
        std::cout << threshold_to_json(r);
        append_threshold_csv(csv, r);
      }
      std::cout << "thresholds " << csv.string() << "\n";
    } else if (met_cmd->parsed()) {
      const ComplexField a = load_snapshot(snap_a);
      const ComplexField b = load_snapshot(snap_b);
      const MetricReport report = measure(a, b, parse_spec(spec_text));
      std::cout << "delta_p " << report.delta_p << "\n";
      if (report.delta_h1) std::cout << "delta_h1 " << *report.delta_h1 << "\n";
      if (report.delta_h1_tilde)
        std::cout << "delta_h1_tilde " << *report.delta_h1_tilde << "\n";
      std::cout << "notes " << report.notes << "\n";
    }
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort at z = " << e.z << ": " << e.what() << "\n";
    return 2;
  } catch (const BracketError& e) {
    std::cerr << "bracket error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
