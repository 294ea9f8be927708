#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rvlab/classify.hpp"
#include "rvlab/metrics.hpp"
#include "rvlab/nls.hpp"
#include "rvlab/perturb.hpp"

// Experiment harness: the named scenario catalog, the forward / perturb /
// reverse pipeline with persistence, threshold bisection over perturbation
// families, and the endpoint sweep built on it.  Every stage is
// deterministic: identical configs give bitwise-identical metrics.

namespace rvlab {

enum class System { nls1d, nls2d, phi4, burgers };

std::string to_string(System system);
System system_from(const std::string& name);

/// One experiment: which system, how to build the input, solver resolution
/// and stepping, the forward endpoint (z_f or t_f), what perturbation to
/// apply to the captured output, and how deep to run the reversal.
struct ScenarioConfig {
  std::string name;
  std::string label;
  unsigned long seed = 0;  // recorded with the run; no pipeline stage draws on it
  System system = System::nls1d;

  std::string ic;                           // named input builder
  std::map<std::string, double> ic_params;  // builder arguments

  double x_min = 0.0;  // left edge (1D grids; unused on radial ones)
  double x_max = 0.0;  // right edge (1D) or r_max (radial)
  Eigen::Index n = 0;  // sample count
  NlsParams nls;
  StepControl step;  // NLS stepping
  double dt = 0.0;   // phi4 time step; 0 picks dx/2
  int snapshot_stride = 0;

  double endpoint = 0.0;                 // z_f (NLS) or t_f (phi4, Burgers)
  std::optional<double> reversal_depth;  // back-propagation distance; defaults to endpoint
  std::optional<PerturbationSpec> perturbation;
};

/// Per-system domain, resolution, and stepping defaults; catalog entries and
/// config files override fields from here.
ScenarioConfig default_config(System system);

/// Throws std::invalid_argument on a nonpositive endpoint, an unknown input
/// builder for the system, or an unusable grid.
void validate(const ScenarioConfig& config);

struct ExperimentRecord {
  ScenarioConfig scenario;
  MetricReport metrics;     // perturbed output against the unperturbed output
  ReversalVerdict verdict;  // reversal classified near its far end
  double recovery_error = 0.0;  // reversed state nearest the input plane vs the input
  std::map<std::string, std::pair<double, double>> invariant_extremes;
  double wall_seconds = 0.0;
  std::vector<std::string> snapshot_paths;
};

/// Forward propagate, capture the output, apply the perturbation (if any),
/// reverse by reversal_depth, classify the reversal, and measure the
/// perturbation.  A nonempty out_dir persists the record, the endpoint
/// snapshots, and a CSV row under it.  Solver failures propagate as
/// SolverAbort, never as a degraded record.
ExperimentRecord run_reversal_experiment(
    const ScenarioConfig& config, const std::filesystem::path& out_dir = {});

struct ThresholdResult {
  double z_f = 0.0;
  std::string family;
  double x_th = 0.0;        // converged bracket midpoint
  double lost = 0.0;        // bracket end where reversibility is lost
  double maintained = 0.0;  // bracket end where it is maintained
  double delta_p_at_th = 0.0;
  std::optional<double> delta_h1_tilde_at_th;  // absent for families whose metric is undefined
  int probes = 0;
};

/// Bisects the family parameter (x_max | dI | beta_low | beta_high | k_max)
/// between lo and hi, running the full reversal experiment per probe, until
/// the bracket is at most tol wide.  The forward leg is shared across
/// probes.  The threshold metrics come from the surviving maintained end.
/// Probe count stays within ceil(log2(width / tol)) + 2.  Throws
/// BracketError when both ends carry the same verdict or a probe comes back
/// ambiguous.
ThresholdResult threshold_bisect(const ScenarioConfig& base,
                                 const std::string& family, double lo,
                                 double hi, double tol);

/// threshold_bisect at each endpoint in zf_list (nonempty, increasing),
/// reversal depth tracking the endpoint.
std::vector<ThresholdResult> sweep_zf(const ScenarioConfig& base,
                                      const std::string& family, double lo,
                                      double hi,
                                      const std::vector<double>& zf_list,
                                      double tol);

/// The frozen scenario list shipped with the repo; lookup throws
/// std::invalid_argument for unknown names, listing the catalog.
const std::vector<ScenarioConfig>& scenario_catalog();
ScenarioConfig catalog_lookup(const std::string& name);

std::string scenario_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const std::string& text);
ScenarioConfig scenario_from_json_file(const std::filesystem::path& path);
std::string record_to_json(const ExperimentRecord& record);
std::string threshold_to_json(const ThresholdResult& result);

/// A bisection family over a base scenario.  The JSON form holds the base
/// inline or as a catalog name under "base".
struct FamilyConfig {
  ScenarioConfig base;
  std::string family;
  double lo = 0.0;
  double hi = 0.0;
  double tol = 0.0;
  std::vector<double> zf_list;
};
FamilyConfig family_from_json_file(const std::filesystem::path& path);

/// Appends one row (writing the header first on a fresh file):
///   scenario,z_f,perturbation_kind,param,delta_p,delta_h1,delta_h1_tilde,
///   verdict,recovery_error
/// The param cell is beta for tail scalings and the primary parameter
/// otherwise; metric cells stay empty where the metric is undefined.
void append_record_csv(const std::filesystem::path& path,
                       const ExperimentRecord& record);
void append_threshold_csv(const std::filesystem::path& path,
                          const ThresholdResult& result);

}  // namespace rvlab
