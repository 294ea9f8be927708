#include "rvlab/lab.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rvlab/burgers.hpp"
#include "rvlab/phi4.hpp"
#include "rvlab/spectral.hpp"
#include "rvlab/waves.hpp"

namespace rvlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// shortest round-trip decimal, so CSV and JSON output is reproducible
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ic_param(const ScenarioConfig& c, const std::string& key) {
  const auto it = c.ic_params.find(key);
  if (it == c.ic_params.end())
    throw std::invalid_argument("scenario '" + c.name + "': ic '" + c.ic +
                                "' needs ic_params[\"" + key + "\"]");
  return it->second;
}

double ic_param_or(const ScenarioConfig& c, const std::string& key,
                   double fallback) {
  const auto it = c.ic_params.find(key);
  return it == c.ic_params.end() ? fallback : it->second;
}

double depth_of(const ScenarioConfig& c) {
  return c.reversal_depth.value_or(c.endpoint);
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void fold_extreme(ExperimentRecord& rec, const std::string& name, double v) {
  auto it = rec.invariant_extremes.find(name);
  if (it == rec.invariant_extremes.end()) {
    rec.invariant_extremes.emplace(name, std::make_pair(v, v));
  } else {
    it->second.first = std::min(it->second.first, v);
    it->second.second = std::max(it->second.second, v);
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string prefix_of(const ScenarioConfig& c) {
  return c.name.empty() ? std::string("scenario") : c.name;
}

// ---------------------------------------------------------------------------
// NLS pipeline

ComplexField build_nls_input(const ScenarioConfig& c) {
  if (c.system == System::nls1d) {
    const Grid1D g(c.x_min, c.x_max, c.n);
    if (c.ic == "fusion")
      return fusion_ic(g, ic_param(c, "kappa"), c.nls.epsilon,
                       ic_param(c, "x0"), ic_param(c, "theta"));
    if (c.ic == "solitary")
      return cq_solitary_1d(g, ic_param(c, "kappa"), c.nls.epsilon,
                            ic_param_or(c, "x0", 0.0));
  } else {
    const RadialGrid g(c.x_max, c.n);
    if (c.ic == "gaussian") return gaussian_ic(g, ic_param(c, "amplitude"));
    if (c.ic == "solitary")
      return cq_solitary_2d(g, ic_param(c, "kappa"), c.nls.epsilon);
  }
  throw std::invalid_argument("scenario '" + c.name + "': unknown ic '" +
                              c.ic + "' for system " + to_string(c.system));
}

struct NlsForward {
  ComplexField input;
  Trajectory forward;
  double seconds = 0.0;
};

NlsForward nls_forward(const ScenarioConfig& c) {
  Stopwatch sw;
  NlsForward run{build_nls_input(c), {}, 0.0};
  run.forward = propagate(run.input, c.nls, c.endpoint, c.step,
                          c.snapshot_stride);
  run.seconds = sw.seconds();
  return run;
}

const ComplexField& nearest_to_input(const Trajectory& rev, double z0) {
  const ComplexField* best = &rev.snapshots.front();
  for (const ComplexField& s : rev.snapshots)
    if (std::abs(s.z - z0) < std::abs(best->z - z0)) best = &s;
  return *best;
}

ExperimentRecord nls_finish(const ScenarioConfig& c, const NlsForward& fwd,
                            const fs::path& out_dir) {
  Stopwatch sw;
  ExperimentRecord rec;
  rec.scenario = c;

  const ComplexField& out = fwd.forward.final_state();
  const ComplexField perturbed =
      c.perturbation ? apply(out, *c.perturbation) : out;
  const Trajectory rev =
      reverse(perturbed, c.nls, depth_of(c), c.step, c.snapshot_stride);

  rec.verdict = classify_reversal(rev);
  if (c.perturbation) {
    rec.metrics = measure(out, perturbed, *c.perturbation);
  } else {
    rec.metrics.notes = "identity run: no perturbation applied";
  }
  rec.recovery_error =
      input_recovery_error(nearest_to_input(rev, fwd.input.z), fwd.input);

  for (const ConservedSample& s : fwd.forward.log) {
    fold_extreme(rec, "power", s.power);
    fold_extreme(rec, "hamiltonian", s.hamiltonian);
  }
  for (const ConservedSample& s : rev.log) {
    fold_extreme(rec, "power", s.power);
    fold_extreme(rec, "hamiltonian", s.hamiltonian);
  }
  rec.wall_seconds = fwd.seconds + sw.seconds();

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string p = prefix_of(c);
    const fs::path input_p = out_dir / (p + "-input.rvlb");
    const fs::path output_p = out_dir / (p + "-output.rvlb");
    const fs::path reversed_p = out_dir / (p + "-reversed.rvlb");
    save_snapshot(fwd.input, input_p);
    save_snapshot(out, output_p);
    save_snapshot(rev.final_state(), reversed_p);
    rec.snapshot_paths = {input_p.string(), output_p.string(),
                          reversed_p.string()};
    if (c.perturbation) {
      const fs::path per_p = out_dir / (p + "-perturbed.rvlb");
      save_snapshot(perturbed, per_p);
      rec.snapshot_paths.push_back(per_p.string());
    }
    rec.wall_seconds = fwd.seconds + sw.seconds();
    write_text(out_dir / (p + "-record.json"), record_to_json(rec));
    append_record_csv(out_dir / "records.csv", rec);
  }
  return rec;
}

// ---------------------------------------------------------------------------
// phi4 pipeline

ExperimentRecord phi4_experiment(const ScenarioConfig& c,
                                 const fs::path& out_dir) {
  Stopwatch sw;
  ExperimentRecord rec;
  rec.scenario = c;

  const Grid1D g(c.x_min, c.x_max, c.n);
  const KleinGordonState input =
      kink_antikink_ic(g, ic_param(c, "v"), ic_param_or(c, "x0", 10.0));
  const KgTrajectory fwd =
      propagate(input, c.endpoint, c.snapshot_stride, c.dt);
  const KleinGordonState& out = fwd.final_state();

  KleinGordonState perturbed = out;
  if (c.perturbation) {
    if (c.perturbation->kind != PerturbationKind::truncate)
      throw std::invalid_argument(
          "scenario '" + c.name +
          "': scalar-field runs support the truncate perturbation only");
    perturbed = truncate(out, c.perturbation->param);
  }
  const KgTrajectory rev =
      reverse(perturbed, depth_of(c), c.snapshot_stride, c.dt);

  const CollisionOutcome col =
      classify_collision(rev, ic_param_or(c, "proximity", 4.0),
                         ic_param_or(c, "escape_radius", 6.0));
  const std::vector<TrackSample> track = track_antikink(rev);

  rec.verdict.outcome = col.kind == CollisionOutcome::Kind::escape
                            ? Outcome::split
                            : Outcome::single;
  rec.verdict.peak_count =
      col.kind == CollisionOutcome::Kind::escape ? 2 : 1;
  for (const TrackSample& s : track)
    if (!s.ambiguous) rec.verdict.separation_series.push_back({s.t, 2.0 * s.x});
  if (col.kind == CollisionOutcome::Kind::escape) {
    for (auto it = track.rbegin(); it != track.rend(); ++it) {
      if (!it->ambiguous) {
        rec.verdict.peak_positions = {-it->x, it->x};
        break;
      }
    }
  }

  if (c.perturbation) rec.metrics.delta_h_rel = delta_h_rel(out, perturbed);
  rec.metrics.notes =
      (c.perturbation ? std::string("delta_h_rel of the truncated output; ")
                      : std::string("identity run: no perturbation applied; ")) +
      "final antikink speed " + fmt(col.final_speed) + ", " +
      std::to_string(col.bounce_times.size()) + " contact episode(s)";

  const KleinGordonState* best = &rev.snapshots.front();
  for (const KleinGordonState& s : rev.snapshots)
    if (std::abs(s.phi.t - input.phi.t) < std::abs(best->phi.t - input.phi.t))
      best = &s;
  const double num = (best->phi.values - input.phi.values).square().sum() +
                     (best->pi.values - input.pi.values).square().sum();
  const double den =
      input.phi.values.square().sum() + input.pi.values.square().sum();
  rec.recovery_error = std::sqrt(num / den);

  for (const KleinGordonState& s : fwd.snapshots)
    fold_extreme(rec, "energy", energy(s));
  for (const KleinGordonState& s : rev.snapshots)
    fold_extreme(rec, "energy", energy(s));
  rec.wall_seconds = sw.seconds();

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string p = prefix_of(c);
    const auto save_state = [&](const KleinGordonState& s,
                                const std::string& tag) {
      const fs::path phi_p = out_dir / (p + "-" + tag + "-phi.rvlb");
      const fs::path pi_p = out_dir / (p + "-" + tag + "-pi.rvlb");
      save_snapshot(s.phi, phi_p);
      save_snapshot(s.pi, pi_p);
      rec.snapshot_paths.push_back(phi_p.string());
      rec.snapshot_paths.push_back(pi_p.string());
    };
    save_state(input, "input");
    save_state(out, "output");
    if (c.perturbation) save_state(perturbed, "perturbed");
    save_state(rev.final_state(), "reversed");
    rec.wall_seconds = sw.seconds();
    write_text(out_dir / (p + "-record.json"), record_to_json(rec));
    append_record_csv(out_dir / "records.csv", rec);
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Burgers pipeline

bool profiles_identical(const PiecewiseProfile& a, const PiecewiseProfile& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].x != b.points[i].x ||
        a.points[i].u_left != b.points[i].u_left ||
        a.points[i].u_right != b.points[i].u_right)
      return false;
  }
  return true;
}

double profile_gap(const PiecewiseProfile& a, const PiecewiseProfile& b) {
  double gap = 0.0;
  const auto fold = [&](double x) {
    gap = std::max(gap, std::abs(a.value(x) - b.value(x)));
  };
  for (const Breakpoint& p : a.points) {
    fold(p.x - 1e-9);
    fold(p.x + 1e-9);
  }
  for (const Breakpoint& p : b.points) {
    fold(p.x - 1e-9);
    fold(p.x + 1e-9);
  }
  return gap;
}

ExperimentRecord burgers_experiment(const ScenarioConfig& c,
                                    const fs::path& out_dir) {
  Stopwatch sw;
  ExperimentRecord rec;
  rec.scenario = c;

  // two presentations of the same entropy solution from t >= 1 on: the step
  // breaks immediately, the shifted ramp steepens into the identical shock
  const PiecewiseProfile step0 = step_ic();
  const PiecewiseProfile ramp0 = ramp_ic(-0.5);
  const PiecewiseProfile step_t = evolve_exact(step0, c.endpoint);
  const PiecewiseProfile ramp_t = evolve_exact(ramp0, c.endpoint);

  const bool identical = profiles_identical(step_t, ramp_t);
  rec.recovery_error = identical ? 0.0 : profile_gap(step_t, ramp_t);

  const std::vector<double> shocks = shock_positions(step_t);
  rec.verdict.outcome = Outcome::single;
  rec.verdict.peak_count = static_cast<int>(shocks.size());
  rec.verdict.peak_positions = shocks;

  for (int k = 0; k <= 16; ++k) {
    const double t = c.endpoint * k / 16.0;
    for (const PiecewiseProfile& p0 : {step0, ramp0})
      for (double s : shock_positions(evolve_exact(p0, t)))
        fold_extreme(rec, "shock_position_error", std::abs(s - 0.5 * t));
  }

  rec.metrics.notes = identical
                          ? "both evolution paths are breakpoint-identical"
                          : "evolution paths differ; recovery_error is their "
                            "sup-norm gap";
  rec.wall_seconds = sw.seconds();

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string p = prefix_of(c);
    const auto save_profile = [&](const PiecewiseProfile& prof,
                                  const std::string& tag) {
      const fs::path path = out_dir / (p + "-" + tag + ".csv");
      write_text(path, profile_csv(prof));
      rec.snapshot_paths.push_back(path.string());
    };
    save_profile(step0, "step-initial");
    save_profile(step_t, "step-final");
    save_profile(ramp0, "ramp-initial");
    save_profile(ramp_t, "ramp-final");
    rec.wall_seconds = sw.seconds();
    write_text(out_dir / (p + "-record.json"), record_to_json(rec));
    append_record_csv(out_dir / "records.csv", rec);
  }
  return rec;
}

ScenarioConfig with_family(ScenarioConfig c, const std::string& family,
                           double value) {
  PerturbationSpec s = c.perturbation.value_or(PerturbationSpec{});
  if (family == "x_max") {
    s.kind = PerturbationKind::truncate;
    s.param = value;
  } else if (family == "dI") {
    s.kind = PerturbationKind::digitize;
    s.param = value;
  } else if (family == "k_max") {
    s.kind = PerturbationKind::bandlimit;
    s.param = value;
  } else if (family == "beta_low" || family == "beta_high") {
    s.kind = PerturbationKind::scale_tail;
    if (!(s.param > 0.0))
      throw std::invalid_argument(
          "beta families need the tail radius in the base perturbation param");
    s.beta = value;
  } else {
    throw std::invalid_argument("unknown threshold family '" + family + "'");
  }
  c.perturbation = s;
  c.label = family + " = " + fmt(value);
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(System system) {
  switch (system) {
    case System::nls1d:
      return "nls1d";
    case System::nls2d:
      return "nls2d";
    case System::phi4:
      return "phi4";
    case System::burgers:
      return "burgers";
  }
  throw std::invalid_argument("to_string: unknown system");
}

System system_from(const std::string& name) {
  if (name == "nls1d") return System::nls1d;
  if (name == "nls2d") return System::nls2d;
  if (name == "phi4") return System::phi4;
  if (name == "burgers") return System::burgers;
  throw std::invalid_argument("unknown system '" + name + "'");
}

ScenarioConfig default_config(System system) {
  ScenarioConfig c;
  c.system = system;
  switch (system) {
    case System::nls1d:
      c.x_min = -32.0 * kPi;
      c.x_max = 32.0 * kPi;
      c.n = Eigen::Index(1) << 14;
      c.snapshot_stride = 50;
      c.endpoint = 0.95;
      break;
    case System::nls2d:
      c.x_max = 30.0;
      c.n = Eigen::Index(1) << 15;
      c.snapshot_stride = 500;
      c.endpoint = 0.4;
      c.step.cfl_like_factor = 0.05;
      break;
    case System::phi4:
      c.x_min = -32.0;
      c.x_max = 32.0;
      c.n = Eigen::Index(1) << 12;
      c.snapshot_stride = 64;
      c.endpoint = 75.0;
      break;
    case System::burgers:
      c.endpoint = 4.0;
      c.ic = "shock_identity";
      break;
  }
  return c;
}

void validate(const ScenarioConfig& c) {
  if (!(c.endpoint > 0.0))
    throw std::invalid_argument("scenario '" + c.name +
                                "': endpoint must be positive");
  if (c.reversal_depth && !(*c.reversal_depth > 0.0))
    throw std::invalid_argument("scenario '" + c.name +
                                "': reversal_depth must be positive");
  static const std::map<System, std::vector<std::string>> known = {
      {System::nls1d, {"fusion", "solitary"}},
      {System::nls2d, {"gaussian", "solitary"}},
      {System::phi4, {"kink_antikink"}},
      {System::burgers, {"shock_identity"}},
  };
  const auto& names = known.at(c.system);
  if (std::find(names.begin(), names.end(), c.ic) == names.end())
    throw std::invalid_argument("scenario '" + c.name + "': unknown ic '" +
                                c.ic + "' for system " + to_string(c.system));
  if (c.system == System::burgers) return;
  if (c.n <= 0)
    throw std::invalid_argument("scenario '" + c.name +
                                "': sample count must be positive");
  if (c.system != System::nls2d && !(c.x_max > c.x_min))
    throw std::invalid_argument("scenario '" + c.name + "': empty domain");
  if (c.system == System::nls2d && !(c.x_max > 0.0))
    throw std::invalid_argument("scenario '" + c.name +
                                "': radial extent must be positive");
  if (c.snapshot_stride <= 0)
    throw std::invalid_argument("scenario '" + c.name +
                                "': snapshot_stride must be positive");
}

ExperimentRecord run_reversal_experiment(const ScenarioConfig& config,
                                         const fs::path& out_dir) {
  validate(config);
  switch (config.system) {
    case System::nls1d:
    case System::nls2d:
      return nls_finish(config, nls_forward(config), out_dir);
    case System::phi4:
      return phi4_experiment(config, out_dir);
    case System::burgers:
      return burgers_experiment(config, out_dir);
  }
  throw std::invalid_argument("run_reversal_experiment: unknown system");
}

ThresholdResult threshold_bisect(const ScenarioConfig& base,
                                 const std::string& family, double lo,
                                 double hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("threshold_bisect: tol <= 0");
  if (!(hi > lo))
    throw std::invalid_argument("threshold_bisect: bracket is empty");
  if (base.system != System::nls1d && base.system != System::nls2d)
    throw std::invalid_argument(
        "threshold_bisect: families are beam perturbations");
  validate(with_family(base, family, lo));

  const NlsForward fwd = nls_forward(base);
  int probes = 0;
  const auto probe = [&](double value) {
    ExperimentRecord rec =
        nls_finish(with_family(base, family, value), fwd, {});
    ++probes;
    if (rec.verdict.outcome == Outcome::ambiguous)
      throw BracketError("ambiguous verdict at " + family + " = " +
                         fmt(value) + "; bisection halted");
    return rec;
  };

  double a = lo, b = hi;
  ExperimentRecord ra = probe(a);
  ExperimentRecord rb = probe(b);
  if (ra.verdict.outcome == rb.verdict.outcome)
    throw BracketError("no threshold in bracket: verdict at " + family +
                       " = " + fmt(a) + " is " +
                       to_string(ra.verdict.outcome) + ", at " + fmt(b) +
                       " is " + to_string(rb.verdict.outcome));

  const Outcome outcome_a = ra.verdict.outcome;
  int rounds = 0;
  while (b - a > tol) {
    if (++rounds > 200)
      throw std::runtime_error("threshold_bisect: bracket failed to close");
    const double mid = 0.5 * (a + b);
    ExperimentRecord rm = probe(mid);
    if (rm.verdict.outcome == outcome_a) {
      a = mid;
      ra = std::move(rm);
    } else {
      b = mid;
      rb = std::move(rm);
    }
  }

  const bool a_maintained = outcome_a == Outcome::split;
  const ExperimentRecord& maintained_rec = a_maintained ? ra : rb;
  ThresholdResult res;
  res.z_f = base.endpoint;
  res.family = family;
  res.x_th = 0.5 * (a + b);
  res.lost = a_maintained ? b : a;
  res.maintained = a_maintained ? a : b;
  res.delta_p_at_th = maintained_rec.metrics.delta_p;
  res.delta_h1_tilde_at_th = maintained_rec.metrics.delta_h1_tilde;
  res.probes = probes;
  return res;
}

std::vector<ThresholdResult> sweep_zf(const ScenarioConfig& base,
                                      const std::string& family, double lo,
                                      double hi,
                                      const std::vector<double>& zf_list,
                                      double tol) {
  if (zf_list.empty())
    throw std::invalid_argument("sweep_zf: empty endpoint list");
  for (std::size_t i = 1; i < zf_list.size(); ++i)
    if (!(zf_list[i] > zf_list[i - 1]))
      throw std::invalid_argument("sweep_zf: endpoints must increase");
  std::vector<ThresholdResult> out;
  out.reserve(zf_list.size());
  for (double zf : zf_list) {
    ScenarioConfig c = base;
    c.endpoint = zf;
    out.push_back(threshold_bisect(c, family, lo, hi, tol));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

PerturbationSpec make_spec(PerturbationKind kind, double param,
                           double beta = 0.0, double width = 1.0) {
  PerturbationSpec s;
  s.kind = kind;
  s.param = param;
  s.beta = beta;
  s.width = width;
  return s;
}

ScenarioConfig fusion_entry(const std::string& name) {
  ScenarioConfig c = default_config(System::nls1d);
  c.name = name;
  c.ic = "fusion";
  c.ic_params = {{"kappa", 90.0}, {"x0", 2.0}, {"theta", 7.0 * kPi / 8.0}};
  return c;
}

ScenarioConfig kg_entry(const std::string& name, double v) {
  ScenarioConfig c = default_config(System::phi4);
  c.name = name;
  c.ic = "kink_antikink";
  c.n = Eigen::Index(1) << 13;
  c.ic_params = {{"v", v}, {"x0", 7.9}, {"escape_radius", 6.0}};
  c.snapshot_stride = 16;
  return c;
}

std::vector<ScenarioConfig> build_catalog() {
  std::vector<ScenarioConfig> cat;

  {
    ScenarioConfig c = fusion_entry("fig1a-fusion");
    c.label = "two-beam fusion and its exact reversal";
    cat.push_back(c);
  }
  {
    ScenarioConfig c = fusion_entry("fig1d-truncate");
    c.label = "fusion output truncated beyond |x| = 13 before reversal";
    c.perturbation = make_spec(PerturbationKind::truncate, 13.0);
    cat.push_back(c);
  }
  {
    ScenarioConfig c = fusion_entry("fig2-bandlimit");
    c.label = "fusion output band-limited to |k| <= 1.2 pi before reversal";
    c.perturbation = make_spec(PerturbationKind::bandlimit, 1.2 * kPi);
    cat.push_back(c);
  }
  {
    ScenarioConfig c = fusion_entry("fig3-phaseflip");
    c.label = "fusion output with the tail past |x| = 13 phase-flipped";
    c.perturbation = make_spec(PerturbationKind::phase_flip_tail, 13.0);
    cat.push_back(c);
  }
  {
    ScenarioConfig c = fusion_entry("fig3-scaletail");
    c.label = "fusion output with the tail past |x| = 13 scaled by beta";
    c.perturbation = make_spec(PerturbationKind::scale_tail, 13.0, 1.3);
    cat.push_back(c);
  }
  const double blocks[] = {4.0, 8.0, 10.0, 11.0};
  const char* block_names[] = {"fig4a-block4", "fig4b-block8", "fig4c-block10",
                               "fig4d-block11"};
  for (int i = 0; i < 4; ++i) {
    ScenarioConfig c = fusion_entry(block_names[i]);
    c.label = "fusion output with a unit band blanked at |x| = " +
              fmt(blocks[i]);
    c.perturbation = make_spec(PerturbationKind::block, blocks[i]);
    cat.push_back(c);
  }
  {
    ScenarioConfig c = fusion_entry("fig5-digitize");
    c.label = "fusion output intensity-digitized in steps of 0.25";
    c.perturbation = make_spec(PerturbationKind::digitize, 0.25);
    cat.push_back(c);
  }
  {
    ScenarioConfig c = fusion_entry("fig6-sweep-base");
    c.label = "base scenario for truncation-threshold families";
    c.perturbation = make_spec(PerturbationKind::truncate, 14.0);
    cat.push_back(c);
  }
  {
    ScenarioConfig c = fusion_entry("fig8-cubic-control");
    c.label = "integrable cubic control: same beams, eps = 0, truncated";
    c.nls.epsilon = 0.0;
    c.perturbation = make_spec(PerturbationKind::truncate, 13.0);
    cat.push_back(c);
  }

  {
    ScenarioConfig c = default_config(System::nls2d);
    c.name = "fig6-2d-collapse";
    c.label = "collimated Gaussian beam through collapse arrest and back";
    c.ic = "gaussian";
    c.ic_params = {{"amplitude", 9.0}};
    c.step.cfl_like_factor = 0.0025;
    cat.push_back(c);
  }
  {
    ScenarioConfig c = default_config(System::nls2d);
    c.name = "fig7-2d-truncate";
    c.label = "Gaussian-beam output truncated at r = 17, reversed to -2 z_f";
    c.ic = "gaussian";
    c.ic_params = {{"amplitude", 9.0}};
    c.step.cfl_like_factor = 0.0025;
    c.perturbation = make_spec(PerturbationKind::truncate, 17.0);
    c.reversal_depth = 3.0 * c.endpoint;
    cat.push_back(c);
  }

  {
    ScenarioConfig c = kg_entry("fig7a-capture", 0.21);
    c.label = "kink-antikink capture below the escape band";
    cat.push_back(c);
  }
  {
    ScenarioConfig c = kg_entry("fig7b-twobounce", 0.19622);
    c.label = "two-bounce resonant escape window";
    cat.push_back(c);
  }
  {
    ScenarioConfig c = kg_entry("fig7c-onebounce", 0.5);
    c.label = "fast kink-antikink pass-through";
    cat.push_back(c);
  }
  {
    ScenarioConfig c = kg_entry("fig9-truncate", 0.21);
    c.label = "captured pair, truncated beyond |x| = 20 before reversal";
    c.perturbation = make_spec(PerturbationKind::truncate, 20.0);
    cat.push_back(c);
  }

  {
    ScenarioConfig c = default_config(System::burgers);
    c.name = "burgers-shock-identity";
    c.label = "step and pre-breaking ramp collapse onto one shock history";
    cat.push_back(c);
  }

  return cat;
}

}  // namespace

const std::vector<ScenarioConfig>& scenario_catalog() {
  static const std::vector<ScenarioConfig> catalog = build_catalog();
  return catalog;
}

ScenarioConfig catalog_lookup(const std::string& name) {
  for (const ScenarioConfig& c : scenario_catalog())
    if (c.name == name) return c;
  std::ostringstream os;
  os << "unknown scenario '" << name << "'; catalog:";
  for (const ScenarioConfig& c : scenario_catalog()) os << " " << c.name;
  throw std::invalid_argument(os.str());
}

// ---------------------------------------------------------------------------
// JSON and CSV

namespace {

json spec_to_json(const PerturbationSpec& s) {
  return json{{"kind", to_string(s.kind)},
              {"param", s.param},
              {"beta", s.beta},
              {"width", s.width}};
}

PerturbationSpec spec_from_json(const json& j) {
  PerturbationSpec s;
  s.kind = perturbation_kind_from(j.at("kind").get<std::string>());
  s.param = j.value("param", 0.0);
  s.beta = j.value("beta", 0.0);
  s.width = j.value("width", 1.0);
  return s;
}

json scenario_to_json_obj(const ScenarioConfig& c) {
  json j{{"name", c.name},
         {"label", c.label},
         {"seed", c.seed},
         {"system", to_string(c.system)},
         {"ic", c.ic},
         {"ic_params", c.ic_params},
         {"domain",
          {{"x_min", c.x_min},
           {"x_max", c.x_max},
           {"n", static_cast<std::int64_t>(c.n)}}},
         {"epsilon", c.nls.epsilon},
         {"step",
          {{"dz", c.step.dz},
           {"dz_min", c.step.dz_min},
           {"adapt", c.step.adapt},
           {"cfl_like_factor", c.step.cfl_like_factor}}},
         {"dt", c.dt},
         {"snapshot_stride", c.snapshot_stride},
         {"endpoint", c.endpoint}};
  if (c.reversal_depth) j["reversal_depth"] = *c.reversal_depth;
  if (c.perturbation) j["perturbation"] = spec_to_json(*c.perturbation);
  return j;
}

ScenarioConfig scenario_from_json_obj(const json& j) {
  ScenarioConfig c = default_config(system_from(j.at("system").get<std::string>()));
  c.name = j.value("name", c.name);
  c.label = j.value("label", c.label);
  c.seed = j.value("seed", c.seed);
  c.ic = j.value("ic", c.ic);
  if (j.contains("ic_params"))
    c.ic_params = j.at("ic_params").get<std::map<std::string, double>>();
  if (j.contains("domain")) {
    const json& d = j.at("domain");
    c.x_min = d.value("x_min", c.x_min);
    c.x_max = d.value("x_max", c.x_max);
    if (d.contains("n"))
      c.n = static_cast<Eigen::Index>(d.at("n").get<std::int64_t>());
  }
  c.nls.epsilon = j.value("epsilon", c.nls.epsilon);
  if (j.contains("step")) {
    const json& s = j.at("step");
    c.step.dz = s.value("dz", c.step.dz);
    c.step.dz_min = s.value("dz_min", c.step.dz_min);
    c.step.adapt = s.value("adapt", c.step.adapt);
    c.step.cfl_like_factor =
        s.value("cfl_like_factor", c.step.cfl_like_factor);
  }
  c.dt = j.value("dt", c.dt);
  c.snapshot_stride = j.value("snapshot_stride", c.snapshot_stride);
  c.endpoint = j.value("endpoint", c.endpoint);
  if (j.contains("reversal_depth"))
    c.reversal_depth = j.at("reversal_depth").get<double>();
  if (j.contains("perturbation") && !j.at("perturbation").is_null())
    c.perturbation = spec_from_json(j.at("perturbation"));
  return c;
}

}  // namespace

std::string scenario_to_json(const ScenarioConfig& config) {
  return scenario_to_json_obj(config).dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& text) {
  return scenario_from_json_obj(json::parse(text));
}

ScenarioConfig scenario_from_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json j;
  in >> j;
  return scenario_from_json_obj(j);
}

std::string record_to_json(const ExperimentRecord& record) {
  json m{{"delta_p", record.metrics.delta_p}, {"notes", record.metrics.notes}};
  if (record.metrics.delta_h1) m["delta_h1"] = *record.metrics.delta_h1;
  if (record.metrics.delta_h1_tilde)
    m["delta_h1_tilde"] = *record.metrics.delta_h1_tilde;
  if (record.metrics.delta_h_rel)
    m["delta_h_rel"] = *record.metrics.delta_h_rel;

  json v{{"outcome", to_string(record.verdict.outcome)},
         {"peak_count", record.verdict.peak_count},
         {"peak_positions", record.verdict.peak_positions}};
  json series = json::array();
  for (const auto& [z, sep] : record.verdict.separation_series)
    series.push_back({z, sep});
  v["separation_series"] = std::move(series);
  if (record.verdict.ellipse_extent)
    v["ellipse_extent"] = *record.verdict.ellipse_extent;

  json inv = json::object();
  for (const auto& [name, mm] : record.invariant_extremes)
    inv[name] = {mm.first, mm.second};

  json j{{"scenario", scenario_to_json_obj(record.scenario)},
         {"metrics", std::move(m)},
         {"verdict", std::move(v)},
         {"recovery_error", record.recovery_error},
         {"invariant_extremes", std::move(inv)},
         {"wall_seconds", record.wall_seconds},
         {"snapshot_paths", record.snapshot_paths}};
  return j.dump(2) + "\n";
}

std::string threshold_to_json(const ThresholdResult& result) {
  json j{{"z_f", result.z_f},
         {"family", result.family},
         {"x_th", result.x_th},
         {"lost", result.lost},
         {"maintained", result.maintained},
         {"delta_p_at_th", result.delta_p_at_th},
         {"probes", result.probes}};
  if (result.delta_h1_tilde_at_th)
    j["delta_h1_tilde_at_th"] = *result.delta_h1_tilde_at_th;
  return j.dump(2) + "\n";
}

FamilyConfig family_from_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json j;
  in >> j;
  FamilyConfig f;
  const json& base = j.at("base");
  if (base.is_string()) {
    const std::string name = base.get<std::string>();
    f.base = fs::exists(name) ? scenario_from_json_file(name)
                              : catalog_lookup(name);
  } else {
    f.base = scenario_from_json_obj(base);
  }
  f.family = j.at("family").get<std::string>();
  const auto& bracket = j.at("bracket");
  f.lo = bracket.at(0).get<double>();
  f.hi = bracket.at(1).get<double>();
  f.tol = j.value("tol", 0.05);
  if (j.contains("zf_list"))
    f.zf_list = j.at("zf_list").get<std::vector<double>>();
  return f;
}

void append_record_csv(const fs::path& path, const ExperimentRecord& record) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (fresh)
    out << "scenario,z_f,perturbation_kind,param,delta_p,delta_h1,"
           "delta_h1_tilde,verdict,recovery_error\n";

  const ScenarioConfig& c = record.scenario;
  out << prefix_of(c) << "," << fmt(c.endpoint) << ",";
  if (c.perturbation) {
    const PerturbationSpec& s = *c.perturbation;
    out << to_string(s.kind) << ","
        << fmt(s.kind == PerturbationKind::scale_tail ? s.beta : s.param);
  } else {
    out << "none,";
  }
  out << ",";
  const bool beam = c.system == System::nls1d || c.system == System::nls2d;
  if (beam) out << fmt(record.metrics.delta_p);
  out << ",";
  if (record.metrics.delta_h1) out << fmt(*record.metrics.delta_h1);
  out << ",";
  if (record.metrics.delta_h1_tilde)
    out << fmt(*record.metrics.delta_h1_tilde);
  out << "," << to_string(record.verdict.outcome) << ","
      << fmt(record.recovery_error) << "\n";
}

void append_threshold_csv(const fs::path& path, const ThresholdResult& result) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (fresh)
    out << "z_f,family,x_th,lost,maintained,delta_p_at_th,"
           "delta_h1_tilde_at_th,probes\n";
  out << fmt(result.z_f) << "," << result.family << "," << fmt(result.x_th)
      << "," << fmt(result.lost) << "," << fmt(result.maintained) << ","
      << fmt(result.delta_p_at_th) << ",";
  if (result.delta_h1_tilde_at_th) out << fmt(*result.delta_h1_tilde_at_th);
  out << "," << result.probes << "\n";
}

}  // namespace rvlab
