#include "nlcurv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "nlcurv/errors.hpp"
#include "nlcurv/functionals.hpp"
#include "nlcurv/mesh_io.hpp"
#include "nlcurv/oracles.hpp"
#include "nlcurv/parallel.hpp"
#include "nlcurv/primitives.hpp"

namespace nlcurv {

using nlohmann::ordered_json;

namespace {

template <typename T>
void require(bool ok, const std::string& what) {
  if (!ok) throw T(what);
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "raw") return Normalization::raw;
  if (s == "limit_normalized") return Normalization::limit_normalized;
  throw UsageError("unknown normalization '" + s + "'");
}

CodimMode codim_from_string(const std::string& s) {
  if (s == "hypersurface") return CodimMode::hypersurface;
  if (s == "projection") return CodimMode::projection;
  throw UsageError("unknown codimension mode '" + s + "'");
}

void validate(const RunConfig& c) {
  require<UsageError>(c.params.s > 0 && c.params.s < 1, "s must lie in (0,1)");
  require<UsageError>(c.params.p > 0, "p must be positive");
  require<UsageError>(std::isfinite(c.params.q), "q must be finite");
  if (c.command == "oracle") return;
  require<UsageError>(c.mesh.path.empty() != c.mesh.primitive.empty(),
                      "give exactly one mesh source (--mesh or --primitive)");
  if (c.mesh.resolution) require<UsageError>(*c.mesh.resolution >= 0, "resolution must be non-negative");
  require<UsageError>(c.mesh.radius > 0, "radius must be positive");
  require<UsageError>(c.mesh.amplitude >= 0 && c.mesh.amplitude < 1, "amplitude must lie in [0,1)");
  require<UsageError>(c.radii >= 1, "radii must be at least 1");
  require<UsageError>(c.max_radius_fraction > 0 && c.max_radius_fraction <= 1, "max radius fraction must lie in (0,1]");
  require<UsageError>(c.patch.grad_bound > 0, "grad bound must be positive");
  require<UsageError>(c.patch.grid_step >= 0, "grid step must be non-negative");
  require<UsageError>(c.sources >= 0 && c.steiner >= 1, "invalid chord-arc sampling");
  require<UsageError>(c.sphere_samples >= 1, "sphere samples must be positive");
  require<UsageError>(c.alpha > 0 && c.alpha < 1, "alpha must lie in (0,1)");
  require<UsageError>(c.sobolev_q >= 1, "sobolev q must be at least 1");
  require<UsageError>(c.beta > 0 && c.beta <= 1, "beta must lie in (0,1]");
  require<UsageError>(c.flow.max_iter >= 0, "max iterations must be non-negative");
  require<UsageError>(c.flow.step0 > 0 && c.flow.shrink > 0 && c.flow.shrink < 1, "invalid step settings");
  require<UsageError>(c.flow.fd_step > 0 && c.flow.grad_tol >= 0, "invalid gradient settings");
  require<UsageError>(c.snapshot_every >= 0, "snapshot interval must be non-negative");
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  j["target"] = c.target;
  ordered_json m;
  m["path"] = c.mesh.path;
  m["primitive"] = c.mesh.primitive;
  m["resolution"] = c.mesh.resolution ? ordered_json(*c.mesh.resolution) : ordered_json(nullptr);
  m["resolution_minor"] = c.mesh.resolution_minor;
  m["radius"] = c.mesh.radius;
  m["axes"] = c.mesh.axes;
  m["minor_radius"] = c.mesh.minor_radius;
  m["amplitude"] = c.mesh.amplitude;
  m["embed_in_3d"] = c.mesh.embed_in_3d;
  j["mesh"] = m;
  j["seed"] = c.seed;
  j["params"] = {{"s", c.params.s},
                 {"p", c.params.p},
                 {"q", c.params.q},
                 {"normalization", to_string(c.params.normalization)},
                 {"codim", to_string(c.params.codim)}};
  j["scheme"] = {{"order", to_string(c.order)}, {"diagonal", to_string(c.policy)}};
  j["tangent_point"] = c.tangent_point;
  j["probe"] = {{"vertex", c.vertex},
                {"radii", c.radii},
                {"max_radius_fraction", c.max_radius_fraction},
                {"grad_bound", c.patch.grad_bound},
                {"grid_step", c.patch.grid_step},
                {"holder_exponent", c.holder_auto ? ordered_json("auto") : ordered_json(c.patch.holder_exponent)},
                {"sources", c.sources},
                {"steiner", c.steiner},
                {"sphere_samples", c.sphere_samples}};
  j["sobolev"] = {{"kind", c.kind},
                  {"field", c.field},
                  {"l", c.harmonic_l},
                  {"m", c.harmonic_m},
                  {"alpha", c.alpha},
                  {"q", c.sobolev_q},
                  {"beta", c.beta},
                  {"distance", to_string(c.distance_mode)}};
  j["oracle_dim"] = c.oracle_dim;
  j["flow"] = {{"max_iter", c.flow.max_iter},
               {"step0", c.flow.step0},
               {"shrink", c.flow.shrink},
               {"min_step", c.flow.min_step},
               {"grad_tol", c.flow.grad_tol},
               {"normal_descent", c.flow.normal_descent},
               {"preconditioner", c.flow.preconditioner},
               {"smoothing", c.flow.smoothing},
               {"smoothing_weight", c.flow.smoothing_weight},
               {"fd_step", c.flow.fd_step},
               {"hausdorff_samples", c.flow.hausdorff_samples},
               {"snapshot_every", c.snapshot_every}};
  j["out_dir"] = c.out_dir;
  return j;
}

Surface load_source(const RunConfig& c) {
  if (!c.mesh.path.empty()) return load_mesh(c.mesh.path);
  const std::string& name = c.mesh.primitive;
  const int fallback = c.command == "flow" ? 2 : (name == "circle" ? 256 : name == "torus" ? 48 : 3);
  const int res = c.mesh.resolution.value_or(fallback);
  if (name == "icosahedron") return make_flat_icosahedron(c.mesh.radius, res);
  PrimitiveParams p;
  p.kind = primitive_kind_from_string(name == "sphere" ? "sphere_icosub" : name);
  p.resolution = res;
  p.resolution_minor = c.mesh.resolution_minor;
  p.radius = c.mesh.radius;
  p.axes = Eigen::Vector3d(c.mesh.axes[0], c.mesh.axes[1], c.mesh.axes[2]);
  p.minor_radius = c.mesh.minor_radius;
  p.amplitude = c.mesh.amplitude;
  p.seed = c.seed;
  p.embed_in_3d = c.mesh.embed_in_3d;
  return make_primitive(p);
}

ordered_json mesh_json(const Surface& m) {
  return {{"vertices", m.num_vertices()},
          {"elements", m.num_elements()},
          {"dim", m.dim()},
          {"ambient_dim", m.ambient_dim()},
          {"area", area(m)},
          {"diameter", m.diameter()}};
}

ordered_json energy_json(const EnergyReport<double>& r, int dim) {
  return {{"quantity", r.quantity},
          {"energy", r.energy},
          {"scheme", r.scheme},
          {"diagonal_policy", r.diagonal_policy},
          {"scaling_exponent", dim - r.params.s * r.params.p},
          {"wall_time_s", r.wall_time_s}};
}

ordered_json oracle_json(const OracleValue& v) {
  ordered_json inputs = ordered_json::object();
  for (const auto& [k, x] : v.inputs) inputs[k] = x;
  return {{"quantity", v.quantity},
          {"inputs", inputs},
          {"value", v.value},
          {"method", v.method},
          {"error_estimate", v.error_estimate}};
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

struct Outcome {
  ordered_json result;
  ordered_json mesh;
  std::vector<std::string> warnings;
  std::string summary;
};

Outcome run_oracle(const RunConfig& c) {
  const double R = c.mesh.radius;
  OracleValue v;
  if (c.target == "circle_fmc") {
    v = circle_fmc_oracle(R, c.params.s);
  } else if (c.target == "sphere_fmc") {
    v = sphere_fmc_oracle(R, c.params.s);
  } else if (c.target == "tangent_radius_circle") {
    v = tangent_radius_circle_oracle(R);
  } else if (c.target == "scaling_exponent") {
    v = scaling_exponent_oracle(c.oracle_dim, c.params.s, c.params.p);
  } else if (c.target == "circle_tangent_point") {
    const IntegrationResult r = circle_tangent_point_energy(R, c.params.p, c.params.q);
    v = {"circle_tangent_point", {{"R", R}, {"p", c.params.p}, {"q", c.params.q}}, r.value,
         "adaptive Gauss-Kronrod on the 1-D reduction", r.error};
  } else {
    throw UsageError("unknown oracle quantity '" + c.target + "'");
  }
  Outcome o;
  o.result = oracle_json(v);
  o.summary = o.result.dump();
  return o;
}

Outcome run_eval(const RunConfig& c, const Surface& mesh, int workers) {
  Outcome o;
  const auto scheme = build_scheme(mesh, c.order, c.policy);
  ordered_json list = ordered_json::array();
  std::string summary;
  if (mesh.is_hypersurface() && c.params.codim == CodimMode::hypersurface) {
    const auto w = willmore_energy(mesh, scheme, c.params, workers);
    list.push_back(energy_json(w, mesh.dim()));
    summary += "W=" + fmt(w.energy) + " ";
  }
  const auto b = bending_energy(mesh, scheme, c.params, workers);
  list.push_back(energy_json(b, mesh.dim()));
  summary += "B=" + fmt(b.energy);
  if (c.tangent_point) {
    const auto t = tangent_point_energy(mesh, scheme, c.params, workers);
    list.push_back(energy_json(t, mesh.dim()));
    summary += " T=" + fmt(t.energy);
  }
  if (!c.params.subcritical(mesh.dim())) o.warnings.push_back("p <= d/s: the energy is not subcritical");
  o.result = {{"energies", list}};
  o.summary = summary;
  return o;
}

std::vector<double> ahlfors_radii(const Surface& mesh, const RunConfig& c) {
  const double rmax = c.max_radius_fraction * mesh.diameter();
  std::vector<double> radii;
  for (int k = 0; k < c.radii; ++k) radii.push_back(rmax * std::pow(0.5, c.radii - 1 - k));
  return radii;
}

Outcome run_probe(const RunConfig& c, const Surface& mesh, int workers) {
  Outcome o;
  auto check_vertex = [&](long v) {
    if (v < 0 || v >= mesh.num_vertices()) throw UsageError("vertex index out of range");
  };
  if (c.target == "ahlfors") {
    check_vertex(c.vertex);
    const auto ratios = ahlfors_ratio(mesh, c.vertex, ahlfors_radii(mesh, c));
    ordered_json rows = ordered_json::array();
    double lo = INFINITY;
    for (const auto& [r, q] : ratios) {
      rows.push_back({{"r", r}, {"ratio", q}});
      lo = std::min(lo, q);
    }
    o.result = {{"probe", "ahlfors"}, {"vertex", c.vertex}, {"ratios", rows}, {"min_ratio", lo}};
    o.summary = "ahlfors min ratio " + fmt(lo);
  } else if (c.target == "chordarc") {
    const ChordArcResult r = chord_arc_constant(mesh, c.sources, c.seed, workers, c.steiner);
    o.result = {{"probe", "chordarc"},
                {"gamma", r.gamma},
                {"witness", {r.witness_a, r.witness_b}},
                {"sources", r.sources},
                {"steiner", c.steiner}};
    o.summary = "chord-arc gamma " + fmt(r.gamma);
  } else if (c.target == "patch") {
    PatchOptions popt = c.patch;
    if (c.holder_auto) {
      const double sigma = c.params.s - mesh.dim() / c.params.p;
      popt.holder_exponent = sigma > 0 ? sigma : c.params.s;
    }
    if (c.vertex < 0) {
      const Eigen::VectorXd radii = patch_radius_field(mesh, popt, workers);
      o.result = {{"probe", "patch"},
                  {"radii", std::vector<double>(radii.data(), radii.data() + radii.size())},
                  {"min_radius", radii.minCoeff()},
                  {"max_radius", radii.maxCoeff()}};
      o.summary = "patch radius in [" + fmt(radii.minCoeff()) + ", " + fmt(radii.maxCoeff()) + "]";
    } else {
      check_vertex(c.vertex);
      const PatchChart p = extract_patch(mesh, c.vertex, popt);
      o.result = {{"probe", "patch"},
                  {"vertex", c.vertex},
                  {"radius", p.radius},
                  {"spacing", p.spacing},
                  {"nodes", p.size()},
                  {"grad_sup", p.grad_sup},
                  {"grad_holder", p.grad_holder},
                  {"holder_exponent", p.holder_exponent}};
      o.summary = "patch radius " + fmt(p.radius);
    }
  } else if (c.target == "stability") {
    const StabilityReport r = stability_probe(mesh, c.alpha, c.sobolev_q, c.sphere_samples, workers);
    o.result = {{"probe", "stability"},
                {"center", std::vector<double>(r.center.data(), r.center.data() + r.center.size())},
                {"R0", r.R0},
                {"u_seminorm", r.u_seminorm},
                {"u_seminorm_over_R0", r.u_seminorm / r.R0},
                {"hausdorff", r.hausdorff},
                {"starshaped", r.starshaped}};
    o.summary = "stability R0 " + fmt(r.R0) + " seminorm " + fmt(r.u_seminorm) + " hausdorff " + fmt(r.hausdorff);
  } else {
    throw UsageError("unknown probe '" + c.target + "' (ahlfors, chordarc, patch, stability)");
  }
  return o;
}

Eigen::VectorXd field_values(const RunConfig& c, const Surface& mesh) {
  const Eigen::Index V = mesh.num_vertices();
  if (c.field == "x" || c.field == "y" || c.field == "z") {
    const int k = c.field[0] - 'x';
    if (k >= mesh.ambient_dim()) throw UsageError("coordinate field beyond the ambient dimension");
    return mesh.vertices().col(k);
  }
  if (c.field == "harmonic") {
    if (mesh.ambient_dim() != 3) throw UsageError("harmonic fields need a surface in 3-space");
    if (c.harmonic_l < 0 || std::abs(c.harmonic_m) > c.harmonic_l) throw UsageError("invalid harmonic degree/order");
    Eigen::VectorXd out(V);
    for (Eigen::Index v = 0; v < V; ++v) {
      const Eigen::Vector3d x = mesh.vertices().row(v).transpose();
      out(v) = real_spherical_harmonic(c.harmonic_l, c.harmonic_m, x.normalized());
    }
    return out;
  }
  throw UsageError("unknown field '" + c.field + "' (x, y, z, harmonic)");
}

Outcome run_sobolev(const RunConfig& c, const Surface& mesh, int workers) {
  const ScalarField<double> f(mesh, field_values(c, mesh));
  Outcome o;
  double value;
  if (c.kind == "sobolev") {
    value = sobolev_seminorm(f, c.alpha, c.sobolev_q, c.distance_mode, workers);
  } else if (c.kind == "holder") {
    value = holder_seminorm(f, c.beta, c.distance_mode, workers);
  } else if (c.kind == "lq") {
    value = lq_norm(f, c.sobolev_q);
  } else {
    throw UsageError("unknown seminorm kind '" + c.kind + "' (sobolev, holder, lq)");
  }
  o.result = {{"kind", c.kind},
              {"field", c.field},
              {"alpha", c.alpha},
              {"q", c.sobolev_q},
              {"beta", c.beta},
              {"distance", to_string(c.distance_mode)},
              {"value", value}};
  o.summary = c.kind + " = " + fmt(value);
  return o;
}

std::string snapshot_name(int iteration) {
  std::ostringstream s;
  s << "snapshot_" << std::setw(4) << std::setfill('0') << iteration << ".off";
  return s.str();
}

Outcome run_flow(const RunConfig& c, const Surface& mesh, int workers) {
  namespace fs = std::filesystem;
  FlowOptions opt = c.flow;
  opt.workers = workers;
  if (c.snapshot_every > 0) {
    opt.on_accept = [&](const FlowState& st) {
      if (st.accepted % c.snapshot_every == 0)
        write_off((fs::path(c.out_dir) / snapshot_name(st.iteration)).string(), st.mesh);
    };
  }
  const FlowState st = minimize(mesh, {c.order, c.policy}, c.params, opt);
  std::ofstream csv(fs::path(c.out_dir) / "trajectory.csv");
  csv << "iteration,energy,area,grad_norm,hausdorff\n" << std::setprecision(17);
  for (const TrajectoryRow& r : st.trajectory)
    csv << r.iteration << ',' << r.energy << ',' << r.area << ',' << r.grad_norm << ',' << r.hausdorff << '\n';
  write_off((fs::path(c.out_dir) / "final.off").string(), st.mesh);
  Outcome o;
  o.warnings = st.warnings;
  const double h0 = st.trajectory.front().hausdorff, h1 = st.trajectory.back().hausdorff;
  o.result = {{"iterations", st.iteration},
              {"accepted", st.accepted},
              {"stop_reason", st.stop_reason},
              {"initial_energy", st.trajectory.front().energy},
              {"energy", st.energy},
              {"area", st.area},
              {"grad_norm", st.grad_norm},
              {"step", st.step},
              {"initial_hausdorff", h0},
              {"hausdorff", h1}};
  o.summary = "flow " + std::to_string(st.accepted) + " accepted steps, energy " + fmt(st.trajectory.front().energy) +
              " -> " + fmt(st.energy) + ", hausdorff " + fmt(h0) + " -> " + fmt(h1);
  return o;
}

void write_report(const RunConfig& c, const ordered_json& report) {
  std::ofstream f(std::filesystem::path(c.out_dir) / "report.json");
  f << report.dump(2) << '\n';
}

}  // namespace

RunConfig parse_config(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Nonlocal curvature functionals on meshes"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file with option defaults; flags take precedence");

  std::string primitive, order = "", diagonal = "", normalization = "raw", codim = "hypersurface",
                         distance = "extrinsic";
  std::vector<double> axes;
  app.add_option("--mesh", c.mesh.path, "input OFF or OBJ file");
  app.add_option("--primitive", c.mesh.primitive,
                 "circle, sphere, ellipsoid, torus, perturbed_sphere, icosahedron");
  app.add_option("--sub,--resolution", c.mesh.resolution, "subdivision level or segment count");
  app.add_option("--resolution-minor", c.mesh.resolution_minor);
  app.add_option("--radius,--R", c.mesh.radius);
  app.add_option("--axes", axes, "ellipsoid semi-axes")->expected(3);
  app.add_option("--minor-radius", c.mesh.minor_radius);
  app.add_option("--amp", c.mesh.amplitude, "perturbation amplitude");
  app.add_flag("--embed-3d", c.mesh.embed_in_3d, "circle as a space curve");
  app.add_option("--seed", c.seed);
  app.add_option("--s", c.params.s, "fractional order in (0,1)");
  app.add_option("--p", c.params.p, "outer exponent");
  app.add_option("--q", c.params.q, "tangent-point exponent");
  app.add_option("--normalization", normalization, "raw or limit_normalized");
  app.add_option("--codim", codim, "hypersurface or projection");
  app.add_option("--order", order, "centroid, gauss3 or gauss7");
  app.add_option("--diagonal", diagonal, "skip_same_element or skip_vertex_star");
  app.add_option("--out", c.out_dir, "output directory");
  app.add_option("--workers", c.workers, "worker threads (default NLCURV_WORKERS)");

  auto* eval = app.add_subcommand("eval", "fractional Willmore and bending energies");
  eval->add_flag("--tangent-point", c.tangent_point, "also evaluate the tangent-point energy");

  auto* probe = app.add_subcommand("probe", "geometric probes");
  probe->add_option("kind", c.target, "ahlfors, chordarc, patch or stability")->required();
  probe->add_option("--vertex", c.vertex, "base vertex (patch: -1 for every vertex)");
  probe->add_option("--radii", c.radii, "number of dyadic radii");
  probe->add_option("--max-radius-fraction", c.max_radius_fraction, "largest radius over the diameter");
  probe->add_option("--grad-bound", c.patch.grad_bound);
  probe->add_option("--grid-step", c.patch.grid_step, "0 picks diameter/400");
  auto* holder = probe->add_option("--holder-exponent", c.patch.holder_exponent);
  probe->add_option("--sources", c.sources, "chord-arc source vertices (0: all)");
  probe->add_option("--steiner", c.steiner, "Steiner points per edge of the geodesic graph");
  probe->add_option("--alpha", c.alpha);
  probe->add_option("--sobolev-q", c.sobolev_q);
  probe->add_option("--sphere-samples", c.sphere_samples);

  auto* sob = app.add_subcommand("sobolev", "fractional Sobolev, Hoelder and Lebesgue norms of vertex fields");
  sob->add_option("--kind", c.kind, "sobolev, holder or lq");
  sob->add_option("--field", c.field, "x, y, z or harmonic");
  sob->add_option("--l", c.harmonic_l);
  sob->add_option("--m", c.harmonic_m);
  sob->add_option("--alpha", c.alpha);
  sob->add_option("--sobolev-q", c.sobolev_q);
  sob->add_option("--beta", c.beta);
  sob->add_option("--distance", distance, "extrinsic or intrinsic");

  auto* flow = app.add_subcommand("flow", "area-constrained descent on the bending energy");
  flow->add_option("--max-iter", c.flow.max_iter);
  flow->add_option("--step0", c.flow.step0, "largest trial displacement in mean edge lengths");
  flow->add_option("--shrink", c.flow.shrink);
  flow->add_option("--min-step", c.flow.min_step);
  flow->add_option("--grad-tol", c.flow.grad_tol);
  flow->add_option("--fd-step", c.flow.fd_step);
  flow->add_option("--preconditioner", c.flow.preconditioner, "smoothing weight of the normal speed (0: off)");
  bool full_gradient = false;
  flow->add_flag("--full-gradient", full_gradient, "descend along the raw gradient");
  flow->add_flag("--smoothing", c.flow.smoothing, "tangential smoothing of each trial");
  flow->add_option("--smoothing-weight", c.flow.smoothing_weight);
  flow->add_option("--hausdorff-samples", c.flow.hausdorff_samples);
  flow->add_option("--snapshot-every", c.snapshot_every, "write an OFF snapshot every k accepted steps");

  auto* oracle = app.add_subcommand("oracle", "closed-form reference values");
  oracle->add_option("quantity", c.target,
                     "circle_fmc, sphere_fmc, tangent_radius_circle, scaling_exponent, circle_tangent_point")
      ->required();
  oracle->add_option("--dim", c.oracle_dim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    c.help = app.help();
    return c;
  } catch (const CLI::CallForAllHelp&) {
    c.help = app.help("", CLI::AppFormatMode::All);
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* sub : {eval, probe, sob, flow, oracle})
    if (sub->parsed()) c.command = sub->get_name();

  if (axes.size() == 3) c.mesh.axes = {axes[0], axes[1], axes[2]};
  c.params.normalization = normalization_from_string(normalization);
  c.params.codim = codim_from_string(codim);
  try {
    const bool flow_cmd = c.command == "flow";
    c.order = quadrature_order_from_string(order.empty() ? (flow_cmd ? "centroid" : "gauss3") : order);
    c.policy = diagonal_policy_from_string(
        diagonal.empty() ? (flow_cmd ? "skip_same_element" : "skip_vertex_star") : diagonal);
    c.distance_mode = distance_mode_from_string(distance);
  } catch (const InvalidParams& e) {
    throw UsageError(e.what());
  }
  c.holder_auto = holder->count() == 0;
  c.flow.normal_descent = !full_gradient;
  if (full_gradient) c.flow.preconditioner = 0;
  validate(c);
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const int workers = c.workers > 0 ? c.workers : default_workers();
  ordered_json report;
  report["schema_version"] = kReportSchemaVersion;
  report["command"] = c.command;
  report["config"] = config_json(c);
  try {
    std::filesystem::create_directories(c.out_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    throw UsageError(std::string("output directory not writable: ") + e.what());
  }
  try {
    Outcome o;
    if (c.command == "oracle") {
      o = run_oracle(c);
    } else {
      const Surface mesh = load_source(c);
      o.mesh = mesh_json(mesh);
      if (c.command == "eval") {
        const Outcome r = run_eval(c, mesh, workers);
        o.result = r.result, o.warnings = r.warnings, o.summary = r.summary;
      } else if (c.command == "probe") {
        const Outcome r = run_probe(c, mesh, workers);
        o.result = r.result, o.summary = r.summary;
      } else if (c.command == "sobolev") {
        const Outcome r = run_sobolev(c, mesh, workers);
        o.result = r.result, o.summary = r.summary;
      } else {
        const Outcome r = run_flow(c, mesh, workers);
        o.result = r.result, o.warnings = r.warnings, o.summary = r.summary;
      }
    }
    if (!o.mesh.is_null()) report["mesh"] = o.mesh;
    report["result"] = o.result;
    report["warnings"] = o.warnings;
    report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_report(c, report);
    for (const auto& w : o.warnings) err << "warning: " << w << '\n';
    out << o.summary << '\n';
    return 0;
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    report["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    write_report(c, report);
    out << ordered_json{{"kind", e.kind()}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    report["error"] = {{"kind", "InternalError"}, {"message", e.what()}};
    write_report(c, report);
    out << ordered_json{{"kind", "InternalError"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig c = parse_config(argc, argv);
    if (!c.help.empty()) {
      out << c.help;
      return 0;
    }
    return run(c, out, err);
  } catch (const UsageError& e) {
    err << ordered_json{{"kind", e.kind()}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
}

}  // namespace nlcurv
