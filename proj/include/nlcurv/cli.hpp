#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlcurv/flow.hpp"
#include "nlcurv/parameters.hpp"
#include "nlcurv/probes.hpp"
#include "nlcurv/quadrature.hpp"
#include "nlcurv/seminorms.hpp"

namespace nlcurv {

inline constexpr int kReportSchemaVersion = 1;

struct MeshSource {
  std::string path;
  /// circle, sphere_icosub (alias sphere), ellipsoid, torus,
  /// perturbed_sphere, icosahedron
  std::string primitive;
  /// subdivision level or segment count; unset picks the command default
  std::optional<int> resolution;
  int resolution_minor = 0;
  double radius = 1.0;
  std::array<double, 3> axes{1.0, 1.0, 2.0};
  double minor_radius = 0.5;
  double amplitude = 0.0;
  bool embed_in_3d = false;
};

struct RunConfig {
  std::string command;
  /// probe kind (ahlfors, chordarc, patch, stability) or oracle quantity
  std::string target;
  MeshSource mesh;
  std::uint64_t seed = 0;
  EnergyParameters params;
  QuadratureOrder order = QuadratureOrder::gauss3;
  DiagonalPolicy policy = DiagonalPolicy::skip_vertex_star;
  bool tangent_point = false;

  // probes
  long vertex = 0;
  int radii = 8;
  double max_radius_fraction = 0.2;
  PatchOptions patch;
  /// patch Hoelder exponent: s - d/p when positive, else s, unless given
  bool holder_auto = true;
  int sources = 32;
  int steiner = kDefaultSteinerPoints;
  int sphere_samples = 2000;

  // sobolev
  std::string kind = "sobolev";
  std::string field = "z";
  int harmonic_l = 2, harmonic_m = 0;
  double alpha = 0.5;
  double sobolev_q = 2.0;
  double beta = 0.5;
  DistanceMode distance_mode = DistanceMode::extrinsic;

  // oracle
  int oracle_dim = 2;

  FlowOptions flow;
  int snapshot_every = 0;

  std::string out_dir = ".";
  /// not part of the report: results never depend on it
  int workers = 0;
  /// non-empty when --help was requested
  std::string help;
};

/// Parses flags and an optional --config file (TOML/INI; flags win). Throws
/// UsageError on unknown flags or out-of-range values.
RunConfig parse_config(int argc, const char* const* argv);

/// Executes the command, writes report.json (plus trajectory.csv and OFF
/// snapshots for `flow`) into out_dir and echoes a one-line summary.
/// Returns 0 on success and 1 on a computation error; errors are also
/// written as a JSON record with their `kind`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + run with exit code 2 on usage errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlcurv
