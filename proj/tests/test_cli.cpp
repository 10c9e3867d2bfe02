#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nlcurv/cli.hpp"
#include "nlcurv/errors.hpp"

using namespace nlcurv;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "nlcurv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nlcurv_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  return json::parse(f);
}

json without_times(json j) {
  if (j.is_object()) {
    j.erase("wall_time_s");
    for (auto& [k, v] : j.items()) v = without_times(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = without_times(v);
  }
  return j;
}

}  // namespace

TEST_CASE("oracle command prints the closed form") {
  const fs::path dir = scratch("oracle");
  const Result r = call({"oracle", "circle_fmc", "--R", "1", "--s", "0.5", "--out", dir.string()});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(-3.70815).epsilon(1e-5));
  CHECK(j["quantity"] == "circle_fmc");
  CHECK(read_json(dir / "report.json")["schema_version"] == kReportSchemaVersion);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(call({"eval", "--primitive", "sphere", "--s", "1.5"}).code == 2);
  CHECK(call({"eval", "--primitive", "sphere", "--bogus"}).code == 2);
  CHECK(call({"eval"}).code == 2);
  CHECK(call({"eval", "--primitive", "sphere", "--order", "gauss5"}).code == 2);
  CHECK(call({}).code == 2);
  const Result usage = call({"probe", "nowhere", "--primitive", "sphere", "--sub", "0", "--out",
                             scratch("usage").string()});
  CHECK(usage.code == 2);
  CHECK(json::parse(usage.err)["kind"] == "UsageError");
  CHECK_THROWS_AS(parse_config(3, std::vector<const char*>{"nlcurv", "eval", "--p=-1"}.data()), UsageError);
}

TEST_CASE("parse_config defaults and precedence") {
  const std::vector<const char*> argv{"nlcurv", "eval", "--primitive", "sphere", "--sub", "3", "--s", "0.5", "--p", "4"};
  const RunConfig c = parse_config(static_cast<int>(argv.size()), argv.data());
  CHECK(c.command == "eval");
  CHECK(c.params.s == 0.5);
  CHECK(c.params.p == 4.0);
  CHECK(c.order == QuadratureOrder::gauss3);
  CHECK(c.policy == DiagonalPolicy::skip_vertex_star);
  CHECK(c.params.normalization == Normalization::raw);
  CHECK(c.mesh.resolution == 3);

  const fs::path dir = scratch("config");
  {
    std::ofstream f(dir / "run.toml");
    f << "p = 3\ns = 0.25\n";
  }
  const std::string cfg = (dir / "run.toml").string();
  const std::vector<const char*> with_flag{"nlcurv", "--config", cfg.c_str(), "eval", "--primitive", "sphere", "--p", "6"};
  const RunConfig d = parse_config(static_cast<int>(with_flag.size()), with_flag.data());
  CHECK(d.params.p == 6.0);
  CHECK(d.params.s == 0.25);
}

TEST_CASE("computation errors exit with 1 and a typed record") {
  const fs::path dir = scratch("nonmanifold");
  {
    std::ofstream f(dir / "fan.off");
    f << "OFF\n5 3 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n0 -1 0\n3 0 1 2\n3 1 0 3\n3 0 1 4\n";
  }
  const Result r = call({"eval", "--mesh", (dir / "fan.off").string(), "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["kind"] == "NonManifoldError");
  CHECK(read_json(dir / "report.json")["error"]["kind"] == "NonManifoldError");

  const Result missing = call({"eval", "--mesh", (dir / "absent.off").string(), "--out", dir.string()});
  CHECK(missing.code == 1);
}

TEST_CASE("eval reports are reproducible") {
  const fs::path a = scratch("eval_a"), b = scratch("eval_b");
  const Result r1 = call({"eval", "--primitive", "ellipsoid", "--sub", "1", "--p", "6", "--q", "8", "--tangent-point", "--workers",
                          "1", "--out", a.string()});
  const Result r2 = call({"eval", "--primitive", "ellipsoid", "--sub", "1", "--p", "6", "--q", "8", "--tangent-point", "--workers",
                          "3", "--out", b.string()});
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  json ja = without_times(read_json(a / "report.json")), jb = without_times(read_json(b / "report.json"));
  ja["config"].erase("out_dir");
  jb["config"].erase("out_dir");
  CHECK(ja.dump() == jb.dump());
  CHECK(ja["result"]["energies"].size() == 3);
  CHECK(ja["config"]["params"]["p"] == 6.0);
  CHECK(r1.err.empty());
}

TEST_CASE("probe and sobolev commands") {
  const fs::path dir = scratch("probes");
  for (const char* kind : {"ahlfors", "chordarc", "stability"}) {
    const Result r = call({"probe", kind, "--primitive", "sphere", "--sub", "2", "--sources", "8", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(read_json(dir / "report.json")["result"]["probe"] == kind);
  }
  CHECK(call({"probe", "patch", "--primitive", "sphere", "--sub", "2", "--vertex", "3", "--grid-step", "0.02", "--out",
              dir.string()})
            .code == 0);
  CHECK(read_json(dir / "report.json")["result"]["radius"].get<double>() > 0.3);
  CHECK(call({"probe", "patch", "--primitive", "sphere", "--vertex", "100000", "--out", dir.string()}).code == 2);
  CHECK(call({"sobolev", "--primitive", "sphere", "--sub", "2", "--field", "x", "--out", dir.string()}).code == 0);
  CHECK(read_json(dir / "report.json")["result"]["value"].get<double>() > 0);
  CHECK(call({"sobolev", "--primitive", "circle", "--field", "y", "--kind", "holder", "--out", dir.string()}).code == 0);
}

TEST_CASE("flow writes a monotone trajectory and snapshots") {
  const fs::path dir = scratch("flow");
  const Result r = call({"flow", "--primitive", "perturbed_sphere", "--sub", "1", "--amp", "0.1", "--seed", "3", "--p",
                         "6", "--max-iter", "6", "--snapshot-every", "2", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  std::ifstream csv(dir / "trajectory.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "iteration,energy,area,grad_norm,hausdorff");
  double last = INFINITY;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    std::getline(ss, cell, ',');
    const double e = std::stod(cell);
    CHECK(e <= last);
    last = e;
    ++rows;
  }
  const json rep = read_json(dir / "report.json");
  CHECK(rows == rep["result"]["accepted"].get<int>() + 1);
  CHECK(fs::exists(dir / "final.off"));
  CHECK(fs::exists(dir / "snapshot_0002.off"));
  CHECK(rep["config"]["scheme"]["order"] == "centroid");

  const Result critical = call({"flow", "--primitive", "sphere", "--sub", "1", "--p", "3", "--max-iter", "1", "--out",
                                dir.string()});
  CHECK(critical.code == 0);
  CHECK(critical.err.find("warning") != std::string::npos);
}
