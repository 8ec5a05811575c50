#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "euafnet/kst.hpp"
#include "euafnet/rng.hpp"
#include "euafnet/serialize.hpp"
#include "json.hpp"
#include "cli_commands.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace euafnet;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("euafnet_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

nlohmann::json read_json(const fs::path& p) {
  return nlohmann::json::parse(read_text(p));
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char ch : text) {
    if (ch == '\n') ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("output directory resolution prefers flag, then environment") {
  setenv("EUAFNET_OUT_DIR", "/tmp/euafnet_envdir", 1);
  CHECK(cli::resolve_out_dir("flagdir") == "flagdir");
  CHECK(cli::resolve_out_dir("") == "/tmp/euafnet_envdir");
  unsetenv("EUAFNET_OUT_DIR");
  CHECK(cli::resolve_out_dir("") == "out");
}

TEST_CASE("fit command writes a manifest, report, and error table") {
  const fs::path dir = fresh_dir("fit_ok");
  cli::FitConfig cfg;
  cfg.target = "linear";
  cfg.eps_list = {0.2};
  cfg.grid = 101;
  cfg.out_dir = dir.string();
  REQUIRE(cli::cmd_fit(cfg) == cli::kExitOk);

  const nlohmann::json manifest = read_json(dir / "fit_linear.manifest.json");
  CHECK(manifest.at("command") == "fit");
  CHECK(manifest.at("target") == "linear");
  CHECK(manifest.at("grid") == 101);
  REQUIRE(manifest.at("results").size() == 1);
  CHECK(manifest.at("results")[0].at("tolerance_met") == true);
  CHECK(manifest.at("outputs").size() == 2);

  const nlohmann::json report =
      read_json(dir / "fit_linear_eps0.2.report.json");
  CHECK(report.at("tolerance_met") == true);
  CHECK(report.at("sup_error").get<double>() < 1e-9);
  // The embedded network is a full serialized document.
  const FeedforwardNetwork net =
      deserialize_network(report.at("network").dump());
  CHECK(net.width() == 36);
  CHECK(net.depth() == 5);

  const std::string csv = read_text(dir / "fit_linear_eps0.2.errors.csv");
  CHECK(csv.rfind("x,f,phi,abs_err\n", 0) == 0);
  CHECK(line_count(csv) == 102);  // header plus one row per grid point
  fs::remove_all(dir);
}

TEST_CASE("fit command signals an unmet tolerance through its exit code") {
  const fs::path dir = fresh_dir("fit_unmet");
  cli::FitConfig cfg;
  cfg.target = "sin2pi";
  cfg.eps_list = {1e-9};
  cfg.budget = 50000;
  cfg.grid = 101;
  cfg.out_dir = dir.string();
  REQUIRE(cli::cmd_fit(cfg) == cli::kExitUnmet);
  const nlohmann::json report =
      read_json(dir / "fit_sin2pi_eps1e-09.report.json");
  CHECK(report.at("tolerance_met") == false);
  CHECK(report.at("sup_error").get<double>() > 1e-9);
  fs::remove_all(dir);
}

TEST_CASE("compose command emits the composition, summary, and error grid") {
  const fs::path dir = fresh_dir("compose_ok");
  cli::ComposeConfig cfg;
  cfg.triple = "d1";
  cfg.eps_list = {0.5};
  cfg.grid = 201;
  cfg.out_dir = dir.string();
  REQUIRE(cli::cmd_compose(cfg) == cli::kExitOk);

  const nlohmann::json summary =
      read_json(dir / "compose_d1_eps0.5.summary.json");
  CHECK(summary.at("tolerance_met") == true);
  CHECK(summary.at("sup_error").get<double>() < 0.5);
  CHECK(summary.at("neuron_count").at("total") == 731);
  CHECK(summary.at("neuron_count").at("formula") ==
        "731 = 183×3 + 1 + 180 + 1");
  CHECK(summary.at("outer_arg_min").get<double>() >= 0.0);
  CHECK(summary.at("outer_arg_max").get<double>() <= 1.0);
  REQUIRE(summary.at("branches").size() == 3);

  const std::string csv = read_text(dir / "compose_d1_eps0.5.errors.csv");
  CHECK(csv.rfind("x1,f,phi,abs_err\n", 0) == 0);
  CHECK(line_count(csv) == 202);

  const KstComposition comp = deserialize_composition(
      read_text(dir / "compose_d1_eps0.5.composition.json"));
  CHECK(comp.d() == 1);
  CHECK(comp.branch_count() == 3);
  CHECK(count_intrinsic_neurons(comp).total == 731);
  fs::remove_all(dir);
}

TEST_CASE("witness command certifies random and on-disk networks") {
  const fs::path out = fresh_dir("witness_out");
  const fs::path nets = fresh_dir("witness_nets");
  {
    Rng rng(99);
    std::ofstream ok(nets / "a_ok.json");
    ok << serialize_network(test::random_narrow_net(3, rng));
  }
  {
    // Width 3 on three inputs: the certificate does not apply, so the file
    // must be skipped rather than certified.
    std::vector<AffineLayer> layers;
    layers.push_back(AffineLayer{3, 3, std::vector<double>(9, 0.25),
                                 std::vector<double>(3, 0.0), true});
    layers.push_back(AffineLayer{3, 1, std::vector<double>(3, 1.0), {0.0},
                                 false});
    std::ofstream wide(nets / "b_wide.json");
    wide << serialize_network(FeedforwardNetwork(3, std::move(layers)));
  }

  cli::WitnessConfig cfg;
  cfg.d = 3;
  cfg.count = 20;
  cfg.nets_dir = nets.string();
  cfg.out_dir = out.string();
  REQUIRE(cli::cmd_witness(cfg) == cli::kExitOk);

  const nlohmann::json manifest = read_json(out / "witness_d3.manifest.json");
  CHECK(manifest.at("count") == 20);
  CHECK(manifest.at("certified") == 21);
  CHECK(manifest.at("all_hold") == true);
  CHECK(manifest.at("c_star").get<double>() == 1.0);
  REQUIRE(manifest.at("skipped").size() == 1);
  CHECK(manifest.at("skipped")[0] == "b_wide.json");

  const std::string csv = read_text(out / "witness_gaps.csv");
  CHECK(csv.rfind("id,gap,value_at_origin,value_at_witness,certified_floor,holds\n",
                  0) == 0);
  CHECK(line_count(csv) == 22);
  CHECK(csv.find("random_0,") != std::string::npos);
  CHECK(csv.find("a_ok.json,") != std::string::npos);
  CHECK(csv.find("b_wide.json") == std::string::npos);

  const nlohmann::json reports = read_json(out / "witness_reports.json");
  REQUIRE(reports.size() == 21);
  for (const nlohmann::json& r : reports) {
    CHECK(r.at("holds") == true);
    CHECK(r.at("gap").get<double>() >= 0.5 - 1e-9);
  }
  fs::remove_all(out);
  fs::remove_all(nets);
}

TEST_CASE("identical configurations reproduce identical bytes") {
  cli::FitConfig cfg;
  cfg.target = "sin2pi";
  cfg.eps_list = {0.2};
  cfg.grid = 101;
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  cfg.out_dir = a.string();
  REQUIRE(cli::cmd_fit(cfg) == cli::kExitOk);
  cfg.out_dir = b.string();
  REQUIRE(cli::cmd_fit(cfg) == cli::kExitOk);
  for (const char* name : {"fit_sin2pi.manifest.json",
                           "fit_sin2pi_eps0.2.report.json",
                           "fit_sin2pi_eps0.2.errors.csv"}) {
    CHECK(read_text(a / name) == read_text(b / name));
  }
  fs::remove_all(a);
  fs::remove_all(b);

  cli::WitnessConfig wcfg;
  wcfg.d = 2;
  wcfg.count = 10;
  const fs::path wa = fresh_dir("det_wa");
  const fs::path wb = fresh_dir("det_wb");
  wcfg.out_dir = wa.string();
  REQUIRE(cli::cmd_witness(wcfg) == cli::kExitOk);
  wcfg.out_dir = wb.string();
  REQUIRE(cli::cmd_witness(wcfg) == cli::kExitOk);
  CHECK(read_text(wa / "witness_gaps.csv") == read_text(wb / "witness_gaps.csv"));
  CHECK(read_text(wa / "witness_reports.json") ==
        read_text(wb / "witness_reports.json"));
  fs::remove_all(wa);
  fs::remove_all(wb);
}

TEST_CASE("the built-in self test passes") {
  REQUIRE(cli::cmd_selftest() == cli::kExitOk);
}
