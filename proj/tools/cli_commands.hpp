#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace euafnet::cli {

// Exit codes shared by every subcommand: 0 on success, 2 when the run
// completed but a tolerance or certificate check failed, 1 on usage or
// runtime errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitUnmet = 2;

// Default output directory: --out flag, else the EUAFNET_OUT_DIR environment
// variable, else "./out".
std::string resolve_out_dir(const std::string& flag_value);

struct FitConfig {
  std::string target = "sin2pi";
  double a = 0.0;
  double b = 1.0;
  bool domain_set = false;   // when false, the target's default interval
  std::vector<double> eps_list = {0.2};
  std::uint64_t seed = 1;
  std::int64_t budget = 200000;
  int grid = 2001;
  std::string out_dir;
};

struct ComposeConfig {
  std::string triple = "d2";
  double a = 0.0;
  double b = 1.0;
  std::vector<double> eps_list = {0.5};
  std::uint64_t seed = 1;
  std::int64_t budget = 200000;
  int grid = 0;  // 0 = per-dimension default
  std::string out_dir;
};

struct WitnessConfig {
  int d = 3;
  int count = 100;
  std::uint64_t seed = 1;
  std::string nets_dir;  // optional: also certify stored networks
  std::string out_dir;
};

int cmd_fit(const FitConfig& cfg);
int cmd_compose(const ComposeConfig& cfg);
int cmd_witness(const WitnessConfig& cfg);
int cmd_selftest();

}  // namespace euafnet::cli
