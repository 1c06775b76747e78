#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cptgrowth/market.hpp"
#include "cptgrowth/utility.hpp"
#include "cptgrowth/weighting.hpp"

namespace cpt {

struct GridParams {
  int phi_points = 4001;
  int rho_points = 2001;
  int exposure_points = 101;
  int gh_nodes = 201;
};

// One cell of the experiment matrix.
struct Scenario {
  MarketParams market;
  Benchmark benchmark;
  UtilityParams utility;
  WeightingKind weighting = WeightingKind::Identity;
  JinZhouParams jz;            // sized from sigma_rho by default
  double power_exponent = 0.5;
  GridParams grids;

  WeightingFunction weighting_function() const;
  std::string label() const;   // e.g. c0.1_g0.05_identity
};

struct RunManifest {
  std::vector<Scenario> scenarios;
  std::string out_dir = "out";
  std::uint64_t seed = 20240901;
};

// The reference study matrix: c in {0.1, 0.2, 0.3} x g in {0, 0.05, -0.05}
// x three weightings, r = 0.02, |theta| = 0.2, T = 1, x0 = 1.
RunManifest default_manifest();

// JSON config; every omitted key falls back to the reference study values.
RunManifest manifest_from_json_text(const std::string& json_text);
RunManifest manifest_from_file(const std::string& path);

// "c=0.3,g=0,weighting=identity" style single-cell override.
Scenario apply_overrides(Scenario base, const std::string& spec);

}  // namespace cpt
