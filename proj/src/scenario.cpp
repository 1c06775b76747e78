#include "cptgrowth/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cpt {

using nlohmann::json;

WeightingFunction Scenario::weighting_function() const {
  return WeightingFunction::from_kind(weighting, jz, power_exponent);
}

std::string Scenario::label() const {
  char buf[96];
  const char* wname = weighting == WeightingKind::Identity ? "identity"
                      : weighting == WeightingKind::Power  ? "power"
                                                           : "jinzhou";
  if (benchmark.kind == BenchmarkKind::ConstantExcess)
    std::snprintf(buf, sizeof buf, "c%g_g%g_%s", benchmark.c, benchmark.g, wname);
  else
    std::snprintf(buf, sizeof buf, "c%g_k%g_%s", benchmark.c, benchmark.k, wname);
  return buf;
}

namespace {

Scenario base_scenario() {
  Scenario s;
  s.market = MarketParams{0.02, 0.2, 1.0, 1.0};
  s.benchmark = Benchmark{BenchmarkKind::ConstantExcess, 0.0, 0.0, 0.1};
  s.utility = UtilityParams{0.88, 0.88, 2.5};
  const double sigma_rho = KernelLaw::from(s.market).sigma_rho;
  s.jz = JinZhouParams{0.3, 1.6 * sigma_rho, 0.8 * sigma_rho};
  return s;
}

}  // namespace

RunManifest default_manifest() {
  RunManifest mf;
  const Scenario base = base_scenario();
  for (double c : {0.1, 0.2, 0.3})
    for (double g : {0.0, 0.05, -0.05})
      for (WeightingKind w :
           {WeightingKind::Identity, WeightingKind::Power, WeightingKind::JinZhou}) {
        Scenario s = base;
        s.benchmark.c = c;
        s.benchmark.g = g;
        s.weighting = w;
        mf.scenarios.push_back(s);
      }
  return mf;
}

RunManifest manifest_from_json_text(const std::string& json_text) {
  json cfg = json::parse(json_text);
  RunManifest mf;
  Scenario base = base_scenario();

  if (cfg.contains("market")) {
    const json& m = cfg["market"];
    base.market.r = m.value("r", base.market.r);
    base.market.theta_norm = m.value("theta_norm", base.market.theta_norm);
    base.market.T = m.value("T", base.market.T);
    base.market.x0 = m.value("x0", base.market.x0);
    const double sigma_rho = KernelLaw::from(base.market).sigma_rho;
    base.jz = JinZhouParams{0.3, 1.6 * sigma_rho, 0.8 * sigma_rho};
  }
  if (cfg.contains("utility")) {
    const json& u = cfg["utility"];
    base.utility.alpha = u.value("alpha", base.utility.alpha);
    base.utility.beta = u.value("beta", base.utility.beta);
    base.utility.kappa = u.value("kappa", base.utility.kappa);
  }
  if (cfg.contains("weighting_params")) {
    const json& wp = cfg["weighting_params"];
    if (wp.contains("jinzhou")) {
      const json& z = wp["jinzhou"];
      base.jz.p_bar = z.value("p_bar", base.jz.p_bar);
      base.jz.a_bar = z.value("a_bar", base.jz.a_bar);
      base.jz.b_bar = z.value("b_bar", base.jz.b_bar);
    }
    if (wp.contains("power"))
      base.power_exponent = wp["power"].value("exponent", base.power_exponent);
  }
  if (cfg.contains("grids")) {
    const json& gr = cfg["grids"];
    base.grids.phi_points = gr.value("phi_points", base.grids.phi_points);
    base.grids.rho_points = gr.value("rho_points", base.grids.rho_points);
    base.grids.exposure_points =
        gr.value("exposure_points", base.grids.exposure_points);
    base.grids.gh_nodes = gr.value("gh_nodes", base.grids.gh_nodes);
  }

  std::vector<double> cs = cfg.contains("matrix") && cfg["matrix"].contains("c")
                               ? cfg["matrix"]["c"].get<std::vector<double>>()
                               : std::vector<double>{0.1, 0.2, 0.3};
  std::vector<double> gs = cfg.contains("matrix") && cfg["matrix"].contains("g")
                               ? cfg["matrix"]["g"].get<std::vector<double>>()
                               : std::vector<double>{0.0, 0.05, -0.05};
  std::vector<std::string> ws =
      cfg.contains("matrix") && cfg["matrix"].contains("weightings")
          ? cfg["matrix"]["weightings"].get<std::vector<std::string>>()
          : std::vector<std::string>{"identity", "power", "jinzhou"};

  for (double c : cs)
    for (double g : gs)
      for (const std::string& w : ws) {
        Scenario s = base;
        s.benchmark.c = c;
        s.benchmark.g = g;
        s.weighting = weighting_kind_from_string(w);
        mf.scenarios.push_back(s);
      }

  mf.out_dir = cfg.value("out", mf.out_dir);
  mf.seed = cfg.value("seed", mf.seed);
  return mf;
}

RunManifest manifest_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return manifest_from_json_text(ss.str());
}

Scenario apply_overrides(Scenario s, const std::string& spec) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::domain_error("scenario override must be key=value: " + item);
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "c")
      s.benchmark.c = std::stod(val);
    else if (key == "g") {
      s.benchmark.g = std::stod(val);
      s.benchmark.kind = BenchmarkKind::ConstantExcess;
    } else if (key == "k") {
      s.benchmark.k = std::stod(val);
      s.benchmark.kind = BenchmarkKind::KernelPower;
    } else if (key == "weighting")
      s.weighting = weighting_kind_from_string(val);
    else if (key == "r")
      s.market.r = std::stod(val);
    else if (key == "theta")
      s.market.theta_norm = std::stod(val);
    else if (key == "T")
      s.market.T = std::stod(val);
    else if (key == "x0")
      s.market.x0 = std::stod(val);
    else if (key == "alpha")
      s.utility.alpha = std::stod(val);
    else if (key == "beta")
      s.utility.beta = std::stod(val);
    else if (key == "kappa")
      s.utility.kappa = std::stod(val);
    else if (key == "b_bar")
      s.jz.b_bar = std::stod(val);
    else if (key == "a_bar")
      s.jz.a_bar = std::stod(val);
    else if (key == "p_bar")
      s.jz.p_bar = std::stod(val);
    else
      throw std::domain_error("unknown scenario key: " + key);
  }
  return s;
}

}  // namespace cpt
