#include "cptgrowth/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "cptgrowth/errors.hpp"

namespace cpt {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix, weights are mu0 * (first eigenvector component)^2.
GaussRule golub_welsch(int n, const std::function<double(int)>& off_diag, double mu0) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double bk = off_diag(k);
    J(k - 1, k) = bk;
    J(k, k - 1) = bk;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

std::map<int, GaussRule>& rule_cache(int which) {
  static std::map<int, GaussRule> legendre, hermite;
  return which == 0 ? legendre : hermite;
}
std::mutex cache_mutex;

}  // namespace

const GaussRule& legendre_rule(int n) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& cache = rule_cache(0);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto rule = golub_welsch(
        n, [](int k) { return k / std::sqrt(4.0 * k * k - 1.0); }, 2.0);
    it = cache.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

const GaussRule& hermite_rule(int n) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& cache = rule_cache(1);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto rule = golub_welsch(
        n, [](int k) { return std::sqrt(0.5 * k); }, std::sqrt(M_PI));
    it = cache.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

namespace {

struct PairEval {
  double coarse, fine, fine_abs;
};

PairEval eval_pair(const std::function<double(double)>& f, double a, double b) {
  const GaussRule& g7 = legendre_rule(7);
  const GaussRule& g15 = legendre_rule(15);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s7 = 0.0, s15 = 0.0, s15_abs = 0.0;
  for (int i = 0; i < 7; ++i) s7 += g7.weights[i] * f(mid + half * g7.nodes[i]);
  for (int i = 0; i < 15; ++i) {
    const double fi = f(mid + half * g15.nodes[i]);
    s15 += g15.weights[i] * fi;
    s15_abs += g15.weights[i] * std::fabs(fi);
  }
  return {s7 * half, s15 * half, s15_abs * half};
}

void integrate_recursive(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol, int depth, QuadResult& out) {
  const PairEval pe = eval_pair(f, a, b);
  out.evals += 22;
  const double err = std::fabs(pe.fine - pe.coarse);
  // the embedded-pair estimate bottoms out at roundoff of the |f| mass; treat
  // that floor as converged so smooth panels never recurse to full depth
  const double target = std::max({abs_tol, rel_tol * std::fabs(pe.fine),
                                  5e-15 * pe.fine_abs});
  // width-floor panels are as converged as doubles allow
  if (err <= target || depth <= 0 || b - a < 1e-15 * (1.0 + std::fabs(a))) {
    out.value += pe.fine;
    out.error += err;
    if (depth <= 0 && err > target) out.converged = false;
    return;
  }
  const double mid = 0.5 * (a + b);
  integrate_recursive(f, a, mid, 0.5 * abs_tol, rel_tol, depth - 1, out);
  integrate_recursive(f, mid, b, 0.5 * abs_tol, rel_tol, depth - 1, out);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_depth) {
  QuadResult out;
  if (a == b) return out;
  integrate_recursive(f, a, b, abs_tol, rel_tol, max_depth, out);
  return out;
}

QuadResult integrate_segmented(const std::function<double(double)>& f, double a, double b,
                               std::span<const double> points, double abs_tol,
                               double rel_tol) {
  std::vector<double> cuts{a, b};
  for (double p : points)
    if (p > a && p < b) cuts.push_back(p);
  std::sort(cuts.begin(), cuts.end());
  QuadResult total;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadResult part = integrate(f, cuts[i], cuts[i + 1], abs_tol / double(cuts.size()),
                                rel_tol);
    total.value += part.value;
    total.error += part.error;
    total.evals += part.evals;
    total.converged = total.converged && part.converged;
  }
  return total;
}

double gaussian_expectation(const std::function<double(double)>& f_of_z,
                            std::span<const double> splits, double abs_tol,
                            bool* truncated) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  auto weighted = [&](double z) {
    return f_of_z(z) * inv_sqrt_2pi * std::exp(-0.5 * z * z);
  };

  const double z_core = 8.5, z_cap = 16.0;
  double total = integrate_segmented(weighted, -z_core, z_core, splits, abs_tol).value;
  if (truncated) *truncated = false;

  // extend each tail until its segments stop mattering
  for (int side = 0; side < 2; ++side) {
    double inner = z_core;
    bool settled = false;
    double prev = std::numeric_limits<double>::infinity();
    while (inner < z_cap) {
      const double outer = std::min(inner + 1.5, z_cap);
      const double seg = side == 0
                             ? integrate(weighted, inner, outer, abs_tol, 1e-12).value
                             : integrate(weighted, -outer, -inner, abs_tol, 1e-12).value;
      total += seg;
      const double mag = std::fabs(seg);
      if (mag < std::max(abs_tol * 0.01, 1e-300) ||
          (mag < 1e-13 * std::max(1.0, std::fabs(total)) && mag <= prev)) {
        settled = true;
        break;
      }
      prev = mag;
      inner = outer;
    }
    if (!settled) {
      if (truncated)
        *truncated = true;
      else
        throw numerical_error("gaussian_expectation: tail did not settle by |z|=16",
                              prev);
    }
  }
  return total;
}

double gauss_hermite_expectation(const std::function<double(double)>& f_of_z, int n) {
  const GaussRule& rule = hermite_rule(n);
  static const double inv_sqrt_pi = 0.5641895835477562869;
  const double sqrt2 = std::sqrt(2.0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rule.weights[i] * f_of_z(sqrt2 * rule.nodes[i]);
  return sum * inv_sqrt_pi;
}

}  // namespace cpt
