#include "cptgrowth/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cptgrowth/errors.hpp"
#include "cptgrowth/quadrature.hpp"
#include "cptgrowth/rootfind.hpp"

namespace cpt {

void QuantileCurve::validate() const {
  if (grid.size() != values.size() || grid.empty())
    throw std::domain_error("quantile curve: grid/value size mismatch");
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < grid[i + 1]))
      throw std::domain_error("quantile curve: grid must be strictly increasing");
    if (values[i] > values[i + 1] + 1e-12 * std::max(1.0, std::fabs(values[i])))
      throw std::domain_error("quantile curve: values must be nondecreasing");
  }
}

double QuantileCurve::operator()(double p) const {
  if (grid.empty()) throw std::domain_error("quantile curve: empty");
  if (p <= grid.front()) return values.front();
  if (p >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), p);
  const size_t i = size_t(it - grid.begin()) - 1;
  if (interpolation == Interp::PiecewiseConstantRightContinuous) return values[i];
  const double t = (p - grid[i]) / (grid[i + 1] - grid[i]);
  return values[i] + t * (values[i + 1] - values[i]);
}

double choquet_expectation(const QuantileCurve& q, const WeightingFunction& wf) {
  q.validate();
  const size_t n = q.grid.size();
  if (q.interpolation == Interp::PiecewiseConstantRightContinuous) {
    // sum of level * distorted mass of its constancy interval
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double lo = i == 0 ? 0.0 : q.grid[i];
      const double hi = i + 1 < n ? q.grid[i + 1] : 1.0;
      total += q.values[i] * (wf.w(1.0 - lo) - wf.w(1.0 - hi));
    }
    return total;
  }
  return choquet_expectation([&q](double p) { return q(p); }, wf);
}

double choquet_expectation(const std::function<double(double)>& quantile,
                           const WeightingFunction& wf, double abs_tol) {
  // Lebesgue form after u = w(1-p): int_0^1 Q(1 - w^{-1}(u)) du, which keeps
  // the integrand bounded even when w' blows up at the corners.
  auto f = [&](double u) {
    const double x = wf.w_inv(std::clamp(u, 0.0, 1.0));
    const double p = std::clamp(1.0 - x, 1e-16, 1.0 - 1e-16);
    return quantile(p);
  };
  static const double kSplits[] = {1e-12, 1e-9, 1e-6, 1e-3, 1e-2, 0.1,  0.5,
                                   0.9,   0.99, 1.0 - 1e-3, 1.0 - 1e-6,
                                   1.0 - 1e-9, 1.0 - 1e-12};
  QuadResult r = integrate_segmented(f, 0.0, 1.0, kSplits, abs_tol);
  if (!r.converged)
    throw numerical_error("choquet_expectation: quadrature did not converge", r.error);
  return r.value;
}

ConcaveEnvelopeResult concave_envelope(std::span<const double> p,
                                       std::span<const double> f) {
  const size_t n = p.size();
  if (n < 2 || f.size() != n)
    throw std::domain_error("concave_envelope: need at least two samples");
  ConcaveEnvelopeResult out;
  std::vector<int>& hull = out.hull_indices;
  hull.push_back(0);
  for (size_t i = 1; i < n; ++i) {
    while (hull.size() >= 2) {
      const int i1 = hull[hull.size() - 2], i2 = hull.back();
      // pop i2 while it lies on or below the chord i1 -> i
      const double cross = (p[i2] - p[i1]) * (f[i] - f[i1]) -
                           (f[i2] - f[i1]) * (p[i] - p[i1]);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(int(i));
  }
  out.hat.resize(n);
  out.hat_prime.resize(n);
  for (size_t seg = 0; seg + 1 < hull.size(); ++seg) {
    const int i1 = hull[seg], i2 = hull[seg + 1];
    const double slope = (f[i2] - f[i1]) / (p[i2] - p[i1]);
    for (int i = i1; i < i2; ++i) {
      out.hat[i] = f[i1] + slope * (p[i] - p[i1]);
      out.hat_prime[i] = slope;
    }
  }
  out.hat[n - 1] = f[n - 1];
  out.hat_prime[n - 1] = out.hat_prime[n - 2];
  return out;
}

namespace {

constexpr double kGapMeasureFloor = 1e-9;   // narrower hull gaps are treated as noise

struct GapPolisher {
  const std::function<double(double)>& phi_prime;
  const std::vector<double>& grid;
  const std::vector<double>& phi;

  double phi_local(int j, double t) const {
    // exact value a short step away from a grid node
    return phi[j] + integrate(phi_prime, grid[j], t, 1e-14, 1e-12).value;
  }

  // tangency of the chord anchored at (pa, fa): phi'(t) = (phi(t) - fa)/(t - pa)
  // searched in a bracket around grid index j
  bool polish_anchor(double pa, double fa, int j, bool anchor_left, double* t_out,
                     double* slope_out) const {
    const int n = int(grid.size());
    const int j_lo = std::max(anchor_left ? 1 : 0, j - 1);
    const int j_hi = std::min(n - 1 - (anchor_left ? 0 : 1), j + 1);
    auto g = [&](double t) {
      return phi_prime(t) * (t - pa) - (phi_local(j, t) - fa);
    };
    double lo = grid[j_lo], hi = grid[j_hi];
    if (g(lo) * g(hi) > 0.0) return false;
    const double t = solve_bisect(g, lo, hi, 1e-14);
    *t_out = t;
    *slope_out = phi_prime(t);
    return true;
  }
};

}  // namespace

PhiCurve build_phi(const std::function<double(double)>& eta_quantile,
                   const WeightingFunction& wf, int n_grid) {
  if (n_grid < 3) throw std::domain_error("build_phi: n_grid too small");
  PhiCurve out;
  const int n_cells = n_grid - 1;
  out.grid_.resize(n_grid);
  for (int i = 0; i < n_grid; ++i)
    out.grid_[i] = 0.5 * (1.0 - std::cos(M_PI * double(i) / double(n_cells)));
  out.grid_.front() = 0.0;
  out.grid_.back() = 1.0;

  auto phi_prime = [eta_quantile, wf](double s) {
    const double x = std::clamp(wf.w_inv_complement(std::clamp(s, 0.0, 1.0)),
                                1e-16, 1.0 - 1e-16);
    return eta_quantile(x) / wf.w_prime(x);
  };
  out.phi_prime_ = phi_prime;

  // phi(1) = 0; accumulate exact cell integrals leftwards
  std::vector<double> cell(n_cells);
  for (int i = 0; i < n_cells; ++i) {
    QuadResult r = integrate(phi_prime, out.grid_[i], out.grid_[i + 1], 1e-13, 1e-10);
    if (!r.converged)
      throw numerical_error("build_phi: cell quadrature failed", r.error);
    cell[i] = r.value;
  }
  out.phi_.assign(n_grid, 0.0);
  for (int i = n_cells - 1; i >= 0; --i) out.phi_[i] = out.phi_[i + 1] - cell[i];

  // upper hull and gap identification
  ConcaveEnvelopeResult hull = concave_envelope(out.grid_, out.phi_);
  const double scale = std::max(1.0, std::fabs(out.phi_.front()));
  GapPolisher polisher{out.phi_prime_, out.grid_, out.phi_};

  std::vector<LinearSegment> collinear_runs;
  for (size_t seg = 0; seg + 1 < hull.hull_indices.size(); ++seg) {
    const int i1 = hull.hull_indices[seg], i2 = hull.hull_indices[seg + 1];
    if (i2 - i1 <= 1) continue;
    const double slope = (out.phi_[i2] - out.phi_[i1]) / (out.grid_[i2] - out.grid_[i1]);
    double max_excess = 0.0;
    for (int i = i1 + 1; i < i2; ++i) {
      const double chord = out.phi_[i1] + slope * (out.grid_[i] - out.grid_[i1]);
      max_excess = std::max(max_excess, chord - out.phi_[i]);
    }
    if (max_excess <= 1e-12 * scale) {
      // collinear run: phi itself is linear here, a flat but not a gap
      collinear_runs.push_back(
          {out.grid_[i1], out.grid_[i2], slope, out.phi_[i1], false});
      continue;
    }
    if (out.grid_[i2] - out.grid_[i1] < kGapMeasureFloor) continue;

    LinearSegment g{out.grid_[i1], out.grid_[i2], slope, out.phi_[i1], true};
    const bool left_anchored = (i1 == 0);
    const bool right_anchored = (i2 == n_grid - 1);
    if (left_anchored && !right_anchored) {
      double t, s;
      if (polisher.polish_anchor(out.grid_[0], out.phi_[0], i2, true, &t, &s)) {
        g.p_hi = t;
        g.slope = s;
      }
    } else if (right_anchored && !left_anchored) {
      double t, s;
      if (polisher.polish_anchor(out.grid_.back(), out.phi_.back(), i1, false, &t, &s)) {
        g.p_lo = t;
        g.slope = s;
        g.value_lo = polisher.phi_local(i1, t);
      }
    } else if (!left_anchored && !right_anchored) {
      // interior double tangency: alternate tangency updates from each side
      double x = out.grid_[i1], y = out.grid_[i2], s = g.slope;
      for (int it = 0; it < 60; ++it) {
        double xt, yt, sx, sy;
        const bool okl = polisher.polish_anchor(y, polisher.phi_local(i2, y), i1, false,
                                                &xt, &sx);
        if (okl) x = xt;
        const bool okr = polisher.polish_anchor(x, polisher.phi_local(i1, x), i2, true,
                                                &yt, &sy);
        if (okr) y = yt;
        const double s_new = (polisher.phi_local(i2, y) - polisher.phi_local(i1, x)) /
                             (y - x);
        if (std::fabs(s_new - s) < 1e-13 * std::max(1.0, std::fabs(s_new))) {
          s = s_new;
          break;
        }
        s = s_new;
        if (!okl && !okr) break;
      }
      g.p_lo = x;
      g.p_hi = y;
      g.slope = s;
      g.value_lo = polisher.phi_local(i1, x);
    }
    out.gaps_.push_back(g);
  }

  // phi_hat samples: phi lifted onto gap chords
  out.phi_hat_ = out.phi_;
  for (const LinearSegment& g : out.gaps_) {
    for (int i = 0; i < n_grid; ++i) {
      const double p = out.grid_[i];
      if (p >= g.p_lo && p <= g.p_hi)
        out.phi_hat_[i] = std::max(out.phi_hat_[i], g.value_lo + g.slope * (p - g.p_lo));
    }
  }

  // flats of phi_hat': chord gaps plus collinear stretches of phi itself
  out.flats_ = out.gaps_;
  for (const LinearSegment& r : collinear_runs) {
    bool covered = false;
    for (const LinearSegment& g : out.gaps_)
      if (g.p_lo <= r.p_hi && r.p_lo <= g.p_hi) covered = true;
    if (!covered) out.flats_.push_back(r);
  }
  std::sort(out.flats_.begin(), out.flats_.end(),
            [](const LinearSegment& a, const LinearSegment& b) { return a.p_lo < b.p_lo; });

  return out;
}

const LinearSegment* PhiCurve::segment_at(double p) const {
  for (const LinearSegment& g : gaps_)
    if (p >= g.p_lo && p < g.p_hi) return &g;
  return nullptr;
}

double PhiCurve::phi_value(double p) const {
  if (p <= 0.0) return phi_.front();
  if (p >= 1.0) return phi_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), p);
  const size_t i = size_t(it - grid_.begin()) - 1;
  // short integral from the nearer node keeps point queries at quadrature
  // accuracy rather than interpolation accuracy
  if (p - grid_[i] <= grid_[i + 1] - p)
    return phi_[i] + integrate(phi_prime_, grid_[i], p, 1e-14, 1e-12).value;
  return phi_[i + 1] - integrate(phi_prime_, p, grid_[i + 1], 1e-14, 1e-12).value;
}

double PhiCurve::phi_hat_value(double p) const {
  if (const LinearSegment* g = segment_at(p))
    return g->value_lo + g->slope * (p - g->p_lo);
  return phi_value(p);
}

double PhiCurve::phi_hat_prime(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("phi_hat_prime: p must be in [0,1]");
  if (const LinearSegment* g = segment_at(p)) return g->slope;
  // flats that are not hull gaps (exactly linear phi) carry their own slope
  for (const LinearSegment& f : flats_)
    if (!f.is_gap && p >= f.p_lo && p < f.p_hi) return f.slope;
  return phi_prime_(std::clamp(p, 1e-15, 1.0 - 1e-15));
}

double PhiCurve::terminal_slope() const {
  return phi_hat_prime(1.0 - 1e-12);
}

}  // namespace cpt
