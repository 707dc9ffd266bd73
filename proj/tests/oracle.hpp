/* Copyright 2026 The costtune Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef COSTTUNE_TESTS_ORACLE_HPP_
#define COSTTUNE_TESTS_ORACLE_HPP_

// Reference implementations used only by tests. Written independently of the
// library: long double arithmetic, different evaluation order, brute force.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <tuple>
#include <vector>

namespace oracle {

struct Coeffs {
  long double a_n = 0, c_n = 0, e_star = 0, theta = 0;
  long double c0 = 0, c_b = 0, c_k = 0;
  long double dataset = 1;
  long double price_per_worker_hr = 0;
};

struct Eval {
  long double noise, epochs, iterations, tau, time_s, cost_usd;
};

inline Eval evaluate(const Coeffs& c, int workers, int batch) {
  Eval e{};
  e.noise = c.c_n + c.a_n * std::pow(static_cast<long double>(batch), -0.5L);
  e.epochs = c.theta * e.noise + c.e_star;
  e.iterations = c.dataset * e.epochs / batch;
  e.tau = c.c_k * workers + c.c_b * (static_cast<long double>(batch) / workers) + c.c0;
  e.time_s = e.tau * e.iterations;
  e.cost_usd = workers * c.price_per_worker_hr * (e.time_s / 3600.0L);
  return e;
}

inline double rel_err(double got, double want) {
  if (want == 0.0) return std::fabs(got);
  return std::fabs(got - want) / std::fabs(want);
}

// Ordinary least squares y ~ X b via normal equations and Gauss-Jordan
// elimination with partial pivoting.
inline std::vector<long double> least_squares(
    const std::vector<std::vector<long double>>& x, const std::vector<long double>& y) {
  const std::size_t p = x.front().size();
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0));
  for (std::size_t r = 0; r < x.size(); ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) a[i][j] += x[r][i] * x[r][j];
      a[i][p] += x[r][i] * y[r];
    }
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k <= p; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::vector<long double> b(p);
  for (std::size_t i = 0; i < p; ++i) b[i] = a[i][p] / a[i][i];
  return b;
}

struct Pt {
  int k, b;
  double t, c;
};

inline bool dominates(const Pt& a, const Pt& b) {
  return a.t <= b.t && a.c <= b.c && (a.t < b.t || a.c < b.c);
}

// Indices of non-dominated points.
inline std::vector<std::size_t> pareto(const std::vector<Pt>& pts) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i && dominates(pts[j], pts[i])) dominated = true;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

// Offline kneedle over points sorted by strictly increasing t. Returns the
// index of the knee, or nullopt when the fallback applies.
inline std::optional<std::size_t> kneedle(const std::vector<Pt>& curve) {
  const std::size_t n = curve.size();
  if (n < 3) return std::nullopt;
  const double t0 = curve.front().t, t1 = curve.back().t;
  double cmin = curve[0].c, cmax = curve[0].c;
  for (const auto& p : curve) {
    cmin = std::min(cmin, p.c);
    cmax = std::max(cmax, p.c);
  }
  if (cmax == cmin || t1 == t0) return std::nullopt;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (curve[i].t - t0) / (t1 - t0);
    y[i] = (curve[i].c - cmin) / (cmax - cmin);
  }
  const bool decreasing = y.back() <= y.front();
  double above = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double chord = y.front() + (y.back() - y.front()) * x[i];
    above += y[i] - chord;
  }
  const bool concave = above / static_cast<double>(n - 2) > 0;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    double xi = x[i], yi = y[i];
    if (decreasing && !concave) {
      yi = 1 - yi;
    } else if (!decreasing && !concave) {
      xi = 1 - xi;
      yi = 1 - yi;
    } else if (decreasing && concave) {
      xi = 1 - xi;
    }
    d[i] = yi - xi;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (d[i] > d[best] + 1e-12) best = i;
  }
  return best;
}

enum class Goal { kDeadline, kBudget, kKnee, kMinCostTime };

// Brute-force selection. Returns the index of the chosen point, or nullopt
// when nothing is feasible.
inline std::optional<std::size_t> select(const std::vector<Pt>& pts, Goal goal,
                                         double limit, std::optional<double> deadline,
                                         std::optional<double> budget) {
  std::vector<std::size_t> feasible;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool ok = true;
    if (goal == Goal::kDeadline && pts[i].t > limit) ok = false;
    if (goal == Goal::kBudget && pts[i].c > limit) ok = false;
    if (deadline && pts[i].t > *deadline) ok = false;
    if (budget && pts[i].c > *budget) ok = false;
    if (ok) feasible.push_back(i);
  }
  if (feasible.empty()) return std::nullopt;
  auto key = [&](std::size_t i) {
    const Pt& p = pts[i];
    double primary = 0;
    switch (goal) {
      case Goal::kDeadline: primary = p.c; break;
      case Goal::kBudget: primary = p.t; break;
      case Goal::kMinCostTime: primary = p.t * p.c; break;
      case Goal::kKnee: primary = 0; break;
    }
    return std::make_tuple(primary, p.c, p.t, p.k, p.b);
  };
  if (goal != Goal::kKnee) {
    std::size_t best = feasible.front();
    for (std::size_t i : feasible) {
      if (key(i) < key(best)) best = i;
    }
    return best;
  }
  // Knee: pareto frontier of the feasible points, then kneedle, falling back
  // to min cost*time on the frontier.
  std::vector<Pt> sub;
  for (std::size_t i : feasible) sub.push_back(pts[i]);
  std::vector<std::size_t> front;
  for (std::size_t j : pareto(sub)) front.push_back(feasible[j]);
  std::sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
    return std::make_tuple(pts[a].t, pts[a].c, pts[a].k, pts[a].b) <
           std::make_tuple(pts[b].t, pts[b].c, pts[b].k, pts[b].b);
  });
  std::vector<std::size_t> curve_idx;
  for (std::size_t i : front) {
    if (!curve_idx.empty() && pts[curve_idx.back()].t == pts[i].t) continue;
    curve_idx.push_back(i);
  }
  std::vector<Pt> curve;
  for (std::size_t i : curve_idx) curve.push_back(pts[i]);
  if (const auto knee = kneedle(curve)) return curve_idx[*knee];
  std::size_t best = curve_idx.front();
  for (std::size_t i : curve_idx) {
    const auto ki = std::make_tuple(pts[i].t * pts[i].c, pts[i].t, pts[i].c, pts[i].k);
    const auto kb =
        std::make_tuple(pts[best].t * pts[best].c, pts[best].t, pts[best].c, pts[best].k);
    if (ki < kb) best = i;
  }
  return best;
}

}  // namespace oracle

#endif  // COSTTUNE_TESTS_ORACLE_HPP_
