// Independent reference computations for the tests: composite Gauss-Legendre
// quadrature on the sine-series interpolant, golden-section search and dense
// scans. Nothing here calls the transforms of the library.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

struct Rule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

inline Rule gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

/// Values of v(x) = sum c_k sin(k pi x / L) and v'(x) at the nodes of a
/// composite Gauss-Legendre rule on (0, L).
struct Samples {
  std::vector<double> x, w, v, dv;
};

inline Samples sample_series(const std::vector<double>& c, double L, int panels = 10000, int order = 8) {
  const auto rule = gauss_legendre(order);
  Samples s;
  const double h = L / panels;
  for (int p = 0; p < panels; ++p) {
    for (int i = 0; i < order; ++i) {
      const double x = h * (p + 0.5 * (rule.x[i] + 1.0));
      double v = 0.0, dv = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0.0) continue;
        const double a = (k + 1.0) * std::numbers::pi / L;
        v += c[k] * std::sin(a * x);
        dv += c[k] * a * std::cos(a * x);
      }
      s.x.push_back(x);
      s.w.push_back(0.5 * h * rule.w[i]);
      s.v.push_back(v);
      s.dv.push_back(dv);
    }
  }
  return s;
}

inline double integrate(const Samples& s, const std::function<double(double v, double dv, double x)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) sum += s.w[i] * f(s.v[i], s.dv[i], s.x[i]);
  return sum;
}

inline double l2_sq(const Samples& s) {
  return integrate(s, [](double v, double, double) { return v * v; });
}
inline double grad_sq(const Samples& s) {
  return integrate(s, [](double, double dv, double) { return dv * dv; });
}
inline double power(const Samples& s, double q) {
  return integrate(s, [q](double v, double, double) { return std::pow(std::abs(v), q); });
}
inline double log_power(const Samples& s, double p) {
  return integrate(s, [p](double v, double, double) {
    const double a = std::abs(v);
    return a == 0.0 ? 0.0 : std::pow(a, 1.0 + p) * std::log(a);
  });
}

/// (2/L) int v|v|^{p-1} log|v| sin(k pi x/L) dx, k = 1..modes.
inline std::vector<double> source_coefficients(const Samples& s, double L, double p, std::size_t modes) {
  std::vector<double> f(modes, 0.0);
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double a = std::abs(s.v[i]);
    if (a == 0.0) continue;
    const double g = s.v[i] * std::pow(a, p - 1.0) * std::log(a);
    for (std::size_t k = 0; k < modes; ++k)
      f[k] += s.w[i] * g * std::sin((k + 1.0) * std::numbers::pi * s.x[i] / L);
  }
  for (double& x : f) x *= 2.0 / L;
  return f;
}

/// Maximiser of a unimodal f on [a, b].
inline double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Grid point maximising f over n log-spaced points in [lo, hi].
inline double dense_scan_argmax(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
  double best_x = lo, best = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace oracle
