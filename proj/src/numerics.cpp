#include "onebit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "onebit/error.hpp"

namespace onebit::numerics {

namespace {

// QUADPACK 15-point Kronrod abscissae; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod(const ScalarFunction& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  const double value = k * h;
  const double error = std::abs((k - g) * h);
  if (!std::isfinite(value)) throw NumericError("integrate_adaptive: non-finite integrand");
  return {a, b, value, error};
}

}  // namespace

QuadratureResult integrate_adaptive(const ScalarFunction& f, double a, double b,
                                    double abs_tol, std::size_t max_intervals) {
  if (!(abs_tol > 0.0)) throw DomainError("integrate_adaptive: abs_tol must be > 0");
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_adaptive: bad bounds");
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Segment> heap;
  heap.push(kronrod(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  out.evaluations = 15;
  while (error > abs_tol && heap.size() < max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;
    }
    const Segment left = kronrod(f, worst.a, mid);
    const Segment right = kronrod(f, mid, worst.b);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the running-update round-off.
  value = 0.0;
  error = 0.0;
  out.intervals = heap.size();
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  out.converged = error <= abs_tol;
  return out;
}

GaussLegendreRule::GaussLegendreRule(std::size_t n) : nodes_(n), weights_(n) {
  if (n < 2) throw DomainError("GaussLegendreRule: n must be >= 2");
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    bool done = false;
    for (int it = 0; it < 100 && !done; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      done = std::abs(dx) <= 1e-16;
    }
    if (!done && !std::isfinite(x)) throw NumericError("GaussLegendreRule: Newton failed");
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

double GaussLegendreRule::integrate(const ScalarFunction& f, double a, double b) const {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(c + h * nodes_[i]);
  return h * sum;
}

MinimizeResult minimize_golden_parabolic(const ScalarFunction& f, double lo, double hi,
                                         double x_tol, std::size_t max_iterations) {
  if (!(lo < hi)) throw DomainError("minimize_golden_parabolic: empty interval");
  constexpr double kGold = 0.3819660112501051;  // (3 - sqrt 5) / 2
  double a = lo;
  double b = hi;
  double x = a + kGold * (b - a);
  double w = x;
  double v = x;
  double fx = f(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;
  MinimizeResult out;
  out.evaluations = 1;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = x_tol + 1e-15 * std::abs(x);
    const double tol2 = 2.0 * tol1;
    out.iterations = it;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) {
      out.converged = true;
      break;
    }
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < m ? b : a) - x;
      d = kGold * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    ++out.evaluations;
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  out.x = x;
  out.fx = fx;
  return out;
}

MinimizeResult2 minimize_nelder_mead(const PlanarFunction& f, std::array<double, 2> start,
                                     std::array<double, 2> step, double f_tol, double x_tol,
                                     std::size_t max_iterations) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> s{start, start, start};
  s[1][0] += step[0];
  s[2][1] += step[1];
  std::array<double, 3> fs{};
  MinimizeResult2 out;
  for (std::size_t i = 0; i < 3; ++i) fs[i] = f(s[i]);
  out.evaluations = 3;

  auto eval = [&](const Point& p) {
    ++out.evaluations;
    const double v = f(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  auto lerp = [](const Point& a, const Point& b, double t) {
    return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };

  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::array<std::size_t, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::array<Point, 3> ss{s[idx[0]], s[idx[1]], s[idx[2]]};
    std::array<double, 3> ff{fs[idx[0]], fs[idx[1]], fs[idx[2]]};
    s = ss;
    fs = ff;
    out.iterations = it;

    double spread = 0.0;
    for (std::size_t i = 1; i < 3; ++i) {
      spread = std::max({spread, std::abs(s[i][0] - s[0][0]), std::abs(s[i][1] - s[0][1])});
    }
    const bool f_flat = std::isfinite(fs[2]) &&
                        std::abs(fs[2] - fs[0]) <= f_tol * (1.0 + std::abs(fs[0]));
    if (f_flat && spread <= x_tol) {
      out.converged = true;
      break;
    }
    if (spread <= 1e-3 * x_tol) {
      out.converged = f_flat;
      break;
    }

    const Point centroid{0.5 * (s[0][0] + s[1][0]), 0.5 * (s[0][1] + s[1][1])};
    const Point xr = lerp(centroid, s[2], -1.0);
    const double fr = eval(xr);
    if (fr < fs[0]) {
      const Point xe = lerp(centroid, s[2], -2.0);
      const double fe = eval(xe);
      if (fe < fr) { s[2] = xe; fs[2] = fe; } else { s[2] = xr; fs[2] = fr; }
      continue;
    }
    if (fr < fs[1]) {
      s[2] = xr;
      fs[2] = fr;
      continue;
    }
    const bool outside = fr < fs[2];
    const Point xc = outside ? lerp(centroid, s[2], -0.5) : lerp(centroid, s[2], 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fs[2])) {
      s[2] = xc;
      fs[2] = fc;
      continue;
    }
    for (std::size_t i = 1; i < 3; ++i) {
      s[i] = lerp(s[0], s[i], 0.5);
      fs[i] = eval(s[i]);
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  out.x = s[best];
  out.fx = fs[best];
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace onebit::numerics
