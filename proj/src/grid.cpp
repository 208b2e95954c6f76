#include "caloronkit/grid.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "caloronkit/parallel.hpp"

namespace caloronkit {

namespace {

constexpr double kPi = std::numbers::pi;

// Fornberg finite-difference weights for the first derivative at x0 given
// arbitrary nodes. Exact on polynomials of degree < nodes.size().
std::vector<double> fd_weights(double x0, const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  const int m = 1;  // derivative order
  std::vector<std::vector<double>> c(static_cast<size_t>(n),
                                     std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = x[static_cast<size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<size_t>(i)][static_cast<size_t>(k)] =
              c1 * (k * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                    c5 * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) /
              c2;
        c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<size_t>(j)][static_cast<size_t>(k)] =
            (c4 * c[static_cast<size_t>(j)][static_cast<size_t>(k)] -
             k * c[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) /
            c3;
      c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = c[static_cast<size_t>(i)][1];
  return w;
}

Axis make_circle_axis(int n, double period) {
  Axis ax;
  ax.kind = AxisKind::Circle;
  ax.n = n;
  ax.period = period;
  ax.coords.resize(static_cast<size_t>(n));
  ax.quad.assign(static_cast<size_t>(n), period / n);
  for (int k = 0; k < n; ++k) ax.coords[static_cast<size_t>(k)] = period * k / n;
  // Trigonometric differentiation matrix; exact on band-limited data below
  // the Nyquist mode.
  ax.deriv.assign(static_cast<size_t>(n) * n, 0.0);
  double scale = 2.0 * kPi / period;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      int d = j - k;
      double s = ((d % 2 + 2) % 2 == 0) ? 1.0 : -1.0;
      double arg = kPi * d / n;
      double v = (n % 2 == 0) ? 0.5 * s / std::tan(arg) : 0.5 * s / std::sin(arg);
      ax.deriv[static_cast<size_t>(j) * n + k] = scale * v;
    }
  return ax;
}

Axis make_interval_axis(int n, double a, double b) {
  Axis ax;
  ax.kind = AxisKind::Interval;
  ax.n = n;
  ax.a = a;
  ax.b = b;
  double h = (b - a) / (n - 1);
  ax.coords.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) ax.coords[static_cast<size_t>(k)] = a + h * k;
  ax.quad.assign(static_cast<size_t>(n), h);
  ax.quad.front() = 0.5 * h;
  ax.quad.back() = 0.5 * h;
  // 5-point rows: centered in the interior, one-sided 4th order closures at
  // the endpoints.
  const int w = 5;
  ax.deriv.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    int start = std::clamp(i - w / 2, 0, n - w);
    std::vector<double> nodes(static_cast<size_t>(w));
    for (int j = 0; j < w; ++j) nodes[static_cast<size_t>(j)] = ax.coords[static_cast<size_t>(start + j)];
    auto wt = fd_weights(ax.coords[static_cast<size_t>(i)], nodes);
    for (int j = 0; j < w; ++j) ax.deriv[static_cast<size_t>(i) * n + start + j] = wt[static_cast<size_t>(j)];
  }
  return ax;
}

}  // namespace

GridPtr Grid::make(std::vector<FactorSpec> factors, std::optional<int> distinguished) {
  if (factors.empty()) throw std::invalid_argument("grid: no factors");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->factors_ = factors;
  g->distinguished_ = distinguished;
  for (size_t f = 0; f < factors.size(); ++f) {
    const auto& spec = factors[f];
    switch (spec.kind) {
      case FactorSpec::Kind::Circle:
        if (spec.n < 8) throw std::invalid_argument("grid: circle needs >= 8 samples");
        g->axes_.push_back(make_circle_axis(spec.n, 2.0 * kPi));
        g->axis_factor_.push_back(static_cast<int>(f));
        break;
      case FactorSpec::Kind::Interval:
        if (spec.n < 8) throw std::invalid_argument("grid: interval needs >= 8 samples");
        if (!(spec.b > spec.a)) throw std::invalid_argument("grid: interval endpoints out of order");
        g->axes_.push_back(make_interval_axis(spec.n, spec.a, spec.b));
        g->axis_factor_.push_back(static_cast<int>(f));
        break;
      case FactorSpec::Kind::Sphere3:
        if (spec.n_psi < 8 || spec.n_theta < 8 || spec.n_phi < 8)
          throw std::invalid_argument("grid: sphere3 needs >= 8 samples per angle");
        g->axes_.push_back(make_circle_axis(spec.n_psi, 4.0 * kPi));
        g->axes_.push_back(make_interval_axis(spec.n_theta, 0.0, kPi));
        g->axes_.push_back(make_circle_axis(spec.n_phi, 2.0 * kPi));
        for (int r = 0; r < 3; ++r) g->axis_factor_.push_back(static_cast<int>(f));
        break;
    }
  }
  if (distinguished) {
    int d = *distinguished;
    if (d < 0 || d >= static_cast<int>(factors.size()))
      throw std::invalid_argument("grid: distinguished factor out of range");
    if (factors[static_cast<size_t>(d)].kind != FactorSpec::Kind::Circle)
      throw std::invalid_argument("grid: distinguished factor must be a circle");
    if (d != static_cast<int>(factors.size()) - 1)
      throw std::invalid_argument("grid: distinguished circle must be the last factor");
  }
  g->finalize();
  return g;
}

void Grid::finalize() {
  int d = dim();
  strides_.assign(static_cast<size_t>(d), 1);
  npoints_ = 1;
  for (int i = d - 1; i >= 0; --i) {
    strides_[static_cast<size_t>(i)] = npoints_;
    npoints_ *= axes_[static_cast<size_t>(i)].n;
  }

  bool sphere = false;
  for (const auto& f : factors_)
    if (f.kind == FactorSpec::Kind::Sphere3) sphere = true;
  if (!sphere) return;

  // Haar density of the Euler chart, with the chart weights rescaled so a
  // density-proportional integrand integrates to the analytic volume exactly.
  density_.assign(static_cast<size_t>(npoints_), 1.0);
  std::vector<int> idx(static_cast<size_t>(d));
  double discrete_total = 0.0, coord_total = 1.0;
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (double w : axes_[static_cast<size_t>(i)].quad) s += w;
    coord_total *= s;
  }
  (void)coord_total;
  for (long p = 0; p < npoints_; ++p) {
    point_indices(p, idx.data());
    double rho = 1.0, w = 1.0;
    for (int i = 0; i < d; ++i) {
      const auto& ax = axes_[static_cast<size_t>(i)];
      w *= ax.quad[static_cast<size_t>(idx[static_cast<size_t>(i)])];
      if (factors_[static_cast<size_t>(axis_factor_[static_cast<size_t>(i)])].kind ==
              FactorSpec::Kind::Sphere3 &&
          ax.kind == AxisKind::Interval)
        rho *= std::sin(ax.coords[static_cast<size_t>(idx[static_cast<size_t>(i)])]) / 8.0;
    }
    density_[static_cast<size_t>(p)] = rho;
    discrete_total += w * rho;
  }
  double analytic = 1.0;
  for (const auto& f : factors_) {
    switch (f.kind) {
      case FactorSpec::Kind::Circle: analytic *= 2.0 * kPi; break;
      case FactorSpec::Kind::Interval: analytic *= (f.b - f.a); break;
      case FactorSpec::Kind::Sphere3: analytic *= 2.0 * kPi * kPi; break;
    }
  }
  chart_norm_ = analytic / discrete_total;
}

bool Grid::all_circles() const {
  for (const auto& f : factors_)
    if (f.kind != FactorSpec::Kind::Circle) return false;
  return true;
}

void Grid::point_indices(long p, int* out) const {
  for (int i = 0; i < dim(); ++i) {
    out[i] = static_cast<int>(p / strides_[static_cast<size_t>(i)]);
    p %= strides_[static_cast<size_t>(i)];
  }
}

void Grid::point_coords(long p, double* out) const {
  for (int i = dim() - 1; i >= 0; --i) {
    const auto& ax = axes_[static_cast<size_t>(i)];
    long k = p % ax.n;
    p /= ax.n;
    out[i] = ax.coords[static_cast<size_t>(k)];
  }
}

double Grid::integration_weight(long p) const {
  double w = chart_norm_;
  for (int i = dim() - 1; i >= 0; --i) {
    const auto& ax = axes_[static_cast<size_t>(i)];
    long k = p % ax.n;
    p /= ax.n;
    w *= ax.quad[static_cast<size_t>(k)];
  }
  return w;
}

double Grid::measure_weight(long p) const {
  double w = integration_weight(p);
  if (!density_.empty()) w *= density_[static_cast<size_t>(p)];
  return w;
}

double Grid::total_measure() const {
  // compensated summation: the invariant is checked at 1e-10
  double t = 0.0, c = 0.0;
  for (long p = 0; p < npoints_; ++p) {
    double y = measure_weight(p) - c;
    double s = t + y;
    c = (s - t) - y;
    t = s;
  }
  return t;
}

void Grid::differentiate(int ax, const cplx* in, cplx* out, int block) const {
  if (ax < 0 || ax >= dim()) throw std::invalid_argument("differentiate: axis out of range");
  const Axis& a = axes_[static_cast<size_t>(ax)];
  const int m = a.n;
  const long sa = strides_[static_cast<size_t>(ax)];
  const long outer = npoints_ / (sa * m);
  const double* D = a.deriv.data();
  parallel_for(outer, [&](long ob, long oe) {
    for (long o = ob; o < oe; ++o) {
      const long base = o * sa * m;
      for (long r = 0; r < sa; ++r) {
        for (int i = 0; i < m; ++i) {
          cplx* dst = out + (base + static_cast<long>(i) * sa + r) * block;
          for (int e = 0; e < block; ++e) dst[e] = cplx(0.0, 0.0);
          const double* Drow = D + static_cast<size_t>(i) * m;
          for (int k = 0; k < m; ++k) {
            double w = Drow[k];
            if (w == 0.0) continue;
            const cplx* src = in + (base + static_cast<long>(k) * sa + r) * block;
            for (int e = 0; e < block; ++e) dst[e] += w * src[e];
          }
        }
      }
    }
  });
}

GridPtr Grid::without_axis(int ax) const {
  if (ax < 0 || ax >= dim()) throw std::invalid_argument("without_axis: axis out of range");
  int f = axis_factor_[static_cast<size_t>(ax)];
  if (factors_[static_cast<size_t>(f)].kind == FactorSpec::Kind::Sphere3)
    throw std::invalid_argument("without_axis: cannot remove a sphere chart axis");
  std::vector<FactorSpec> fs;
  for (size_t i = 0; i < factors_.size(); ++i)
    if (static_cast<int>(i) != f) fs.push_back(factors_[i]);
  if (fs.empty()) throw std::invalid_argument("without_axis: would leave an empty grid");
  std::optional<int> dist;
  if (distinguished_ && *distinguished_ != f) dist = static_cast<int>(fs.size()) - 1;
  return Grid::make(fs, dist);
}

GridPtr Grid::with_axis_inserted(int pos, const FactorSpec& f) const {
  if (f.kind == FactorSpec::Kind::Sphere3)
    throw std::invalid_argument("with_axis_inserted: sphere charts cannot be inserted");
  // pos is a factor position in [0, nfactors].
  std::vector<FactorSpec> fs = factors_;
  if (pos < 0 || pos > static_cast<int>(fs.size()))
    throw std::invalid_argument("with_axis_inserted: position out of range");
  fs.insert(fs.begin() + pos, f);
  std::optional<int> dist;
  if (distinguished_) {
    int d = *distinguished_;
    dist = (pos <= d) ? d + 1 : d;
    if (*dist != static_cast<int>(fs.size()) - 1) dist = std::nullopt;
  }
  return Grid::make(fs, dist);
}

bool Grid::same_as(const Grid& other) const {
  if (this == &other) return true;
  if (factors_.size() != other.factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i) {
    const auto &a = factors_[i], &b = other.factors_[i];
    if (a.kind != b.kind || a.n != b.n || a.a != b.a || a.b != b.b ||
        a.n_psi != b.n_psi || a.n_theta != b.n_theta || a.n_phi != b.n_phi)
      return false;
  }
  return distinguished_ == other.distinguished_;
}

std::string Grid::describe() const {
  std::ostringstream os;
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    const auto& f = factors_[i];
    switch (f.kind) {
      case FactorSpec::Kind::Circle: os << "S1(" << f.n << ")"; break;
      case FactorSpec::Kind::Interval:
        os << "[" << f.a << "," << f.b << "](" << f.n << ")";
        break;
      case FactorSpec::Kind::Sphere3:
        os << "S3(" << f.n_psi << "," << f.n_theta << "," << f.n_phi << ")";
        break;
    }
    if (distinguished_ && static_cast<size_t>(*distinguished_) == i) os << "*";
  }
  return os.str();
}

long point_with_index(const Grid& g, long p, int ax, int k) {
  long s = g.stride(ax);
  int n = g.axis(ax).n;
  long cur = (p / s) % n;
  return p + (static_cast<long>(k) - cur) * s;
}

}  // namespace caloronkit
