#include "hkmc/scale.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "hkmc/space.hpp"

namespace hkmc {

namespace {
void check_declared(double c_psi, double beta1, double beta2) {
  if (!(c_psi >= 1.0) || !std::isfinite(c_psi)) throw ConfigError("c_psi must be finite and >= 1");
  if (!(beta1 > 1.0) || !(beta1 <= beta2) || !std::isfinite(beta2))
    throw ConfigError("declared exponents need 1 < beta1 <= beta2");
}
}  // namespace

ScaleFunction ScaleFunction::power(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) throw ConfigError("power scale function needs beta > 1");
  ScaleFunction sf;
  sf.kind_ = Kind::power;
  sf.beta1_ = sf.beta2_ = beta;
  return sf;
}

ScaleFunction ScaleFunction::piecewise(std::vector<double> breakpoints, std::vector<double> exponents,
                                       double c_psi, double beta1, double beta2) {
  check_declared(c_psi, beta1, beta2);
  if (exponents.size() != breakpoints.size() + 1)
    throw ConfigError("piecewise scale function needs one more exponent than breakpoints");
  for (double e : exponents)
    if (!(e > 0.0)) throw ConfigError("piecewise exponents must be positive");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > 0.0)) throw ConfigError("breakpoints must be positive");
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1])) throw ConfigError("breakpoints must increase");
  }
  ScaleFunction sf;
  sf.kind_ = Kind::piecewise;
  sf.c_psi_ = c_psi;
  sf.beta1_ = beta1;
  sf.beta2_ = beta2;
  sf.exps_ = std::move(exponents);
  double lv = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const double s = std::log(breakpoints[i]);
    lv = (i == 0) ? sf.exps_[0] * s : lv + sf.exps_[i] * (s - prev);
    sf.knots_.push_back(s);
    sf.logv_.push_back(lv);
    prev = s;
  }
  return sf;
}

ScaleFunction ScaleFunction::tabulated(std::vector<double> r, std::vector<double> psi, double c_psi,
                                       double beta1, double beta2) {
  check_declared(c_psi, beta1, beta2);
  if (r.size() != psi.size() || r.size() < 2) throw ConfigError("tabulated scale function needs >= 2 samples");
  ScaleFunction sf;
  sf.kind_ = Kind::tabulated;
  sf.c_psi_ = c_psi;
  sf.beta1_ = beta1;
  sf.beta2_ = beta2;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !(psi[i] > 0.0)) throw ConfigError("tabulated samples must be positive");
    if (i > 0 && (!(r[i] > r[i - 1]) || !(psi[i] > psi[i - 1])))
      throw ConfigError("tabulated samples must be strictly increasing");
    sf.knots_.push_back(std::log(r[i]));
    sf.logv_.push_back(std::log(psi[i]));
  }
  // Fritsch-Butland slopes: harmonic mean of neighbouring secants, one-sided
  // three-point formula at the ends, clipped for monotonicity.
  const std::size_t n = r.size();
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = sf.knots_[i + 1] - sf.knots_[i];
    d[i] = (sf.logv_[i + 1] - sf.logv_[i]) / h[i];
  }
  sf.slope_.assign(n, 0.0);
  if (n == 2) {
    sf.slope_[0] = sf.slope_[1] = d[0];
    return sf;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    sf.slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m < 0.0) m = 0.0;
    else if (d0 * d1 < 0.0 && std::fabs(m) > std::fabs(3.0 * d0)) m = 3.0 * d0;
    return m;
  };
  sf.slope_[0] = edge(h[0], h[1], d[0], d[1]);
  sf.slope_[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return sf;
}

double ScaleFunction::log_psi(double s) const {
  switch (kind_) {
    case Kind::power: return beta1_ * s;
    case Kind::piecewise: {
      if (knots_.empty() || s <= knots_[0]) return exps_[0] * s;
      const std::size_t i = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), s) - knots_.begin()) - 1;
      return logv_[i] + exps_[i + 1] * (s - knots_[i]);
    }
    case Kind::tabulated: {
      const std::size_t n = knots_.size();
      if (s <= knots_[0]) return logv_[0] + beta1_ * (s - knots_[0]);
      if (s >= knots_[n - 1]) return logv_[n - 1] + beta2_ * (s - knots_[n - 1]);
      const std::size_t i = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), s) - knots_.begin()) - 1;
      const double h = knots_[i + 1] - knots_[i];
      const double u = (s - knots_[i]) / h;
      const double u2 = u * u, u3 = u2 * u;
      return (2 * u3 - 3 * u2 + 1) * logv_[i] + (u3 - 2 * u2 + u) * h * slope_[i] + (-2 * u3 + 3 * u2) * logv_[i + 1] +
             (u3 - u2) * h * slope_[i + 1];
    }
  }
  return 0.0;
}

double ScaleFunction::log_psi_inv(double lt) const {
  switch (kind_) {
    case Kind::power: return lt / beta1_;
    case Kind::piecewise: {
      if (knots_.empty() || lt <= logv_[0]) return lt / exps_[0];
      const std::size_t i = static_cast<std::size_t>(std::upper_bound(logv_.begin(), logv_.end(), lt) - logv_.begin()) - 1;
      return knots_[i] + (lt - logv_[i]) / exps_[i + 1];
    }
    case Kind::tabulated: {
      const std::size_t n = knots_.size();
      if (lt <= logv_[0]) return knots_[0] + (lt - logv_[0]) / beta1_;
      if (lt >= logv_[n - 1]) return knots_[n - 1] + (lt - logv_[n - 1]) / beta2_;
      const std::size_t i = static_cast<std::size_t>(std::upper_bound(logv_.begin(), logv_.end(), lt) - logv_.begin()) - 1;
      // the Hermite piece is monotone on [knot_i, knot_{i+1}]; bisect to the last bit
      double lo = knots_[i], hi = knots_[i + 1];
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (log_psi(mid) < lt) lo = mid;
        else hi = mid;
      }
      return (lt - log_psi(lo) <= log_psi(hi) - lt) ? lo : hi;
    }
  }
  return 0.0;
}

double ScaleFunction::psi(double r) const {
  if (!(r >= 0.0)) throw ConfigError("psi needs r >= 0");
  if (r == 0.0) return 0.0;
  if (std::isinf(r)) return r;
  if (kind_ == Kind::power) return std::pow(r, beta1_);
  return std::exp(log_psi(std::log(r)));
}

double ScaleFunction::psi_inv(double t) const {
  if (!(t >= 0.0)) throw ConfigError("psi_inv needs t >= 0");
  if (t == 0.0) return 0.0;
  if (std::isinf(t)) return t;
  if (kind_ == Kind::power) return std::pow(t, 1.0 / beta1_);
  return std::exp(log_psi_inv(std::log(t)));
}

std::string ScaleFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::power: os << "power(beta=" << beta1_ << ")"; break;
    case Kind::piecewise: os << "piecewise(" << exps_.size() << " pieces)"; break;
    case Kind::tabulated: os << "tabulated(" << knots_.size() << " samples)"; break;
  }
  return os.str();
}

double psi_eval(const ScaleFunction& sf, double r) { return sf.psi(r); }

DoublingCheck psi_doubling_verify(const ScaleFunction& sf, const std::vector<std::pair<double, double>>& grid) {
  DoublingCheck rep;
  rep.min_lower_ratio = kInf;
  rep.max_upper_ratio = 0.0;
  // relative slack for rounding in Psi; the equality case Psi = r^beta sits
  // exactly on both bounds
  constexpr double kRound = 1e-12;
  for (const auto& [r, R] : grid) {
    if (!(r > 0.0) || !(R >= r)) throw ConfigError("doubling grid needs 0 < r <= R");
    const double ratio = sf.psi(R) / sf.psi(r);
    const double lower = ratio / std::pow(R / r, sf.beta1());
    const double upper = ratio / std::pow(R / r, sf.beta2());
    const bool ok = lower * sf.c_psi() >= 1.0 - kRound && upper <= sf.c_psi() * (1.0 + kRound);
    if (lower < rep.min_lower_ratio) rep.min_lower_ratio = lower;
    if (upper > rep.max_upper_ratio) rep.max_upper_ratio = upper;
    if (!ok) {
      if (rep.failures == 0) rep.worst_pair = {r, R};
      ++rep.failures;
      rep.pass = false;
    }
  }
  return rep;
}

double phi_power_closed_form(double beta, double R, double t) {
  if (!(beta > 1.0)) throw ConfigError("closed form needs beta > 1");
  if (!(R >= 0.0)) throw ConfigError("Phi needs R >= 0");
  if (!(t > 0.0)) throw ConfigError("Phi needs t > 0");
  if (R == 0.0) return 0.0;
  return std::pow(beta, -beta / (beta - 1.0)) * (beta - 1.0) * std::pow(std::pow(R, beta) / t, 1.0 / (beta - 1.0));
}

namespace {

constexpr int kGrid = 256;
constexpr double kClamp = 1e-15;

}  // namespace

double phi_eval(const ScaleFunction& sf, double R, double t) {
  if (!(t > 0.0)) throw ConfigError("Phi needs t > 0");
  if (!(R >= 0.0)) throw ConfigError("Phi needs R >= 0");
  if (R == 0.0) return 0.0;
  if (std::isinf(R)) return kInf;
  const double log_R = std::log(R);
  // objective in s = log r: R/r - t/Psi(r)
  auto g = [&](double s) { return std::exp(log_R - s) - t / sf.psi(std::exp(s)); };

  const double r_t = sf.psi_inv(t);
  double lo = std::log(r_t) - std::log(1e3);
  double hi = std::log(1e3 * std::max(R, r_t));
  const double widen = std::log(1e3);

  std::array<double, kGrid> s{}, v{};
  int best = 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double step = (hi - lo) / (kGrid - 1);
    for (int i = 0; i < kGrid; ++i) {
      s[i] = lo + step * i;
      v[i] = g(s[i]);
    }
    best = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    // the maximiser must be interior before refinement
    if (best == 0) lo -= widen;
    else if (best == kGrid - 1) hi += widen;
    else break;
  }

  // multi-start: refine around the three best local maxima of the grid
  std::array<int, kGrid> order{};
  int n_peaks = 0;
  for (int i = 1; i + 1 < kGrid; ++i)
    if (v[i] >= v[i - 1] && v[i] >= v[i + 1]) order[n_peaks++] = i;
  std::sort(order.begin(), order.begin() + n_peaks, [&](int a, int b) { return v[a] > v[b]; });
  double value = v[best];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int p = 0; p < std::min(n_peaks, 3); ++p) {
    double a = s[order[p] - 1], b = s[order[p] + 1];
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::fabs(a)); ++it) {
      if (gc >= gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - invphi * (b - a);
        gc = g(c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + invphi * (b - a);
        gd = g(d);
      }
    }
    value = std::max({value, gc, gd});
  }
  if (value < kClamp) return 0.0;
  return value;
}

double phi_lower_prefactor(const ScaleFunction& sf) {
  return std::pow(sf.c_psi() * std::pow(2.0, sf.beta1()), -1.0 / (sf.beta1() - 1.0));
}

double phi_lower_bound(const ScaleFunction& sf, double R, double t) {
  const double q = sf.psi(R) / t;
  return phi_lower_prefactor(sf) * std::min(std::pow(q, 1.0 / (sf.beta1() - 1.0)), std::pow(q, 1.0 / (sf.beta2() - 1.0)));
}

double phi_upper_bound(const ScaleFunction& sf, double R, double t) {
  const double q = sf.psi(R) / t;
  return std::pow(sf.c_psi(), 1.0 / (sf.beta1() - 1.0)) *
         std::max(std::pow(q, 1.0 / (sf.beta1() - 1.0)), std::pow(q, 1.0 / (sf.beta2() - 1.0)));
}

SandwichCheck phi_sandwich_check(const ScaleFunction& sf, const std::vector<std::pair<double, double>>& grid,
                                 const std::vector<double>& scalings) {
  SandwichCheck rep;
  rep.worst_lower_slack = rep.worst_upper_slack = rep.worst_homogeneity_slack = kInf;
  // Comparisons allow the accuracy of the numerical supremum (relative 1e-9);
  // for Psi = r^2 the lower bound is attained with equality.
  constexpr double kTol = 1e-9;
  for (const auto& [R, t] : grid) {
    ++rep.points;
    const double phi = phi_eval(sf, R, t);
    const double lower = phi_lower_bound(sf, R, t);
    const double upper = phi_upper_bound(sf, R, t);
    const double tol = kTol * std::max(phi, 1e-300);
    bool ok = true;
    rep.worst_lower_slack = std::min(rep.worst_lower_slack, phi - lower);
    rep.worst_upper_slack = std::min(rep.worst_upper_slack, upper - phi);
    if (phi < lower - tol || phi > upper + tol) ok = false;
    for (double a : scalings) {
      if (!(a >= 1.0)) throw ConfigError("homogeneity scalings must be >= 1");
      const double scaled = a == 1.0 ? phi : phi_eval(sf, a * R, t);
      const double slack = scaled - a * phi;
      rep.worst_homogeneity_slack = std::min(rep.worst_homogeneity_slack, slack);
      if (slack < -kTol * std::max(scaled, 1e-300)) ok = false;
    }
    if (!ok) {
      ++rep.violations;
      rep.pass = false;
    }
  }
  return rep;
}

}  // namespace hkmc
