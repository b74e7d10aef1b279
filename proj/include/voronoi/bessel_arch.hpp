#pragma once

// Archimedean (real place) analysis: gamma factors built from Gamma_R/Gamma_C
// shift data, numerical Mellin transforms of smooth bumps, and the
// contour-integral Bessel transform
//
//   B(y) = 1/(4 pi i) sum_{r in {0,1}} (-1)^{r(n-1)} sgn(y)^r
//          int_{Re s = sigma} gamma(1-s, sgn^r pi, psi)
//                             m(Phi, 1-s-(n-1)/2) |y|^{(n-1)/2 - s} ds
//
// for test functions supported in R_{>0}, where m is the classical Mellin
// transform.  Quadrature nodes are shared across evaluation points so dual
// sums stay cheap.

#include <array>
#include <functional>

#include "voronoi/gamma_complex.hpp"
#include "voronoi/modarith.hpp"

namespace voronoi {

// Smooth compactly supported test function on (0, infinity).
struct BumpFunction {
  double a = 1.0, b = 2.0;  // support [a, b], 0 < a < b
  std::function<double(double)> f;

  double operator()(double y) const { return (y <= a || y >= b) ? 0.0 : f(y); }
};

// C-infinity plateau: rises on [a, a+w], equals 1 on [a+w, b-w], falls on
// [b-w, b], with w = (b-a)/4.
inline BumpFunction plateau_bump(double a, double b) {
  if (!(0 < a && a < b)) throw std::invalid_argument("plateau_bump: need 0 < a < b");
  double w = (b - a) / 4.0;
  auto soft = [](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double g0 = std::exp(-1.0 / t), g1 = std::exp(-1.0 / (1.0 - t));
    return g0 / (g0 + g1);
  };
  BumpFunction phi;
  phi.a = a;
  phi.b = b;
  phi.f = [a, b, w, soft](double y) { return soft((y - a) / w) * soft((b - y) / w); };
  return phi;
}

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
inline constexpr double kGLx[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr double kGLw[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename F>
inline cplx gl16(F&& f, double lo, double hi) {
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  cplx s = 0;
  for (int i = 0; i < 8; ++i) {
    s += kGLw[i] * (f(mid + half * kGLx[i]) + f(mid - half * kGLx[i]));
  }
  return half * s;
}

}  // namespace detail

// m(phi, s) = int_0^infty phi(y) y^{s-1} dy, computed in u = log y with panel
// counts sized to the oscillation |Im s| * (log b - log a).
inline cplx mellin_real(const BumpFunction& phi, cplx s) {
  if (phi.a <= 0) throw std::invalid_argument("mellin_real: support must avoid 0");
  double ulo = std::log(phi.a), uhi = std::log(phi.b);
  double range = uhi - ulo;
  int panels = std::max(8, (int)std::ceil(range * (1.0 + std::abs(s.imag())) / 2.0));
  cplx total = 0;
  auto f = [&](double u) {
    double y = std::exp(u);
    return phi(y) * std::exp(s * u);
  };
  for (int k = 0; k < panels; ++k) {
    double lo = ulo + range * k / panels, hi = ulo + range * (k + 1) / panels;
    total += detail::gl16(f, lo, hi);
  }
  return total;
}

// Archimedean representation data: Gamma_R entries (shift mu, parity delta)
// and Gamma_C entries (shift nu); degree counts 1 resp. 2.  eps[r] is the
// root number used in gamma for the sgn^r twist.
struct ArchRep {
  struct REntry { cplx mu; int delta; };
  struct CEntry { cplx nu; };
  std::vector<REntry> rentries;
  std::vector<CEntry> centries;
  cplx eps[2] = {{1, 0}, {1, 0}};

  int degree() const { return (int)rentries.size() + 2 * (int)centries.size(); }

  // tempered spherical principal series on GL(n): shifts i t_j, parity 0
  static ArchRep tempered_principal_series(const std::vector<double>& ts) {
    ArchRep r;
    for (double t : ts) r.rentries.push_back({cplx{0.0, t}, 0});
    return r;
  }
  // holomorphic discrete series of weight k on GL(2): one Gamma_C entry with
  // nu = (k-1)/2 and root number i^k for both parities
  static ArchRep holomorphic_discrete_series(int k) {
    ArchRep r;
    r.centries.push_back({cplx{(k - 1) / 2.0, 0.0}});
    cplx ik = std::pow(cplx{0, 1}, k);
    r.eps[0] = r.eps[1] = ik;
    return r;
  }
};

// gamma(s, sgn^r pi, psi) = eps_r * prod dual-shifts at 1-s / prod shifts at s,
// where an R-entry (mu, delta) contributes Gamma_R(s + mu + ((delta + r) mod 2))
// and a C-entry contributes Gamma_C(s + nu) to the denominator, with the dual
// shifts mu -> -mu, nu -> nu.  Throws when an argument sits within 1e-8 of a
// Gamma pole.
inline cplx gamma_factor_arch(const ArchRep& rep, int r, cplx s) {
  // gamma(s) has poles only where a numerator Gamma does; denominator poles
  // are zeros of gamma and are harmless.
  auto check_pole = [](cplx scaled) {
    if (scaled.real() < 0.25 && std::abs(scaled.imag()) < 1e-8 &&
        std::abs(scaled - std::round(scaled.real())) < 1e-8 && std::round(scaled.real()) <= 0.0)
      throw std::domain_error("gamma_factor_arch: argument within 1e-8 of a pole");
  };
  cplx lognum = 0, logden = 0;
  for (auto& e : rep.rentries) {
    int d = (e.delta + r) % 2;
    cplx num_arg = (1.0 - s) - e.mu + (double)d;
    cplx den_arg = s + e.mu + (double)d;
    check_pole(0.5 * num_arg);
    lognum += lgamma_R(num_arg);
    logden += lgamma_R(den_arg);
  }
  for (auto& e : rep.centries) {
    cplx num_arg = (1.0 - s) + e.nu;
    cplx den_arg = s + e.nu;
    check_pole(num_arg);
    lognum += lgamma_C(num_arg);
    logden += lgamma_C(den_arg);
  }
  return rep.eps[r] * std::exp(lognum - logden);
}

// Precomputed contour data for many-point evaluation:
//   B(y) = (1/2 pi i) int_path G_{sgn(y)}(s) |y|^{(n-1)/2 - s} ds,
//   G_{sgn}(s) = (1/2) sum_r (-1)^{r(n-1)} sgn^r gamma(1-s, sgn^r pi, psi)
//                m(phi, 1 - s - (n-1)/2).
// The path is a rectangle-deformed vertical line: Re(s) = sigma on |t| <= T0,
// Re(s) = sigma_tail on |t| > T0 (plus the two horizontal connectors).  The
// tail band keeps |gamma| of moderate size, so the super-polynomially small
// Mellin factor is not multiplied into numerical noise.  The deformation is
// pole-free for representations whose gamma poles sit at Re(s) < sigma_tail.
//
// Per band, the Mellin factor shares one u = log y quadrature grid: each
// contour node takes one pass of 16 shared offset rotations per u-panel.
class BesselEvaluatorReal {
 public:
  BesselEvaluatorReal(const ArchRep& rep, const BumpFunction& phi, double sigma, double height,
                      int panels_per_unit = 2, double band_T0 = 48.0, double sigma_tail = 0.6)
      : n_(rep.degree()), sigma_(sigma) {
    if (height <= 0) throw std::invalid_argument("BesselEvaluatorReal: height must be positive");
    double T0 = std::min(band_T0, height);
    add_vertical_band(rep, phi, sigma, -T0, T0, panels_per_unit);
    if (height > T0) {
      double st = std::min(sigma_tail, sigma);
      add_vertical_band(rep, phi, st, T0, height, panels_per_unit);
      add_vertical_band(rep, phi, st, -height, -T0, panels_per_unit);
      // horizontal jogs: sigma_tail -> sigma at -T0, sigma -> sigma_tail at +T0
      if (st != sigma) add_connectors(rep, phi, st, sigma, T0);
    }
    // tail estimate: largest integrand magnitude on the outermost panel
    tail_mag_ = 0;
    const Band& top = bands_[bands_.size() > 1 ? 1 : 0];
    size_t m = std::min<size_t>(top.t.size(), 16);
    for (size_t j = top.t.size() - m; j < top.t.size(); ++j)
      tail_mag_ = std::max({tail_mag_, std::abs(top.gpos[j]), std::abs(top.gneg[j])});
  }

  int degree() const { return n_; }
  double sigma() const { return sigma_; }
  double tail_magnitude() const { return tail_mag_; }

  cplx operator()(double y) const {
    if (y == 0.0) throw std::invalid_argument("Bessel transform evaluated at 0");
    double ay = std::abs(y);
    double L = std::log(ay);
    double hd = (n_ - 1) / 2.0;
    cplx acc = 0;
    for (const auto& b : bands_) {
      double base = std::pow(ay, hd - b.sigma);
      const auto& G = y > 0 ? b.gpos : b.gneg;
      cplx bacc = 0;
      for (size_t j = 0; j < b.t.size(); ++j)
        bacc += b.w[j] * G[j] * cplx{std::cos(b.t[j] * L), -std::sin(b.t[j] * L)};
      acc += bacc * base;  // (1/2 pi i) * (i dt) = dt / 2 pi
    }
    cplx conn = 0;
    for (const auto& c : connectors_) {
      const auto& G = y > 0 ? c.gpos : c.gneg;
      conn += c.wdir * G * std::pow(cplx{ay, 0}, hd - c.s);
    }
    return acc / kTwoPi + conn / cplx{0, kTwoPi};
  }

 private:
  struct Band {
    double sigma;
    std::vector<double> t, w;
    std::vector<cplx> gpos, gneg;
  };
  struct ConnNode {
    cplx s;
    cplx wdir;  // quadrature weight times path direction (real ds)
    cplx gpos, gneg;
  };

  void add_vertical_band(const ArchRep& rep, const BumpFunction& phi, double sigma, double tlo,
                         double thi, int panels_per_unit) {
    Band b;
    b.sigma = sigma;
    int npanels = std::max(1, (int)std::ceil((thi - tlo) * panels_per_unit));
    for (int k = 0; k < npanels; ++k) {
      double lo = tlo + (thi - tlo) * k / npanels, hi = tlo + (thi - tlo) * (k + 1) / npanels;
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int i = 0; i < 8; ++i) {
        b.t.push_back(mid + half * detail::kGLx[i]);
        b.w.push_back(half * detail::kGLw[i]);
        b.t.push_back(mid - half * detail::kGLx[i]);
        b.w.push_back(half * detail::kGLw[i]);
      }
    }
    // u-grid shared across the band
    double hd = (n_ - 1) / 2.0;
    double ulo = std::log(phi.a), uhi = std::log(phi.b), range = uhi - ulo;
    double tmax = std::max(std::abs(tlo), std::abs(thi));
    int upanels = std::max(8, (int)std::ceil(range * tmax / (2.0 * kTwoPi)));
    double uw = range / upanels, uhalf = 0.5 * uw;
    double cre = 1.0 - sigma - hd;
    std::vector<double> umid(upanels);
    std::vector<std::array<cplx, 16>> ubase(upanels);
    for (int k = 0; k < upanels; ++k) {
      umid[k] = ulo + (k + 0.5) * uw;
      for (int i = 0; i < 8; ++i) {
        double up = umid[k] + uhalf * detail::kGLx[i], um = umid[k] - uhalf * detail::kGLx[i];
        ubase[k][2 * i] = uhalf * detail::kGLw[i] * phi(std::exp(up)) * std::exp(cre * up);
        ubase[k][2 * i + 1] = uhalf * detail::kGLw[i] * phi(std::exp(um)) * std::exp(cre * um);
      }
    }
    double sgn_r = (n_ - 1) % 2 == 0 ? 1.0 : -1.0;  // (-1)^{r(n-1)} at r = 1
    b.gpos.resize(b.t.size());
    b.gneg.resize(b.t.size());
    for (size_t j = 0; j < b.t.size(); ++j) {
      double t = b.t[j];
      cplx s{sigma, t};
      std::array<cplx, 16> off;
      for (int i = 0; i < 8; ++i) {
        double ph = -t * uhalf * detail::kGLx[i];
        off[2 * i] = {std::cos(ph), std::sin(ph)};
        off[2 * i + 1] = std::conj(off[2 * i]);
      }
      cplx mel = 0, rot = 1, step{std::cos(-t * uw), std::sin(-t * uw)};
      for (int k = 0; k < upanels; ++k) {
        if (k % 256 == 0) rot = {std::cos(-t * umid[k]), std::sin(-t * umid[k])};
        cplx acc = 0;
        for (int i = 0; i < 16; ++i) acc += ubase[k][i] * off[i];
        mel += acc * rot;
        rot *= step;
      }
      cplx g0 = gamma_factor_arch(rep, 0, 1.0 - s) * mel;
      cplx g1 = gamma_factor_arch(rep, 1, 1.0 - s) * mel;
      b.gpos[j] = 0.5 * (g0 + sgn_r * g1);
      b.gneg[j] = 0.5 * (g0 - sgn_r * g1);
    }
    bands_.push_back(std::move(b));
  }

  // the two horizontal jogs of the rectangle: the upward path runs
  // s_tail -> s_central at t = -T0 and s_central -> s_tail at t = +T0
  void add_connectors(const ArchRep& rep, const BumpFunction& phi, double s_tail,
                      double s_central, double T0) {
    double hd = (n_ - 1) / 2.0;
    double sgn_r = (n_ - 1) % 2 == 0 ? 1.0 : -1.0;
    int xpanels = std::max(2, (int)std::ceil(2.0 * (s_central - s_tail)));
    for (double tt : {-T0, T0}) {
      double orientation = tt < 0 ? 1.0 : -1.0;  // w.r.t. x increasing from s_tail
      for (int k = 0; k < xpanels; ++k) {
        double lo = s_tail + (s_central - s_tail) * k / xpanels;
        double hi = s_tail + (s_central - s_tail) * (k + 1) / xpanels;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 0; i < 8; ++i) {
          for (double x : {mid + half * detail::kGLx[i], mid - half * detail::kGLx[i]}) {
            cplx s{x, tt};
            cplx mel = mellin_real(phi, 1.0 - s - hd);
            cplx g0 = gamma_factor_arch(rep, 0, 1.0 - s) * mel;
            cplx g1 = gamma_factor_arch(rep, 1, 1.0 - s) * mel;
            ConnNode node;
            node.s = s;
            node.wdir = orientation * half * detail::kGLw[i];
            node.gpos = 0.5 * (g0 + sgn_r * g1);
            node.gneg = 0.5 * (g0 - sgn_r * g1);
            connectors_.push_back(node);
          }
        }
      }
    }
  }

  int n_;
  double sigma_;
  double tail_mag_ = 0;
  std::vector<Band> bands_;
  std::vector<ConnNode> connectors_;
};

// One-shot transform with truncation control: the estimated tail must be
// below `tail_tol`, otherwise an error suggests a larger height.
inline cplx bessel_transform_real(const ArchRep& rep, const BumpFunction& phi, double y,
                                  double sigma, double height, double tail_tol = 1e-8) {
  BesselEvaluatorReal ev(rep, phi, sigma, height);
  if (ev.tail_magnitude() > tail_tol)
    throw std::runtime_error("bessel_transform_real: estimated tail " +
                             std::to_string(ev.tail_magnitude()) + " above tolerance; raise T to ~" +
                             std::to_string(height * 2));
  return ev(y);
}

inline double default_sigma(int degree) { return (degree - 1) / 2.0 + 2.0; }

// Adaptive height: grow T until the integrand's edge magnitude falls below
// tol.  The edge is probed on the tail band (Re s = sigma_tail), matching the
// deformed contour the evaluator integrates over.
inline double adaptive_height(const ArchRep& rep, const BumpFunction& phi, double sigma,
                              double tol = 1e-11, double start = 64.0, double sigma_tail = 0.6) {
  double st = std::min(sigma, sigma_tail);
  double T = start;
  for (int it = 0; it < 8; ++it) {
    double half_deg = (rep.degree() - 1) / 2.0;
    cplx s{st, T};
    cplx mel = mellin_real(phi, 1.0 - s - half_deg);
    cplx edge = gamma_factor_arch(rep, 0, 1.0 - s) * mel;
    cplx edge1 = gamma_factor_arch(rep, 1, 1.0 - s) * mel;
    if (std::max(std::abs(edge), std::abs(edge1)) < tol) return T;
    T *= 2.0;
  }
  return T;
}

struct DecayReport {
  double fitted_exponent;  // least-squares slope of -log|B| vs log y
  double height_used;
  std::vector<double> values;
};

// Fit the decay exponent of |B(y)| on a dyadic grid; per the support-side
// estimates the fitted exponent must exceed any fixed A once T is large.
inline DecayReport decay_check(const ArchRep& rep, const BumpFunction& phi,
                               const std::vector<double>& ygrid, double sigma_hint = -1.0) {
  double sigma = sigma_hint > 0 ? sigma_hint : (rep.degree() - 1) / 2.0 + 2.5;
  // push sigma up for decay on a positive grid (no poles to the right)
  double ymax = 0;
  for (double y : ygrid) ymax = std::max(ymax, std::abs(y));
  double T = adaptive_height(rep, phi, sigma);
  BesselEvaluatorReal ev(rep, phi, sigma, T);
  DecayReport rep_out;
  rep_out.height_used = T;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (double y : ygrid) {
    double v = std::abs(ev(-y)) + std::abs(ev(y));
    rep_out.values.push_back(v);
    if (v > 1e-280) {
      double lx = std::log(std::abs(y)), ly = std::log(v);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
      ++cnt;
    }
  }
  if (cnt >= 2) {
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    rep_out.fitted_exponent = -slope;
  } else {
    rep_out.fitted_exponent = 1e9;  // decayed below floating-point floor
  }
  return rep_out;
}

}  // namespace voronoi
