#pragma once

// Local representation data at a finite place: unramified principal series
// described by Satake parameters, and the abstract twist-minimal model with
// trivial twisted L-factors used for joint level-modulus ramification.
// Provides spherical Whittaker values (Shintani), Fourier coefficients and
// their duals, and local L / epsilon / gamma factors as functions of X = q^{-s}.

#include <variant>

#include "voronoi/dirichlet.hpp"
#include "voronoi/laurent.hpp"
#include "voronoi/padic.hpp"
#include "voronoi/schur.hpp"

namespace voronoi {

struct SatakeParams {
  i64 p = 2;
  std::vector<cplx> mu;  // values mu_i(p)

  int n() const { return (int)mu.size(); }
  SatakeParams dual() const {
    SatakeParams d;
    d.p = p;
    for (auto& m : mu) d.mu.push_back(1.0 / m);
    return d;
  }
};

// Spherical Whittaker value on diag(p^{lambda_1}, ..., p^{lambda_n}):
// zero unless lambda is weakly decreasing, else
//   p^{-sum_i lambda_i ((n+1)/2 - i)} s_lambda(mu).
// The exponent sign is pinned by the Hecke-coefficient dictionary: it makes
// A_f(p, 1, ..., 1) = s_{(1,0,...,0)}(mu) hold on the nose.
inline cplx shintani_whittaker(const Partition& lam, const SatakeParams& mu) {
  if ((int)lam.size() != mu.n())
    throw std::invalid_argument("shintani_whittaker: lambda size mismatch");
  if (!is_dominant(lam)) return {0.0, 0.0};
  int n = mu.n();
  i64 twice_exp = 0;  // sum lambda_i (n + 1 - 2i), i 1-based
  for (int i = 1; i <= n; ++i) twice_exp += lam[i - 1] * (n + 1 - 2 * i);
  double factor = std::pow((double)mu.p, -(double)twice_exp / 2.0);
  return factor * schur(lam, mu.mu);
}

// Per-prime Satake data for a coefficient model.
using SatakeModel = std::map<i64, SatakeParams>;

// A_f(m_1, ..., m_{n-1}): multiplicative over primes; at p^(k_1, ..., k_{n-1})
// it is s_lambda(mu(p)) with lambda_i = k_i + ... + k_{n-1}.  Signs of the m_i
// do not matter; any zero entry gives 0.
inline cplx hecke_coefficient(const SatakeModel& model, int n, const std::vector<i64>& m) {
  if ((int)m.size() != n - 1)
    throw std::invalid_argument("hecke_coefficient: need n-1 indices");
  for (i64 mi : m)
    if (mi == 0) return {0.0, 0.0};
  i64 prod = 1;
  for (i64 mi : m) prod *= std::abs(mi);
  if (prod == 1) return {1.0, 0.0};
  cplx val = 1;
  for (auto& f : factorize(prod)) {
    auto it = model.find(f.p);
    if (it == model.end())
      throw std::invalid_argument("hecke_coefficient: no Satake data at p = " + std::to_string(f.p));
    if (it->second.n() != n)
      throw std::invalid_argument("hecke_coefficient: Satake rank mismatch");
    Partition lam(n, 0);
    for (int i = 0; i < n - 1; ++i) {
      i64 k = v_p(std::abs(m[i]), f.p);
      for (int j = 0; j <= i; ++j) lam[j] += k;
    }
    val *= schur(lam, it->second.mu);
  }
  return val;
}

// Dual coefficients A_{f^iota}(m) = chi(m_1 ... m_{n-1}) A_f(m_{n-1}, ..., m_1),
// for indices coprime to the nebentypus modulus.
inline cplx dual_coefficient(const SatakeModel& model, int n, const DirichletCharacter& chi,
                             const std::vector<i64>& m) {
  i64 prod = 1;
  for (i64 mi : m) prod *= mi;
  if (prod == 0) return {0.0, 0.0};
  if (chi.modulus() > 1 && igcd(prod, chi.modulus()) != 1)
    throw std::invalid_argument("dual_coefficient: indices not coprime to the modulus");
  std::vector<i64> rev(m.rbegin(), m.rend());
  return chi(imod(prod, std::max<i64>(chi.modulus(), 1))) * hecke_coefficient(model, n, rev);
}

// ---------------------------------------------------------------------------

struct UnramifiedRep {
  SatakeParams satake;
};

// Abstract model for the refined formulas: a(pi) > 0, every twisted L-factor
// is 1, conductors of twists obey a(chi pi) = max{a(pi), n a(chi)}, and the
// twisted root numbers are stored extensionally (no uniform closed form
// exists; they are supplied per character).
struct TwistMinimalRep {
  i64 p = 2;
  int n = 2;
  int a_pi = 1;
  cplx eps0 = {1.0, 0.0};                       // eps(1/2, pi, psi)
  std::map<PadicCharacter, cplx> eps_chi;       // eps(1/2, chi pi, psi), a(chi) >= 1
};

struct LocalRepresentation {
  i64 p = 2;
  int n = 2;
  std::variant<UnramifiedRep, TwistMinimalRep> rep;

  static LocalRepresentation unramified(SatakeParams mu) {
    LocalRepresentation r;
    r.p = mu.p;
    r.n = mu.n();
    r.rep = UnramifiedRep{std::move(mu)};
    return r;
  }
  static LocalRepresentation twist_minimal(TwistMinimalRep tm) {
    LocalRepresentation r;
    r.p = tm.p;
    r.n = tm.n;
    r.rep = std::move(tm);
    return r;
  }

  bool is_unramified() const { return std::holds_alternative<UnramifiedRep>(rep); }
  const UnramifiedRep& unram() const { return std::get<UnramifiedRep>(rep); }
  const TwistMinimalRep& minimal() const { return std::get<TwistMinimalRep>(rep); }
  int a_pi() const { return is_unramified() ? 0 : minimal().a_pi; }
};

// L(s, chi pi) as a rational function of X = p^{-s}.  chi in X_p has chi(p)=1,
// so a ramified chi forces the factor to 1; the twist-minimal model has L = 1
// identically.
inline RationalFunction l_factor(const LocalRepresentation& rep, const PadicCharacter& chi) {
  if (!rep.is_unramified() || chi.cond_exp() > 0) return RationalFunction::one();
  LaurentSeries den = LaurentSeries::constant(1);
  for (auto& mu : rep.unram().satake.mu) {
    LaurentSeries f = LaurentSeries::constant(1);
    f.set_coeff(1, -mu);
    den = den * f;
  }
  return RationalFunction(LaurentSeries::constant(1), den);
}

// Root number and conductor exponent of chi pi.
inline std::pair<cplx, int> epsilon_factor(const LocalRepresentation& rep, const PadicCharacter& chi) {
  int c = chi.cond_exp();
  if (rep.is_unramified()) {
    if (c == 0) return {{1.0, 0.0}, 0};
    // product of GL(1) factors: eps(1/2, chi mu_i) = mu_i(p)^{a(chi)} eps(1/2, chi)
    cplx prod_mu = 1;
    for (auto& mu : rep.unram().satake.mu) prod_mu *= mu;
    cplx eps1 = epsilon_half_padic(chi);
    cplx root = detail::cpow_int(prod_mu, c) * detail::cpow_int(eps1, rep.n);
    return {root, rep.n * c};
  }
  const auto& tm = rep.minimal();
  int cond = std::max(tm.a_pi, rep.n * c);
  if (c == 0) return {tm.eps0, cond};
  auto it = tm.eps_chi.find(chi);
  if (it == tm.eps_chi.end())
    throw std::invalid_argument("epsilon_factor: missing twisted root number at conductor exponent " +
                                std::to_string(c));
  return {it->second, cond};
}

// gamma(s, chi pi, psi) = eps(1/2) q^{a(1/2-s)} L(1-s, chi^{-1} pi~) / L(s, chi pi)
// as a rational function of X = q^{-s}; the epsilon monomial is q^{a/2} X^{a}.
inline RationalFunction gamma_factor(const LocalRepresentation& rep, const PadicCharacter& chi) {
  auto [root, a] = epsilon_factor(rep, chi);
  double q = (double)rep.p;
  RationalFunction eps = RationalFunction::monomial(root * std::pow(q, a / 2.0), a);
  // L(1-s, chi^{-1} pi~): substitute X -> q^{-1} X^{-1} in L(s, chi^{-1} pi~)
  LocalRepresentation dual = rep;
  if (rep.is_unramified()) dual.rep = UnramifiedRep{rep.unram().satake.dual()};
  RationalFunction Lnum = l_factor(dual, chi.inverse()).substitute_one_minus_s(q);
  RationalFunction Lden = l_factor(rep, chi);
  // eps * Lnum / Lden  ==  eps * Lnum.num/Lnum.den * Lden.den/Lden.num
  return RationalFunction(eps.num * Lnum.num * Lden.den, eps.den * Lnum.den * Lden.num);
}

// gamma(1 - s, chi pi, psi) in the variable X = q^{-s}: what the Bessel engine
// consumes.  Obtained symbolically from gamma_factor by X -> q^{-1}/X.
inline RationalFunction gamma_one_minus_s(const LocalRepresentation& rep, const PadicCharacter& chi) {
  return gamma_factor(rep, chi).substitute_one_minus_s((double)rep.p);
}

}  // namespace voronoi
