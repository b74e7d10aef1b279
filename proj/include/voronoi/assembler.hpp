#pragma once

// Assembly of both sides of the classical summation formula, its refined
// (twist-minimal, square-full modulus) variant, and the arithmetic-progression
// variant, over pluggable coefficient oracles.
//
// Left side:   sum_m e(am / lq) A(m, c_2, ..., c_{n-1}) |m|^{-(n-1)/2}
//                    phi_inf(m) prod_{p|M} phi_p(m)
// Right side:  q^{n-2} prod |c_i|^{(n-i)(i/2-1)} sum_{m, r, d-chains}
//                    KL(x_r, m; q, c, d) chi(mbar Q_cd)^{-1}
//                    A(d_{n-1}, ..., d_2, m) / (|m|^{(n-1)/2} prod d_i^{i(n-i)/2})
//                    B_inf(gamma) prod_{p|MN} B_p(gamma),
// with x_r = inv(a lambda_l) l r mod q and gamma = r m / (lambda_l q^n) *
// prod d_i^i / c_i^{n-i}.  The n = 2 Kloosterman slot degenerates to e(x y / q).

#include <chrono>
#include <memory>
#include <optional>

#include "voronoi/bessel_arch.hpp"
#include "voronoi/bessel_padic.hpp"
#include "voronoi/kloosterman.hpp"
#include "voronoi/kloosterman_local.hpp"
#include "voronoi/oracle.hpp"

namespace voronoi {

inline i64 radical(i64 n) {
  i64 r = 1;
  for (auto& f : factorize(n)) r *= f.p;
  return n >= 1 ? r : 1;
}

inline i64 lcm_i64(i64 a, i64 b) { return a / igcd(a, b) * b; }

inline bool divides_power(i64 ell, i64 base) {
  // ell | base^infty
  if (ell == 1) return true;
  for (auto& f : factorize(ell))
    if (base % f.p != 0) return false;
  return true;
}

struct PhiPSpec {
  enum Kind { Units, Progression, Custom } kind = Units;
  int k = 1;                       // for Progression
  PadicShellFunction custom;       // for Custom

  PadicShellFunction build(i64 p) const {
    switch (kind) {
      case Units: return PadicShellFunction::indicator_units(p);
      case Progression: return PadicShellFunction::indicator_one_plus_pk(p, k);
      default: return custom;
    }
  }
};

struct VoronoiInstance {
  int n = 2;
  i64 N = 1;                       // level
  DirichletCharacter nebentypus;   // character mod N
  i64 a = 1, ell = 1, q = 1;       // modulus data
  i64 M = 1;
  std::vector<i64> c;              // (c_2, ..., c_{n-1})
  BumpFunction phi_inf;
  std::map<i64, PhiPSpec> phi_p;   // for p | M

  // truncation knobs
  double term_tol = 1e-12;         // absolute cutoff for dual terms
  double arch_cut_tol = 1e-13;     // |B_inf| envelope cutoff
  int r_extra_shells = 6;          // shells past -v_p(lambda) in the r-sum
  i64 dual_m_cap = 2000000;

  void validate() const {
    if (n < 2) throw std::invalid_argument("VoronoiInstance: n >= 2");
    if (a == 0 || ell < 1 || q < 1) throw std::invalid_argument("VoronoiInstance: bad modulus data");
    if (igcd(a, ell * q) != 1) throw std::invalid_argument("VoronoiInstance: (a, l q) != 1");
    if (igcd(q, N * M) != 1) throw std::invalid_argument("VoronoiInstance: (q, NM) != 1");
    if (!divides_power(ell, N * M)) throw std::invalid_argument("VoronoiInstance: l must divide (NM)^inf");
    if ((int)c.size() != std::max(0, n - 2))
      throw std::invalid_argument("VoronoiInstance: need n-2 shift entries");
    i64 cp = 1;
    for (i64 ci : c) {
      if (ci == 0) throw std::invalid_argument("VoronoiInstance: shifts must be nonzero");
      cp *= std::abs(ci);
    }
    if (igcd(cp, M * N) != 1) throw std::invalid_argument("VoronoiInstance: (prod c, MN) != 1");
    if (nebentypus.modulus() != N) throw std::invalid_argument("VoronoiInstance: nebentypus modulus != N");
    for (auto& f : factorize(M))
      if (!phi_p.count(f.p)) throw std::invalid_argument("VoronoiInstance: missing phi_p at p | M");
  }

  i64 lambda_ell() const {
    i64 L = radical(N * M);
    i64 lam = lcm_i64(ell, N);
    for (int i = 0; i < n - 1; ++i) lam *= ell;
    for (int i = 0; i < n; ++i) lam *= L;
    return lam;
  }
};

struct AssemblySide {
  cplx value{0, 0};
  i64 terms = 0;
  double tail_estimate = 0;
};

// one dual-side summand, for optional per-term reporting
struct DualTerm {
  i64 m = 0, r = 1;
  std::vector<i64> d;
  cplx value{0, 0};
};

// ---------------------------------------------------------------------------

inline AssemblySide assemble_lhs(const VoronoiInstance& inst, const CoefficientOracle& oracle) {
  inst.validate();
  if (oracle.rank() != inst.n) throw std::invalid_argument("assemble_lhs: oracle rank mismatch");
  AssemblySide out;
  i64 m_lo = (i64)std::ceil(inst.phi_inf.a), m_hi = (i64)std::floor(inst.phi_inf.b);
  for (i64 m = m_lo; m <= m_hi; ++m) {
    if (m == 0) continue;
    double w = inst.phi_inf((double)m);
    if (w == 0.0) continue;
    cplx pfac{1, 0};
    bool dead = false;
    for (auto& [p, spec] : inst.phi_p) {
      cplx v = spec.build(p).value_at(Rat(m));
      if (std::abs(v) == 0.0) { dead = true; break; }
      pfac *= v;
    }
    if (dead) continue;
    std::vector<i64> idx{m};
    for (i64 ci : inst.c) idx.push_back(ci);
    cplx A = oracle.coeff(idx);
    if (std::abs(A) == 0.0) continue;
    cplx term = e_frac(imod(inst.a * imod(m, inst.ell * inst.q), inst.ell * inst.q), inst.ell * inst.q) *
                A / std::pow((double)std::llabs(m), (inst.n - 1) / 2.0) * w * pfac;
    out.value += term;
    ++out.terms;
  }
  return out;
}

// ---------------------------------------------------------------------------

enum class DualMode { General, Refined, Progression };

namespace detail {

// Smallest dyadic Y beyond which |B_inf| stays under tol on samples.
inline double arch_envelope_cut(const BesselEvaluatorReal& ev, double tol, double ymax_cap) {
  double Y = 1.0;
  while (Y < ymax_cap) {
    double m = 0;
    for (double f : {1.0, 1.21, 1.493, 1.761}) m = std::max(m, std::abs(ev(-Y * f)) + std::abs(ev(Y * f)));
    if (m < tol) return Y;
    Y *= 2.0;
  }
  return ymax_cap;
}

// Recursive enumeration of divisor chains d_{n-1} | q c_2,
// d_{n-2} | q c_2 c_3 / d_{n-1}, ..., d_2 | q c_2 ... c_{n-1} / (d_{n-1}...d_3).
inline void enumerate_chains(const VoronoiInstance& inst, std::vector<i64>& d, int level,
                             const std::function<void(const std::vector<i64>&)>& emit) {
  int n = inst.n;
  if (n == 2) { emit(d); return; }
  // d is indexed d[0] = d_2, ..., d[n-3] = d_{n-1}; fill from the top down
  if (level < 2) { emit(d); return; }
  // budget for d_level: q c_2 ... c_{n-level+1} / (d_{n-1} ... d_{level+1})
  i64 budget = inst.q;
  for (int i = 2; i <= n - level + 1; ++i) budget *= std::abs(inst.c[i - 2]);
  for (int j = n - 1; j > level; --j) budget /= d[j - 2];
  for (i64 div = 1; div <= budget; ++div) {
    if (budget % div != 0) continue;
    d[level - 2] = div;
    enumerate_chains(inst, d, level - 1, emit);
  }
}

}  // namespace detail

struct DualLocalData {
  std::map<i64, LocalRepresentation> models;  // p | MN
  std::shared_ptr<BesselEvaluatorReal> arch;
};

inline AssemblySide assemble_rhs(const VoronoiInstance& inst, const CoefficientOracle& oracle,
                                 const DualLocalData& local, DualMode mode = DualMode::General,
                                 std::vector<DualTerm>* capture = nullptr) {
  inst.validate();
  if (oracle.rank() != inst.n) throw std::invalid_argument("assemble_rhs: oracle rank mismatch");
  const int n = inst.n;
  const i64 MN = inst.M * inst.N;
  const i64 lam = inst.lambda_ell();
  const Rat zeta_rat = Rat(inst.a, (i128)inst.ell * inst.q);

  for (auto& f : factorize(MN))
    if (!local.models.count(f.p))
      throw std::invalid_argument("assemble_rhs: missing local model at p = " + std::to_string(f.p));
  if (!local.arch) throw std::invalid_argument("assemble_rhs: missing archimedean evaluator");

  if (mode == DualMode::Refined) {
    if (inst.M != 1) throw std::invalid_argument("refined mode: M = 1 required");
    auto lf = factorize(inst.ell);
    auto nf = factorize(inst.N);
    if (lf.size() != nf.size()) throw std::invalid_argument("refined mode: supp(l) = supp(N) required");
    for (size_t i = 0; i < lf.size(); ++i) {
      if (lf[i].p != nf[i].p) throw std::invalid_argument("refined mode: supp(l) = supp(N) required");
      if (lf[i].k < 2) throw std::invalid_argument("refined mode: l must be square-full");
    }
    for (auto& f : nf)
      if (local.models.at(f.p).is_unramified())
        throw std::invalid_argument("refined mode: twist-minimal models required");
  }

  // p-adic Bessel tables (engine) for general mode; closed forms otherwise
  struct LocalBessel {
    i64 p;
    LocalRepresentation rep;
    PadicModulus zeta;
    int k_ap = 0;             // progression level for AP closed form
    bool use_ap = false;
    std::optional<PadicShellFunction> table;  // engine output when present
    cplx eval(const Rat& y) const {
      if (table) {
        if (table->is_zero_window()) return {0, 0};
        i64 v = y.val(p);
        if (v > table->vmax)
          throw std::logic_error("assemble_rhs: p-adic Bessel table cutoff exceeded");
        return table->value_at(y);
      }
      i64 v = y.val(p);
      PadicModulus ym = PadicModulus::of_rat(y, p);
      if (use_ap) return bessel_closed_form_ap(rep, zeta, k_ap, ym.unit, v);
      return bessel_closed_form_ox(rep, zeta, ym.unit, v);
    }
  };

  std::vector<LocalBessel> locals;
  std::vector<i64> r_primes;
  std::vector<int> r_caps;
  for (auto& f : factorize(MN)) {
    LocalBessel lb;
    lb.p = f.p;
    lb.rep = local.models.at(f.p);
    lb.zeta = PadicModulus::of_rat(zeta_rat, f.p);
    // Phi_p: units-restriction of the new vector at p | N, times phi_p at p | M
    PadicShellFunction phi = PadicShellFunction::indicator_units(f.p);
    bool ap_here = false;
    int k_here = 0;
    if (inst.M % f.p == 0) {
      auto& spec = inst.phi_p.at(f.p);
      phi = spec.build(f.p);
      if (spec.kind == PhiPSpec::Progression) { ap_here = true; k_here = spec.k; }
    }
    int vlam = (int)v_p(lam, f.p);
    int cutoff = inst.r_extra_shells;  // highest shell = r_cap - v_p(lambda)
    if (mode == DualMode::General) {
      BesselRequest req{lb.rep, phi, lb.zeta, cutoff};
      lb.table = bessel_general(req);
    } else if (mode == DualMode::Progression && ap_here) {
      lb.use_ap = true;
      lb.k_ap = k_here;
    }
    locals.push_back(std::move(lb));
    r_primes.push_back(f.p);
    r_caps.push_back(vlam + inst.r_extra_shells);
  }

  // enumerate r | (MN)^infty up to the per-prime caps
  std::vector<i64> rs;
  {
    std::function<void(size_t, i64)> rec = [&](size_t i, i64 cur) {
      if (i == r_primes.size()) { rs.push_back(cur); return; }
      i64 v = cur;
      for (int j = 0; j <= r_caps[i]; ++j) {
        rec(i + 1, v);
        if (j < r_caps[i]) v *= r_primes[i];
      }
    };
    rec(0, 1);
  }
  std::sort(rs.begin(), rs.end());

  double cpow = std::pow((double)inst.q, (double)(n - 2));
  for (int i = 2; i <= n - 1; ++i)
    cpow *= std::pow((double)std::llabs(inst.c[i - 2]), (double)(n - i) * ((double)i / 2.0 - 1.0));

  double ycut = detail::arch_envelope_cut(*local.arch, inst.arch_cut_tol, 1e9);

  AssemblySide out;
  double scale_probe = 0;

  std::vector<i64> d(std::max(0, n - 2), 1);
  detail::enumerate_chains(inst, d, n - 1, [&](const std::vector<i64>& dch) {
    // fixed-chain constants
    i64 Qcd = inst.q;  // q c_2 ... c_{n-1} / (d_{n-1} ... d_2)
    for (i64 ci : inst.c) Qcd *= std::abs(ci);
    i64 dprod_check = 1;
    for (i64 di : dch) dprod_check *= di;
    Qcd /= dprod_check;
    double ddenom = 1.0;
    Rat dratio(1);
    for (int i = 2; i <= n - 1; ++i) {
      ddenom *= std::pow((double)dch[i - 2], (double)i * (n - i) / 2.0);
      dratio *= rat_pow(Rat(dch[i - 2]), i) / rat_pow(Rat(std::llabs(inst.c[i - 2])), n - i);
    }
    KloostermanSpec kspec{n, inst.q, inst.c, dch};

    for (i64 r : rs) {
      // gamma = r m / (lambda q^n) * dratio; skip r when every p-adic factor
      // dies on this valuation pattern (cheap probe at m = 1)
      Rat gbase = Rat(r, (i128)lam) * dratio / rat_pow(Rat(inst.q), n);
      i64 x_r = 0;
      if (inst.q > 1)
        x_r = mulmod(mulmod(invmod(mulmod(imod(inst.a, inst.q), imod(lam, inst.q), inst.q), inst.q),
                            imod(inst.ell, inst.q), inst.q),
                     imod(r, inst.q), inst.q);

      for (i64 sign : {(i64)1, (i64)-1}) {
        bool below_cut_streak = false;
        for (i64 am = 1; am <= inst.dual_m_cap; ++am) {
          if (MN > 1 && igcd(am, MN) != 1) continue;
          i64 m = sign * am;
          Rat gamma = gbase * Rat(m);
          double gd = gamma.to_double();
          if (std::abs(gd) > ycut) { below_cut_streak = true; break; }
          cplx bp{1, 0};
          for (auto& lb : locals) {
            bp *= lb.eval(gamma);
            if (std::abs(bp) == 0.0) break;
          }
          if (std::abs(bp) == 0.0) continue;
          cplx kl = (n == 2) ? e_frac(mulmod(x_r, imod(m, std::max<i64>(inst.q, 1)), std::max<i64>(inst.q, 1)),
                                      inst.q)
                             : kloosterman_classical(kspec, x_r, m);
          cplx neb{1, 0};
          if (inst.N > 1) {
            i64 mbar = invmod(imod(m, inst.N), inst.N);
            neb = std::conj(inst.nebentypus(mulmod(mbar, imod(Qcd, inst.N), inst.N)));
          }
          std::vector<i64> idx(dch.rbegin(), dch.rend());
          idx.push_back(m);
          cplx A = oracle.coeff(idx);
          if (std::abs(A) == 0.0) continue;
          cplx binf = (*local.arch)(gd);
          cplx term = kl * neb * A / (std::pow((double)am, (n - 1) / 2.0) * ddenom) * binf * bp;
          out.value += term;
          ++out.terms;
          scale_probe = std::max(scale_probe, std::abs(term));
          if (capture) capture->push_back({m, r, dch, term});
        }
        if (!below_cut_streak && inst.dual_m_cap < 1000000000)
          out.tail_estimate += inst.term_tol;  // cap reached without envelope cut
      }
    }
  });

  out.value *= cpow;
  out.tail_estimate += inst.arch_cut_tol * (double)out.terms;
  out.tail_estimate *= cpow;
  return out;
}

struct Gl2Report {
  cplx lhs, rhs;
  double rel_err;
  double lhs_tail = 0, rhs_tail = 0;
  i64 lhs_terms = 0, rhs_terms = 0;
  double seconds = 0;
};

// End-to-end GL(2) check with the built-in Delta generator: N = 1, l = 1,
// M = 1, holomorphic weight-12 archimedean data.
inline Gl2Report verify_voronoi_gl2(i64 q, i64 a, const BumpFunction& phi, i64 tau_range = 10000,
                                    double sigma = 2.5, double height = -1.0,
                                    std::vector<DualTerm>* capture = nullptr) {
  VoronoiInstance inst;
  inst.n = 2;
  inst.N = 1;
  inst.nebentypus = DirichletCharacter(1, {});
  inst.a = a;
  inst.ell = 1;
  inst.q = q;
  inst.M = 1;
  inst.phi_inf = phi;
  inst.validate();

  DeltaOracle oracle(tau_range);
  ArchRep arch = ArchRep::holomorphic_discrete_series(12);
  double T = height > 0 ? height : adaptive_height(arch, phi, sigma);
  DualLocalData local;
  local.arch = std::make_shared<BesselEvaluatorReal>(arch, phi, sigma, T);

  // guard: the dual range must stay inside the generated tau table
  inst.dual_m_cap = tau_range;

  auto t0 = std::chrono::steady_clock::now();
  Gl2Report rep;
  auto lhs = assemble_lhs(inst, oracle);
  auto rhs = assemble_rhs(inst, oracle, local, DualMode::General, capture);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.lhs = lhs.value;
  rep.rhs = rhs.value;
  rep.lhs_terms = lhs.terms;
  rep.rhs_terms = rhs.terms;
  rep.rhs_tail = rhs.tail_estimate;
  double denom = std::max(std::abs(lhs.value), std::abs(rhs.value));
  rep.rel_err = denom == 0.0 ? std::abs(lhs.value - rhs.value) : std::abs(lhs.value - rhs.value) / denom;
  return rep;
}

}  // namespace voronoi
