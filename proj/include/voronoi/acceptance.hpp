#pragma once

// The acceptance gates: one callable per criterion, each returning a
// pass/fail verdict with the measured quantity, shared by the acceptance test
// binary and the `verify` CLI subcommands.

#include <chrono>
#include <random>
#include <sstream>

#include "voronoi/assembler.hpp"

namespace voronoi {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

namespace acceptance {

using clock = std::chrono::steady_clock;

inline double elapsed(clock::time_point t0) {
  return std::chrono::duration<double>(clock::now() - t0).count();
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

// 1. Gauss-sum lemma: closed form == brute-force unit average.
inline CriterionResult gauss_lemma() {
  auto t0 = clock::now();
  double worst = 0;
  for (i64 p : {2, 3, 5, 7}) {
    for (auto& chi : enumerate_padic_characters(p, 3)) {
      cplx eps = chi.cond_exp() > 0 ? epsilon_half_inv_padic(chi) : cplx{1, 0};
      for (i64 va = -3; va <= 1; ++va)
        for (i64 u : {(i64)1, p + 1, 2 * p + 1}) {
          if (u % p == 0) continue;
          cplx brute = gauss_sum_padic(p, u, va, chi);
          cplx closed = gauss_sum_padic_closed(p, u, va, chi, eps);
          worst = std::max(worst, std::abs(brute - closed));
        }
    }
  }
  return {1, "gauss-sum lemma (closed form vs unit average)", worst <= 1e-10,
          "max err " + fmt(worst), elapsed(t0)};
}

// 2. p-adic Mellin round trip on 200 random shell functions.
inline CriterionResult mellin_round_trip() {
  auto t0 = clock::now();
  std::mt19937_64 rng(20240);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<i64> primes{2, 3, 5, 7};
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    i64 p = primes[trial % 4];
    std::uniform_int_distribution<int> lev(0, 2), width(0, 5), base(-3, 2);
    PadicShellFunction f;
    f.p = p;
    f.level = lev(rng);
    f.vmin = base(rng);
    f.vmax = f.vmin + width(rng);
    const auto& reps = unit_class_reps(p, f.level);
    f.values.assign(f.vmax - f.vmin + 1, std::vector<cplx>(reps.size()));
    for (auto& row : f.values)
      for (auto& x : row) x = {U(rng), U(rng)};
    auto back = mellin_inverse_padic(mellin_padic(f));
    for (int v = f.vmin; v <= f.vmax; ++v)
      for (i64 u : reps) {
        Rat y = rat_from_unit_val(p, u, v);
        worst = std::max(worst, std::abs(back.value_at(y) - f.value_at(y)));
      }
  }
  return {2, "p-adic Mellin round trip (200 random shell functions)", worst <= 1e-12,
          "max err " + fmt(worst), elapsed(t0)};
}

namespace detail {

inline LocalRepresentation accept_minimal(i64 p, int n, int a_pi, u_int64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> A(0, kTwoPi);
  TwistMinimalRep tm;
  tm.p = p; tm.n = n; tm.a_pi = a_pi;
  tm.eps0 = std::polar(1.0, A(rng));
  for (auto& chi : enumerate_padic_characters(p, 3))
    if (chi.cond_exp() > 0) tm.eps_chi[chi] = std::polar(1.0, A(rng));
  return LocalRepresentation::twist_minimal(tm);
}

inline LocalRepresentation accept_unramified(i64 p, int n, u_int64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> A(0, kTwoPi);
  SatakeParams mu{p, {}};
  for (int i = 0; i < n; ++i) mu.mu.push_back(std::polar(1.0, A(rng)));
  return LocalRepresentation::unramified(mu);
}

inline PadicShellFunction accept_random_level1(i64 p, u_int64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  PadicShellFunction f;
  f.p = p; f.level = 1; f.vmin = 0; f.vmax = 0;
  f.values.assign(1, std::vector<cplx>(unit_class_reps(p, 1).size()));
  for (auto& x : f.values[0]) x = {U(rng), U(rng)};
  return f;
}

}  // namespace detail

// 3. Duality equation over the full grid.
inline CriterionResult duality_grid() {
  auto t0 = clock::now();
  double worst = 0;
  u_int64_t seed = 1;
  for (i64 p : {2, 3, 5}) {
    for (int n : {2, 3}) {
      std::vector<LocalRepresentation> reps{detail::accept_unramified(p, n, seed++)};
      for (int a : {3, 4, 5}) reps.push_back(detail::accept_minimal(p, n, a, seed++));
      for (auto& rep : reps) {
        for (i64 zv : {-2, -1, 0}) {
          PadicModulus zeta =
              zv == 0 ? PadicModulus::none() : PadicModulus::of(zv == -1 ? 1 : p + 1, zv);
          std::vector<PadicShellFunction> phis{PadicShellFunction::indicator_units(p),
                                               PadicShellFunction::indicator_one_plus_pk(p, 1),
                                               detail::accept_random_level1(p, seed++)};
          for (auto& phi : phis) {
            int D = std::max(40, n * (rep.a_pi() + 2 + (int)std::abs(zv)) + 10);
            for (auto& chi : enumerate_padic_characters(p, 2))
              worst = std::max(worst, verify_duality(rep, phi, zeta, chi, D));
          }
        }
      }
    }
  }
  return {3, "duality equation (Laurent coefficients to order 40+)", worst <= 1e-9,
          "max residual " + fmt(worst), elapsed(t0)};
}

// 4. Closed forms vs the general engine, plus support bounds.
inline CriterionResult closed_forms_vs_engine() {
  auto t0 = clock::now();
  double worst = 0, support_leak = 0;
  u_int64_t seed = 400;
  for (i64 p : {2, 3, 5}) {
    for (int n : {2, 3}) {
      for (int a : {3, 4, 5}) {
        auto rep = detail::accept_minimal(p, n, a, seed++);
        for (i64 zv : {-2, -1, 0}) {
          PadicModulus zeta = zv == 0 ? PadicModulus::none() : PadicModulus::of(1, zv);
          // units test vector: ox closed form
          BesselRequest rq{rep, PadicShellFunction::indicator_units(p), zeta, 8};
          auto table = bessel_general(rq);
          int support = std::max(a, (int)(-(i64)n * zv));
          for (int v = -support - 3; v <= 2; ++v)
            for (i64 u : unit_class_reps(p, std::max(table.level, 1))) {
              cplx engine = table.is_zero_window() ? cplx{0, 0}
                                                   : table.value_at(rat_from_unit_val(p, u, v));
              worst = std::max(worst, std::abs(engine - bessel_closed_form_ox(rep, zeta, u, v)));
            }
          // progression test vectors: ap closed form
          for (int k : {1, 2}) {
            BesselRequest rk{rep, PadicShellFunction::indicator_one_plus_pk(p, k), zeta, 8};
            auto tk = bessel_general(rk);
            int lo = -std::max(a, n * std::max(k, (int)-zv)) - 2;
            for (int v = lo; v <= 1; ++v)
              for (i64 u : unit_class_reps(p, std::max(tk.level, 1))) {
                cplx engine = tk.is_zero_window() ? cplx{0, 0}
                                                  : tk.value_at(rat_from_unit_val(p, u, v));
                worst = std::max(worst, std::abs(engine - bessel_closed_form_ap(rep, zeta, k, u, v)));
              }
          }
          // support bound
          int bound = bessel_support_bound(rep, zeta);
          if (!table.is_zero_window())
            for (int v = table.vmin; v < bound; ++v)
              for (i64 u : unit_class_reps(p, table.level))
                support_leak = std::max(support_leak, std::abs(table.value(u, v)));
        }
      }
    }
  }
  bool pass = worst <= 1e-10 && support_leak <= 1e-12;
  return {4, "closed forms vs engine + support bounds", pass,
          "max err " + fmt(worst) + ", support leak " + fmt(support_leak), elapsed(t0)};
}

// 5. Geometric identity: brute-force integral vs Kl/delta expansion.
inline CriterionResult geometric_identity() {
  auto t0 = clock::now();
  double worst = 0;
  for (i64 p : {2, 3, 5}) {
    for (int n : {2, 3}) {
      SatakeParams mu{p, {}};
      double tot = 0;
      for (int i = 0; i < n - 1; ++i) {
        double ang = 0.93 + 0.11 * (double)p + 0.57 * i;
        tot += ang;
        mu.mu.push_back(std::polar(1.0, ang));
      }
      mu.mu.push_back(std::polar(1.0, -tot));
      for (i64 zv : {-2, -1, 0}) {
        Rat zeta = zv == 0 ? Rat(p == 2 ? 1 : 2) : rat_from_unit_val(p, 1, zv);
        // xi grids: trivial plus one non-unit entry within the verified cone
        std::vector<ShiftModulus> sms;
        {
          auto base = ShiftModulus::trivial(p, n);
          base.zeta = zeta;
          sms.push_back(base);
          for (int slot = 0; slot < n; ++slot)
            for (int sgn : {-1, 1}) {
              auto sm = base;
              sm.xi[slot] = rat_from_unit_val(p, 1, sgn);
              bool ok = true;
              for (int i = 1; i + 1 < n; ++i)
                if (sm.xi[i].val(p) < sm.xi[i + 1].val(p)) ok = false;
              if (ok) sms.push_back(sm);
            }
        }
        for (auto& sm : sms)
          for (i64 vy : {0, 1, 2, 3}) {
            Rat y = rat_from_unit_val(p, p == 2 ? 1 : 2, vy);
            auto rep = verify_geometric_identity(y, sm, mu, n);
            worst = std::max(worst, rep.residual);
          }
      }
    }
  }
  return {5, "geometric identity (hyper-Kloosterman integral vs expansion)", worst <= 1e-9,
          "max residual " + fmt(worst), elapsed(t0)};
}

// 6. Schur triple-oracle equality and Shintani vanishing.
inline CriterionResult schur_oracles() {
  auto t0 = clock::now();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> R(0.5, 2.0), A(0, kTwoPi);
  double worst = 0;
  bool vanish_exact = true;
  for (int n = 1; n <= 4; ++n) {
    // all dominant lambda with |lambda| <= 6
    std::vector<Partition> lams;
    Partition cur(n, 0);
    std::function<void(int, i64, i64)> rec = [&](int idx, i64 prev, i64 rem) {
      if (idx == n) { lams.push_back(cur); return; }
      for (i64 v = 0; v <= std::min(prev, rem); ++v) {
        cur[idx] = v;
        rec(idx + 1, v, rem - v);
      }
    };
    rec(0, 6, 6);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<cplx> t;
      for (int i = 0; i < n; ++i) t.push_back(std::polar(R(rng), A(rng)));
      for (auto& lam : lams) {
        cplx a = schur_bialternant(lam, t);
        cplx b = schur_jacobi_trudi(lam, t);
        worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
        i64 w = 0;
        for (i64 x : lam) w += x;
        if (w <= 8) {
          cplx c = schur_tableaux(lam, t);
          worst = std::max(worst, std::abs(a - c) / (1.0 + std::abs(a)));
        }
      }
    }
    if (n >= 2) {
      SatakeParams mu{3, {}};
      for (int i = 0; i < n; ++i) mu.mu.push_back(std::polar(1.0, A(rng)));
      Partition bad(n, 0);
      bad[n - 1] = 1;  // strictly increasing tail: not dominant
      if (shintani_whittaker(bad, mu) != cplx{0, 0}) vanish_exact = false;
    }
  }
  bool pass = worst <= 1e-9 && vanish_exact;
  return {6, "Schur triple-oracle equality + Shintani vanishing", pass,
          "max rel err " + fmt(worst) + (vanish_exact ? ", vanishing exact" : ", VANISHING LEAK"),
          elapsed(t0)};
}

// 7. Classical Kloosterman sums: brute force, CRT, Weil bound.
inline CriterionResult classical_kloosterman() {
  auto t0 = clock::now();
  double worst = 0;
  for (i64 q = 1; q <= 100; ++q) {
    KloostermanSpec spec{3, q, {1}, {1}};
    for (i64 x = 0; x < q; ++x)
      for (i64 y = 0; y < q; ++y) {
        cplx a = kloosterman_classical(spec, x, y);
        cplx b = kloosterman_textbook(imod(-x, q), y, q);
        worst = std::max(worst, std::abs(a - b) / (1.0 + (double)euler_phi(q)));
      }
  }
  std::mt19937_64 rng(5);
  double crt_worst = 0;
  for (i64 q = 6; q <= 10000; ++q) {
    auto f = factorize(q);
    if (f.size() < 2) continue;  // need a coprime split
    i64 q1 = f[0].q, q2 = q / f[0].q;
    std::uniform_int_distribution<i64> dx(0, q - 1);
    i64 x = dx(rng), y = dx(rng);
    cplx whole = kloosterman_textbook(x, y, q);
    cplx part1 = kloosterman_textbook(mulmod(x, invmod(q2, q1), q1), mulmod(y, invmod(q2, q1), q1), q1);
    cplx part2 = kloosterman_textbook(mulmod(x, invmod(q1, q2), q2), mulmod(y, invmod(q1, q2), q2), q2);
    crt_worst = std::max(crt_worst, std::abs(whole - part1 * part2) / (1.0 + (double)euler_phi(q)));
  }
  bool weil = true;
  for (i64 p = 2; p <= 101; ++p) {
    if (!is_prime(p)) continue;
    for (i64 x = 1; x < p && weil; ++x)
      for (i64 y = 1; y < p; ++y)
        if (std::abs(kloosterman_textbook(x, y, p)) > 2.0 * std::sqrt((double)p) + 1e-9) {
          weil = false;
          break;
        }
  }
  bool pass = worst <= 1e-9 && crt_worst <= 1e-9 && weil;
  return {7, "classical Kloosterman: brute force, CRT, Weil bound", pass,
          "nested vs brute " + fmt(worst) + ", CRT " + fmt(crt_worst) +
              (weil ? ", Weil ok" : ", WEIL FAIL"),
          elapsed(t0)};
}

// 8. Archimedean decay and truncation stability.
inline CriterionResult arch_decay() {
  auto t0 = clock::now();
  ArchRep maass = ArchRep::tempered_principal_series({1.1, -1.1});
  auto phi = plateau_bump(40.0, 320.0);
  std::vector<double> grid{1, 2, 4, 8, 16, 32, 64, 128};
  auto rep = decay_check(maass, phi, grid);
  double sigma = (maass.degree() - 1) / 2.0 + 2.5;
  BesselEvaluatorReal a(maass, phi, sigma, rep.height_used);
  BesselEvaluatorReal b(maass, phi, sigma, 2 * rep.height_used);
  double stab = 0;
  for (double y : grid) stab = std::max({stab, std::abs(a(y) - b(y)), std::abs(a(-y) - b(-y))});
  bool pass = rep.fitted_exponent >= 3.0 && stab <= 1e-6;
  return {8, "archimedean decay exponent + T-doubling stability", pass,
          "fitted " + fmt(rep.fitted_exponent) + " (need >= 3), stability " + fmt(stab) +
              ", T = " + fmt(rep.height_used),
          elapsed(t0)};
}

// 9. End-to-end GL(2) summation with the built-in Delta coefficients.
inline CriterionResult gl2_end_to_end() {
  auto t0 = clock::now();
  auto phi = plateau_bump(5, 40);
  double worst = 0;
  std::string detail;
  struct Case { i64 q, a; };
  for (auto [q, a] : {Case{1, 1}, Case{3, 1}, Case{5, 2}, Case{5, 3}}) {
    auto rep = verify_voronoi_gl2(q, a, phi, 10000);
    worst = std::max(worst, rep.rel_err);
    detail += "q=" + std::to_string(q) + ",a=" + std::to_string(a) + ": rel " + fmt(rep.rel_err) +
              " (tail est " + fmt(rep.rhs_tail) + "); ";
  }
  return {9, "end-to-end GL(2) summation with self-generated tau", worst <= 1e-4, detail,
          elapsed(t0)};
}

// 10. Refined and progression dual-side assembly vs the general engine path.
inline CriterionResult refined_mode_consistency() {
  auto t0 = clock::now();
  auto make_model = [](int n, double seed) {
    SatakeModel m;
    for (i64 p = 2; p <= 1200; ++p) {
      if (!is_prime(p) || p == 3) continue;
      SatakeParams mu{p, {}};
      double tot = 0;
      for (int i = 0; i < n - 1; ++i) {
        double ang = seed * (i + 1) + 0.31 * (double)(p % 23);
        tot += ang;
        mu.mu.push_back(std::polar(1.0, ang));
      }
      mu.mu.push_back(std::polar(1.0, -tot));
      m[p] = mu;
    }
    return m;
  };
  auto minimal = [](i64 p, int n, int a_pi, double seed) {
    TwistMinimalRep tm;
    tm.p = p; tm.n = n; tm.a_pi = a_pi;
    tm.eps0 = std::polar(1.0, seed);
    int idx = 1;
    for (auto& chi : enumerate_padic_characters(p, 2))
      if (chi.cond_exp() > 0) tm.eps_chi[chi] = std::polar(1.0, seed * 0.7 + 0.41 * idx++);
    return LocalRepresentation::twist_minimal(tm);
  };

  double worst = 0;
  // refined, n = 2: N = 27, l = 9 square-full
  {
    SatakeOracle oracle(2, make_model(2, 2.3));
    ArchRep arch = ArchRep::tempered_principal_series({0.83, -0.83});
    auto phi = plateau_bump(3, 12);
    double T = adaptive_height(arch, phi, default_sigma(2));
    DualLocalData local;
    local.models[3] = minimal(3, 2, 3, 0.37);
    local.arch = std::make_shared<BesselEvaluatorReal>(arch, phi, default_sigma(2), T);
    VoronoiInstance inst;
    inst.n = 2;
    inst.N = 27;
    inst.nebentypus = DirichletCharacter(27, std::vector<i64>(unit_group(27).gens.size(), 0));
    inst.a = 1;
    inst.ell = 9;
    inst.q = 2;
    inst.phi_inf = phi;
    inst.dual_m_cap = 800;
    auto g = assemble_rhs(inst, oracle, local, DualMode::General);
    auto r = assemble_rhs(inst, oracle, local, DualMode::Refined);
    worst = std::max(worst, std::abs(g.value - r.value) /
                                std::max({std::abs(g.value), std::abs(r.value), 1e-30}));
  }
  // progression, M = 3: N = 27, l = 9, k = 1
  {
    SatakeOracle oracle(2, make_model(2, 1.9));
    ArchRep arch = ArchRep::tempered_principal_series({0.7, -0.7});
    auto phi = plateau_bump(3, 12);
    double T = adaptive_height(arch, phi, default_sigma(2));
    DualLocalData local;
    local.models[3] = minimal(3, 2, 3, 2.9);
    local.arch = std::make_shared<BesselEvaluatorReal>(arch, phi, default_sigma(2), T);
    VoronoiInstance inst;
    inst.n = 2;
    inst.N = 27;
    inst.M = 3;
    inst.phi_p[3] = PhiPSpec{PhiPSpec::Progression, 1, {}};
    inst.nebentypus = DirichletCharacter(27, std::vector<i64>(unit_group(27).gens.size(), 0));
    inst.a = 1;
    inst.ell = 9;
    inst.q = 1;
    inst.phi_inf = phi;
    inst.dual_m_cap = 600;
    auto g = assemble_rhs(inst, oracle, local, DualMode::General);
    auto ap = assemble_rhs(inst, oracle, local, DualMode::Progression);
    worst = std::max(worst, std::abs(g.value - ap.value) /
                                std::max({std::abs(g.value), std::abs(ap.value), 1e-30}));
  }
  return {10, "refined / progression assembly vs general engine path", worst <= 1e-8,
          "max rel diff " + fmt(worst), elapsed(t0)};
}

}  // namespace acceptance

inline CriterionResult run_criterion(int k) {
  switch (k) {
    case 1: return acceptance::gauss_lemma();
    case 2: return acceptance::mellin_round_trip();
    case 3: return acceptance::duality_grid();
    case 4: return acceptance::closed_forms_vs_engine();
    case 5: return acceptance::geometric_identity();
    case 6: return acceptance::schur_oracles();
    case 7: return acceptance::classical_kloosterman();
    case 8: return acceptance::arch_decay();
    case 9: return acceptance::gl2_end_to_end();
    case 10: return acceptance::refined_mode_consistency();
    default: throw std::invalid_argument("unknown criterion " + std::to_string(k));
  }
}

inline std::vector<CriterionResult> run_acceptance(const std::vector<int>& which = {}) {
  std::vector<int> list = which;
  if (list.empty())
    for (int k = 1; k <= 10; ++k) list.push_back(k);
  std::vector<CriterionResult> out;
  for (int k : list) out.push_back(run_criterion(k));
  return out;
}

}  // namespace voronoi
