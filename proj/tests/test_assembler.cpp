#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "voronoi/assembler.hpp"

using namespace voronoi;

namespace {

SatakeModel unitary_model(int n, const std::vector<i64>& primes, double seed) {
  SatakeModel m;
  for (i64 p : primes) {
    SatakeParams mu{p, {}};
    double tot = 0;
    for (int i = 0; i < n - 1; ++i) {
      double a = seed * (i + 1) + 0.31 * (double)(p % 23);
      tot += a;
      mu.mu.push_back(std::polar(1.0, a));
    }
    mu.mu.push_back(std::polar(1.0, -tot));
    m[p] = mu;
  }
  return m;
}

LocalRepresentation minimal_rep(i64 p, int n, int a_pi, int max_cond, double seed) {
  TwistMinimalRep tm;
  tm.p = p; tm.n = n; tm.a_pi = a_pi;
  tm.eps0 = std::polar(1.0, seed);
  int idx = 1;
  for (auto& chi : enumerate_padic_characters(p, max_cond))
    if (chi.cond_exp() > 0) tm.eps_chi[chi] = std::polar(1.0, seed * 0.7 + 0.41 * idx++);
  return LocalRepresentation::twist_minimal(tm);
}

}  // namespace

TEST_CASE("tau coefficients") {
  auto tau = tau_coefficients(1000);
  CHECK((i64)tau[1] == 1);
  CHECK((i64)tau[2] == -24);
  CHECK((i64)tau[3] == 252);
  CHECK((i64)tau[4] == -1472);
  CHECK((i64)tau[5] == 4830);
  CHECK((i64)tau[6] == -6048);
  CHECK((i64)tau[7] == -16744);
  CHECK((i64)tau[10] == -115920);
  CHECK((i64)tau[11] == 534612);
  // multiplicativity and the Hecke recursion at prime powers
  CHECK(tau[6] == tau[2] * tau[3]);
  CHECK(tau[4] == tau[2] * tau[2] - (i128)2048 * 1);  // tau(p^2) = tau(p)^2 - p^11
  // Deligne bound |tau(p)| <= 2 p^{11/2}
  for (i64 p = 2; p <= 997; ++p) {
    if (!is_prime(p)) continue;
    double bound = 2.0 * std::pow((double)p, 5.5);
    CHECK(std::abs((double)tau[p]) <= bound);
  }
  CHECK_THROWS(tau_coefficients(200001));
}

TEST_CASE("delta oracle") {
  DeltaOracle oracle(100);
  CHECK(std::abs(oracle.coeff({1}) - cplx{1, 0}) < 1e-15);
  CHECK(std::abs(oracle.coeff({2}) - cplx{-24.0 / std::pow(2.0, 5.5), 0}) < 1e-15);
  CHECK(std::abs(oracle.coeff({-3}) - oracle.coeff({3})) < 1e-15);
  CHECK(oracle.coeff({0}) == cplx{0, 0});
  CHECK_THROWS(oracle.coeff({101}));
}

TEST_CASE("assemble_lhs") {
  DeltaOracle oracle(100);
  VoronoiInstance inst;
  inst.n = 2;
  inst.nebentypus = DirichletCharacter(1, {});
  inst.q = 1;
  inst.phi_inf = plateau_bump(10, 20);
  auto lhs = assemble_lhs(inst, oracle);
  cplx direct = 0;
  for (i64 m = 10; m <= 20; ++m)
    direct += oracle.coeff({m}) / std::sqrt((double)m) * inst.phi_inf((double)m);
  CHECK(std::abs(lhs.value - direct) < 1e-14);

  // zero test function
  VoronoiInstance z = inst;
  z.phi_inf.f = [](double) { return 0.0; };
  CHECK(std::abs(assemble_lhs(z, oracle).value) < 1e-15);

  // e(am/lq) phase enters
  VoronoiInstance tw = inst;
  tw.q = 7;
  tw.a = 2;
  auto lhs2 = assemble_lhs(tw, oracle);
  cplx direct2 = 0;
  for (i64 m = 10; m <= 20; ++m)
    direct2 += e_frac(2 * m, 7) * oracle.coeff({m}) / std::sqrt((double)m) * tw.phi_inf((double)m);
  CHECK(std::abs(lhs2.value - direct2) < 1e-14);
}

TEST_CASE("progression gating keeps one residue class") {
  SatakeModel model = unitary_model(2, {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}, 0.9);
  SatakeOracle oracle(2, model);
  VoronoiInstance inst;
  inst.n = 2;
  inst.N = 1;
  inst.nebentypus = DirichletCharacter(1, {});
  inst.M = 5;
  inst.phi_p[5] = PhiPSpec{PhiPSpec::Progression, 1, {}};
  inst.phi_inf = plateau_bump(10, 30);
  auto lhs = assemble_lhs(inst, oracle);
  cplx direct = 0;
  for (i64 m = 10; m <= 30; ++m) {
    if (m % 5 != 1) continue;
    direct += oracle.coeff({m}) / std::sqrt((double)m) * inst.phi_inf((double)m);
  }
  CHECK(std::abs(lhs.value - direct) < 1e-14);
}

TEST_CASE("lhs periodicity in a mod lq") {
  SatakeModel model = unitary_model(3, {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}, 1.7);
  SatakeOracle oracle(3, model);
  VoronoiInstance inst;
  inst.n = 3;
  inst.N = 1;
  inst.nebentypus = DirichletCharacter(1, {});
  inst.q = 7;
  inst.a = 3;
  inst.c = {2};
  inst.phi_inf = plateau_bump(8, 28);
  auto v1 = assemble_lhs(inst, oracle);
  inst.a = 3 + 7;
  auto v2 = assemble_lhs(inst, oracle);
  CHECK(std::abs(v1.value - v2.value) < 1e-14);
}

TEST_CASE("csv oracle round trip") {
  DeltaOracle oracle(60);
  const char* path = "/tmp/voronoi_csv_test.csv";
  {
    std::ofstream out(path);
    for (i64 m = 1; m <= 60; ++m) {
      cplx v = oracle.coeff({m});
      out << m << "," << std::setprecision(17) << v.real() << "," << v.imag() << "\n";
    }
  }
  auto csv = ingest_csv(path, 2, "hecke");
  VoronoiInstance inst;
  inst.n = 2;
  inst.nebentypus = DirichletCharacter(1, {});
  inst.q = 3;
  inst.a = 1;
  inst.phi_inf = plateau_bump(10, 50);
  auto a = assemble_lhs(inst, oracle);
  auto b = assemble_lhs(inst, csv);
  CHECK(std::abs(a.value - b.value) < 1e-12);

  // error paths: empty file, malformed rows, duplicates, missing A(1) = 1
  {
    std::ofstream out("/tmp/voronoi_csv_empty.csv");
  }
  CHECK_THROWS(ingest_csv("/tmp/voronoi_csv_empty.csv", 2, "hecke"));
  {
    std::ofstream out("/tmp/voronoi_csv_bad.csv");
    out << "1,1.0,0.0\nfoo,1.0,0.0\n";
  }
  CHECK_THROWS(ingest_csv("/tmp/voronoi_csv_bad.csv", 2, "hecke"));
  {
    std::ofstream out("/tmp/voronoi_csv_dup.csv");
    out << "1,1.0,0.0\n1,2.0,0.0\n";
  }
  CHECK_THROWS(ingest_csv("/tmp/voronoi_csv_dup.csv", 2, "hecke"));
  {
    std::ofstream out("/tmp/voronoi_csv_non1.csv");
    out << "1,0.5,0.0\n";
  }
  CHECK_THROWS(ingest_csv("/tmp/voronoi_csv_non1.csv", 2, "hecke"));
}

TEST_CASE("refined mode equals general mode (n = 2)") {
  // N = 27, l = 9 (square-full, supp l = supp N), twist-minimal a(pi) = 3
  const i64 N = 27, ell = 9;
  auto rep = minimal_rep(3, 2, 3, 2, 0.37);
  SatakeModel model = unitary_model(2, {2, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                        59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113},
                                    2.3);
  // extend to all primes below the dual cutoff
  for (i64 p = 127; p <= 1200; ++p)
    if (is_prime(p)) model[p] = unitary_model(2, {p}, 2.3)[p];
  SatakeOracle oracle(2, model);

  ArchRep arch = ArchRep::tempered_principal_series({0.83, -0.83});
  auto phi = plateau_bump(3, 12);

  size_t gens = unit_group(N).gens.size();
  for (i64 q : {1, 2}) {
    for (i64 neb : {0, 1}) {
      std::vector<i64> neben_exps(gens, 0);
      neben_exps[0] = neb;
      VoronoiInstance inst;
      inst.n = 2;
      inst.N = N;
      inst.nebentypus = DirichletCharacter(N, neben_exps);
      inst.a = 1;
      inst.ell = ell;
      inst.q = q;
      inst.phi_inf = phi;
      inst.dual_m_cap = 800;

      double T = adaptive_height(arch, phi, default_sigma(2));
      DualLocalData local;
      local.models[3] = rep;
      local.arch = std::make_shared<BesselEvaluatorReal>(arch, phi, default_sigma(2), T);

      auto general = assemble_rhs(inst, oracle, local, DualMode::General);
      auto refined = assemble_rhs(inst, oracle, local, DualMode::Refined);
      double denom = std::max(std::abs(general.value), std::abs(refined.value));
      REQUIRE(denom > 1e-12);
      CHECK(std::abs(general.value - refined.value) / denom < 1e-8);
    }
  }
}

TEST_CASE("refined mode equals general mode (n = 3, shared caps)") {
  const i64 N = 81, ell = 9;
  auto rep = minimal_rep(3, 3, 4, 2, 1.21);
  SatakeModel model = unitary_model(3, {2, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}, 0.61);
  for (i64 p = 53; p <= 400; ++p)
    if (is_prime(p)) model[p] = unitary_model(3, {p}, 0.61)[p];
  SatakeOracle oracle(3, model);

  ArchRep arch = ArchRep::tempered_principal_series({1.1, 0.0, -1.1});
  auto phi = plateau_bump(3, 12);

  VoronoiInstance inst;
  inst.n = 3;
  inst.N = N;
  inst.nebentypus = DirichletCharacter(N, std::vector<i64>(unit_group(N).gens.size(), 0));
  inst.a = 5;
  inst.ell = ell;
  inst.q = 2;
  inst.c = {2};
  inst.phi_inf = phi;
  inst.dual_m_cap = 300;  // identical finite lattice on both sides

  double T = adaptive_height(arch, phi, default_sigma(3));
  DualLocalData local;
  local.models[3] = rep;
  local.arch = std::make_shared<BesselEvaluatorReal>(arch, phi, default_sigma(3), T);

  auto general = assemble_rhs(inst, oracle, local, DualMode::General);
  auto refined = assemble_rhs(inst, oracle, local, DualMode::Refined);
  double denom = std::max(std::abs(general.value), std::abs(refined.value));
  REQUIRE(denom > 1e-12);
  CHECK(std::abs(general.value - refined.value) / denom < 1e-8);
}

TEST_CASE("progression mode equals general mode") {
  // M = 3 with k = 1 at a twist-minimal prime: N = 27, l = 9, M = 3
  const i64 N = 27, ell = 9;
  auto rep = minimal_rep(3, 2, 3, 2, 2.9);
  SatakeModel model = unitary_model(2, {2, 5, 7, 11, 13}, 1.9);
  for (i64 p = 17; p <= 1200; ++p)
    if (is_prime(p)) model[p] = unitary_model(2, {p}, 1.9)[p];
  SatakeOracle oracle(2, model);

  ArchRep arch = ArchRep::tempered_principal_series({0.7, -0.7});
  auto phi = plateau_bump(3, 12);

  VoronoiInstance inst;
  inst.n = 2;
  inst.N = N;
  inst.M = 3;
  inst.phi_p[3] = PhiPSpec{PhiPSpec::Progression, 1, {}};
  inst.nebentypus = DirichletCharacter(N, std::vector<i64>(unit_group(N).gens.size(), 0));
  inst.a = 1;
  inst.ell = ell;
  inst.q = 1;
  inst.phi_inf = phi;
  inst.dual_m_cap = 600;

  double T = adaptive_height(arch, phi, default_sigma(2));
  DualLocalData local;
  local.models[3] = rep;
  local.arch = std::make_shared<BesselEvaluatorReal>(arch, phi, default_sigma(2), T);

  auto general = assemble_rhs(inst, oracle, local, DualMode::General);
  auto ap = assemble_rhs(inst, oracle, local, DualMode::Progression);
  double denom = std::max(std::abs(general.value), std::abs(ap.value));
  REQUIRE(denom > 1e-12);
  CHECK(std::abs(general.value - ap.value) / denom < 1e-8);
}

TEST_CASE("the refined p-adic factor is a twisted-root-number character sum") {
  // For square-full l the local Bessel factor at p | N is, up to a constant
  // independent of m, the sum over primitive chi mod l of
  // chi(-1)^{n-1} chi(m) eps(1/2, chi pi) eps(1/2, chi^{-1}) twisted by fixed
  // unit classes: the m-dependence enters exactly through chi(m).
  const i64 p = 3, ell = 9;
  const int n = 2, a_pi = 3;
  auto rep = minimal_rep(p, n, a_pi, 2, 0.77);
  const auto& tm = rep.minimal();
  i64 a = 5, q = 2, lam = 2187;  // lambda for N = 27, l = 9, n = 2
  i64 rstar = 27;                // collapses v_3(gamma) to -max{a_pi, 2 a(chi)} = -4
  Rat zeta(a, (i128)ell * q);
  auto zmod = PadicModulus::of_rat(zeta, p);

  // match p-adic characters of conductor exponent 2 with primitive Dirichlet
  // characters mod 9 by their values on units
  auto dirichlet = enumerate_characters(ell);
  std::map<const DirichletCharacter*, const PadicCharacter*> match;
  auto padic = enumerate_padic_characters(p, 2);
  for (auto& chi : dirichlet) {
    if (!chi.is_primitive()) continue;
    for (auto& pc : padic) {
      if (pc.cond_exp() != 2) continue;
      bool same = true;
      for (i64 u : unit_class_reps(p, 2))
        if (std::abs(pc.eval_unit(u) - chi(u)) > 1e-9) { same = false; break; }
      if (same) { match[&chi] = &pc; break; }
    }
  }
  REQUIRE(match.size() == 4);  // phi(9) - phi(3)

  auto gamma_of = [&](i64 m) { return Rat(rstar, (i128)lam) * Rat(m) / Rat((i128)q * q); };
  auto local_factor = [&](i64 m) {
    Rat gamma = gamma_of(m);
    return bessel_closed_form_ox(rep, zmod, gamma.unit_mod(p, 6), gamma.val(p));
  };
  // fixed unit class of zeta^{-1} gamma / m, the m-free part of the twist
  i64 u0 = (gamma_of(1) / zeta).unit_mod(p, 2);
  auto char_sum = [&](i64 m) {
    cplx s = 0;
    for (auto& [chi, pc] : match) {
      cplx eps_pi = tm.eps_chi.at(*pc);
      s += (*chi)(ell - 1) * (*chi)(mulmod(imod(m, ell), u0, ell)) * eps_pi *
           epsilon_half_of_inverse(*chi);
    }
    return s;
  };
  // with the twist in place the ratio is the m-independent volume constant
  // zeta(1) q^{a(chi pi)(n-2)/2 + v(zeta)/2}
  cplx base_ratio = local_factor(1) / char_sum(1);
  double expected_const = (1.0 / (1.0 - 1.0 / (double)p)) * std::pow((double)p, 0.0 - 1.0);
  CHECK(std::abs(base_ratio) == doctest::Approx(expected_const).epsilon(1e-9));
  for (i64 m : {2, 5, 7, 11, 13}) {
    cplx lf = local_factor(m);
    cplx cs = char_sum(m);
    CHECK(std::abs(lf - base_ratio * cs) < 1e-10 * (1.0 + std::abs(lf)));
  }
}

TEST_CASE("dual side truncation stability") {
  auto phi = plateau_bump(5, 40);
  DeltaOracle oracle(4000);
  VoronoiInstance inst;
  inst.n = 2;
  inst.nebentypus = DirichletCharacter(1, {});
  inst.q = 1;
  inst.phi_inf = phi;
  inst.dual_m_cap = 4000;

  DualLocalData local;
  ArchRep arch = ArchRep::holomorphic_discrete_series(12);
  double T = adaptive_height(arch, phi, 2.5);
  local.arch = std::make_shared<BesselEvaluatorReal>(arch, phi, 2.5, T);

  auto base = assemble_rhs(inst, oracle, local, DualMode::General);
  VoronoiInstance finer = inst;
  finer.arch_cut_tol = inst.arch_cut_tol / 100.0;
  finer.r_extra_shells += 2;
  auto deep = assemble_rhs(finer, oracle, local, DualMode::General);
  CHECK(std::abs(base.value - deep.value) <= base.tail_estimate + 1e-9);
}

TEST_CASE("end-to-end GL(2) with the built-in Delta generator, q = 1") {
  auto rep = verify_voronoi_gl2(1, 1, plateau_bump(5, 40), 4000);
  CHECK(rep.rel_err < 1e-4);
  CHECK(std::abs(rep.lhs) > 1e-3);  // nondegenerate comparison
}
