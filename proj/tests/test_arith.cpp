#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "voronoi/dirichlet.hpp"
#include "voronoi/kloosterman.hpp"
#include "voronoi/padic.hpp"

using namespace voronoi;

namespace {

// independent oracle: multiplicative closure of the claimed generators
i64 brute_group_order(i64 N, const std::vector<i64>& gens) {
  std::set<i64> seen{1 % std::max<i64>(N, 2)};
  if (N == 1) return 1;
  seen = {1};
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<i64> next = seen;
    for (i64 x : seen)
      for (i64 g : gens) {
        i64 y = mulmod(x, g, N);
        if (next.insert(y).second) grew = true;
      }
    seen = next;
  }
  return (i64)seen.size();
}

// brute-force conductor: smallest d | N with chi constant on residues = 1 mod d
i64 brute_conductor(const DirichletCharacter& chi) {
  i64 N = chi.modulus();
  for (i64 d = 1; d <= N; ++d) {
    if (N % d != 0) continue;
    bool ok = true;
    for (i64 x = 1; x <= N && ok; ++x) {
      if (igcd(x, N) != 1) continue;
      if (imod(x - 1, d) == 0 && std::abs(chi(x) - cplx{1, 0}) > 1e-10) ok = false;
    }
    if (ok) return d;
  }
  return N;
}

}  // namespace

TEST_CASE("unit group structure") {
  auto& g1 = unit_group(1);
  CHECK(g1.phi() == 1);

  auto& g8 = unit_group(8);
  CHECK(g8.phi() == 4);
  std::multiset<i64> orders(g8.orders.begin(), g8.orders.end());
  CHECK(orders == std::multiset<i64>{2, 2});  // C2 x C2

  auto& g45 = unit_group(45);
  CHECK(g45.phi() == 24);
  CHECK(brute_group_order(45, g45.gens) == 24);
  CHECK(g45.phi() == euler_phi(45));

  for (i64 N : {2, 3, 4, 6, 12, 16, 27, 40, 90, 97}) {
    auto& G = unit_group(N);
    CHECK(G.phi() == euler_phi(N));
    CHECK(brute_group_order(N, G.gens) == euler_phi(N));
  }
}

TEST_CASE("character enumeration and conductors") {
  auto cs1 = enumerate_characters(1);
  REQUIRE(cs1.size() == 1);
  CHECK(cs1[0].conductor() == 1);

  auto cs6 = enumerate_characters(6);
  REQUIRE(cs6.size() == 2);
  i64 nontrivial_cond = 0;
  for (auto& chi : cs6)
    if (!chi.is_trivial()) nontrivial_cond = chi.conductor();
  CHECK(nontrivial_cond == 3);

  auto cs5 = enumerate_characters(5);
  REQUIRE(cs5.size() == 4);
  int prim = 0, triv = 0;
  for (auto& chi : cs5) {
    if (chi.is_primitive()) ++prim;
    if (chi.conductor() == 1) ++triv;
  }
  CHECK(prim == 3);
  CHECK(triv == 1);

  // conductor formulas against the brute-force definition
  for (i64 N : {4, 8, 9, 12, 16, 24, 45, 50}) {
    for (auto& chi : enumerate_characters(N)) CHECK(chi.conductor() == brute_conductor(chi));
  }
}

TEST_CASE("character orthogonality") {
  std::mt19937_64 rng(11);
  for (i64 N = 1; N <= 200; ++N) {
    auto chars = enumerate_characters(N);
    REQUIRE((i64)chars.size() == euler_phi(N));
    int pairs = N <= 40 ? -1 : 40;  // all pairs for small N, a sample above
    std::vector<std::pair<i64, i64>> xy;
    if (pairs < 0) {
      for (i64 x = 1; x <= N; ++x)
        for (i64 y = 1; y <= N; ++y)
          if ((N == 1) || (igcd(x, N) == 1 && igcd(y, N) == 1)) xy.push_back({x, y});
    } else {
      std::vector<i64> units;
      for (i64 x = 1; x <= N; ++x)
        if (N == 1 || igcd(x, N) == 1) units.push_back(x);
      std::uniform_int_distribution<size_t> pick(0, units.size() - 1);
      for (int i = 0; i < pairs; ++i) xy.push_back({units[pick(rng)], units[pick(rng)]});
    }
    for (auto [x, y] : xy) {
      cplx s = 0;
      for (auto& chi : chars) s += chi(x) * std::conj(chi(y));
      double expected = imod(x - y, std::max<i64>(N, 1)) == 0 ? (double)euler_phi(N) : 0.0;
      CHECK(std::abs(s - expected) < 1e-10);
    }
  }
}

TEST_CASE("hecke character local values") {
  auto cs4 = enumerate_characters(4);
  DirichletCharacter chi4;
  for (auto& c : cs4)
    if (!c.is_trivial()) chi4 = c;
  // chi(3) = -1 by direct evaluation, so omega_3(3) = chi(3)^{-1} = -1
  CHECK(std::abs(chi4(3) - cplx{-1, 0}) < 1e-12);
  CHECK(std::abs(hecke_character_local_value(chi4, 3, 1) - cplx{-1, 0}) < 1e-12);
  CHECK(std::abs(hecke_character_local_value(chi4, 3, 0) - cplx{1, 0}) < 1e-12);
  for (auto& c : enumerate_characters(7))
    CHECK(std::abs(hecke_character_local_value(c, 5, 0) - cplx{1, 0}) < 1e-12);
  CHECK_THROWS(hecke_character_local_value(chi4, 2, 1));
  // multiplicativity in v
  auto cs9 = enumerate_characters(9);
  for (auto& c : cs9) {
    cplx v1 = hecke_character_local_value(c, 2, 1);
    cplx v3 = hecke_character_local_value(c, 2, 3);
    CHECK(std::abs(v1 * v1 * v1 - v3) < 1e-12);
  }
}

TEST_CASE("gauss sums") {
  // trivial character mod 1
  CHECK(std::abs(gauss_sum_dirichlet(DirichletCharacter(1, {})) - cplx{1, 0}) < 1e-12);

  // primitive mod 5: |tau| = sqrt(5)
  for (auto& chi : enumerate_characters(5)) {
    if (!chi.is_primitive()) continue;
    CHECK(std::abs(std::abs(gauss_sum_dirichlet(chi)) - std::sqrt(5.0)) < 1e-12);
  }

  // imprimitive trivial chi mod p: Ramanujan sum = mu(p) = -1
  for (i64 p : {3, 7, 11}) {
    DirichletCharacter triv(p, {0});
    CHECK(std::abs(gauss_sum_dirichlet(triv) - cplx{-1, 0}) < 1e-11);
  }

  // tau(chi) tau(chibar) = chi(-1) N for primitive chi, N <= 100
  for (i64 N = 2; N <= 100; ++N) {
    for (auto& chi : enumerate_characters(N)) {
      if (!chi.is_primitive()) continue;
      cplx lhs = gauss_sum_dirichlet(chi) * gauss_sum_dirichlet(chi.conj());
      cplx rhs = chi(N - 1) * (double)N;
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("kloosterman classical: frozen and brute-force values") {
  // q = 1: all index sets singletons
  KloostermanSpec triv{3, 1, {1}, {1}};
  CHECK(std::abs(kloosterman_classical(triv, 5, 7) - cplx{1, 0}) < 1e-12);

  // S(1, 1; 5) = 2 + 2 cos(4 pi / 5), frozen from the one-loop oracle
  KloostermanSpec s5{3, 5, {1}, {1}};
  cplx v = kloosterman_classical(s5, -1, 1);  // (-1)^3 x = 1
  CHECK(std::abs(v - cplx{0.3819660112501051, 0.0}) < 1e-12);
  CHECK(std::abs(v - kloosterman_textbook(1, 1, 5)) < 1e-12);

  // n=3, q=2, c=d=1: single term (-1)^{x+y}
  KloostermanSpec s2{3, 2, {1}, {1}};
  for (i64 x : {0, 1})
    for (i64 y : {0, 1}) {
      double expect = ((x + y) % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(kloosterman_classical(s2, x, y) - expect) < 1e-12);
    }
}

TEST_CASE("kloosterman n=3 equals textbook sum for q <= 100") {
  for (i64 q = 1; q <= 100; ++q) {
    KloostermanSpec spec{3, q, {1}, {1}};
    for (i64 x = 0; x < q; ++x)
      for (i64 y = 0; y < q; ++y) {
        cplx a = kloosterman_classical(spec, x, y);
        cplx b = kloosterman_textbook(imod(-x, q), y, q);
        CHECK(std::abs(a - b) < 1e-9 * (1.0 + (double)euler_phi(q)));
      }
  }
}

TEST_CASE("weil bound sanity") {
  for (i64 p = 2; p <= 101; ++p) {
    if (!is_prime(p)) continue;
    for (i64 x = 1; x < p; ++x)
      for (i64 y = 1; y < p; ++y)
        CHECK(std::abs(kloosterman_textbook(x, y, p)) <= 2.0 * std::sqrt((double)p) + 1e-9);
  }
}

TEST_CASE("kloosterman CRT factorization") {
  std::mt19937_64 rng(5);
  auto check_crt = [&](i64 q1, i64 q2, i64 x, i64 y) {
    i64 q = q1 * q2;
    cplx whole = kloosterman_textbook(x, y, q);
    i64 q2inv = invmod(q2, q1), q1inv = invmod(q1, q2);
    cplx part1 = kloosterman_textbook(mulmod(x, q2inv, q1), mulmod(y, q2inv, q1), q1);
    cplx part2 = kloosterman_textbook(mulmod(x, q1inv, q2), mulmod(y, q1inv, q2), q2);
    CHECK(std::abs(whole - part1 * part2) < 1e-8 * (1.0 + (double)euler_phi(q)));
    // and the nested formula agrees at the full modulus
    KloostermanSpec spec{3, q, {1}, {1}};
    CHECK(std::abs(kloosterman_classical(spec, imod(-x, q), y) - whole) <
          1e-8 * (1.0 + (double)euler_phi(q)));
  };
  for (i64 q = 6; q <= 10000; q += (q < 300 ? 1 : 97)) {
    auto f = factorize(q);
    if (f.size() < 2) continue;
    i64 q1 = f[0].q, q2 = q / q1;
    std::uniform_int_distribution<i64> dx(0, q - 1);
    check_crt(q1, q2, dx(rng), dx(rng));
  }
}

TEST_CASE("s_f_sum") {
  // ell = 1: the single trivial character, eps(1/2, triv) = 1
  std::map<DirichletCharacter, cplx> rn{{DirichletCharacter(1, {}), cplx{0.6, 0.8}}};
  cplx v = s_f_sum(1, 3, 1, 2, 3, rn);
  CHECK(std::abs(v - cplx{0.6, 0.8}) < 1e-12);

  // ell = 9, all root numbers 1: matches the direct character/Gauss-sum sum
  std::map<DirichletCharacter, cplx> rn9;
  int prim_count = 0;
  for (auto& chi : enumerate_characters(9))
    if (chi.is_primitive()) { rn9[chi] = {1, 0}; ++prim_count; }
  CHECK(prim_count == 4);  // phi(9) - phi(3)
  i64 m = 4, a = 2, q = 5;
  int n = 3;
  cplx got = s_f_sum(9, m, a, q, n, rn9);
  // direct summation; chi(-1)^{n-1} = chi(-1)^2 = 1 for n = 3
  cplx expect = 0;
  i64 abar = invmod(a, 9);
  for (auto& chi : enumerate_characters(9)) {
    if (!chi.is_primitive()) continue;
    cplx eps_inv = gauss_sum_dirichlet(chi) / 3.0;  // tau(chi)/sqrt(9)
    expect += chi(mulmod(mulmod(m, abar, 9), q, 9)) * eps_inv;
  }
  CHECK(std::abs(got - expect) < 1e-10);
  CHECK(std::abs(got) <= (double)prim_count + 1e-9);

  // |S_f| <= #primitive characters on random unit-modulus inputs
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0, kTwoPi);
  for (i64 ell : {4, 5, 8, 9, 25, 27}) {
    std::map<DirichletCharacter, cplx> rnd;
    for (auto& chi : enumerate_characters(ell))
      if (chi.is_primitive()) {
        double t = ang(rng);
        rnd[chi] = {std::cos(t), std::sin(t)};
      }
    i64 cnt = count_primitive_characters(ell);
    cplx s = s_f_sum(ell, 2, ell % 3 == 0 ? 2 : 3, ell % 2 == 0 ? 3 : 2, 2, rnd);
    CHECK(std::abs(s) <= (double)cnt + 1e-9);
  }

  // missing root number -> error
  std::map<DirichletCharacter, cplx> empty;
  CHECK_THROWS(s_f_sum(5, 1, 1, 2, 2, empty));
}

TEST_CASE("epsilon constants match across the Dirichlet and p-adic sides") {
  for (i64 p : {2, 3, 5}) {
    for (int k = 1; ipow(p, k) <= 125; ++k) {
      i64 q = ipow(p, k);
      auto dirichlet = enumerate_characters(q);
      auto padic = enumerate_padic_characters(p, k);
      for (auto& chi : dirichlet) {
        if (!chi.is_primitive()) continue;
        // find the p-adic character with the same values on units
        const PadicCharacter* match = nullptr;
        for (auto& pc : padic) {
          if (pc.cond_exp() != k) continue;
          bool same = true;
          for (i64 u : unit_class_reps(p, k))
            if (std::abs(pc.eval_unit(u) - chi(u)) > 1e-9) { same = false; break; }
          if (same) { match = &pc; break; }
        }
        REQUIRE(match != nullptr);
        cplx from_dirichlet = epsilon_half_of_inverse(chi);
        cplx from_padic = epsilon_half_inv_padic(*match);
        CHECK(std::abs(from_dirichlet - from_padic) < 1e-10);
      }
    }
  }
}
