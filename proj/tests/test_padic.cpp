#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "voronoi/padic.hpp"

using namespace voronoi;

namespace {

PadicShellFunction random_shell(i64 p, int level, int vmin, int vmax, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1, 1);
  PadicShellFunction f;
  f.p = p; f.level = level; f.vmin = vmin; f.vmax = vmax;
  const auto& reps = unit_class_reps(p, level);
  f.values.assign(vmax - vmin + 1, std::vector<cplx>(reps.size()));
  for (auto& row : f.values)
    for (auto& x : row) x = {U(rng), U(rng)};
  return f;
}

double max_pointwise_diff(const PadicShellFunction& a, const PadicShellFunction& b) {
  int K = std::max(a.level, b.level);
  int lo = std::min(a.vmin, b.vmin), hi = std::max(a.vmax, b.vmax);
  if (a.is_zero_window()) { lo = b.vmin; hi = b.vmax; }
  if (b.is_zero_window()) { lo = a.vmin; hi = a.vmax; }
  if (a.is_zero_window() && b.is_zero_window()) return 0.0;
  double m = 0;
  for (int v = lo; v <= hi; ++v)
    for (i64 u : unit_class_reps(std::max(a.p, b.p), K)) {
      Rat x = rat_from_unit_val(a.p, u, v);
      m = std::max(m, std::abs(a.value_at(x) - b.value_at(x)));
    }
  return m;
}

}  // namespace

TEST_CASE("psi_p basics") {
  for (i64 p : {2, 3, 5, 7}) {
    CHECK(std::abs(psi_p(Rat(7), p) - cplx{1, 0}) < 1e-15);
    CHECK(std::abs(psi_p(Rat(0), p) - cplx{1, 0}) < 1e-15);
  }
  CHECK(std::abs(psi_p(Rat(1, 5), 5) - e_frac(1, 5)) < 1e-15);
  CHECK(std::abs(psi_p(Rat(1, 5), 3) - cplx{1, 0}) < 1e-15);
  // global product over all places is 1: prod_p psi_p(x) * e(-x) = 1
  for (Rat x : {Rat(3, 8), Rat(-7, 12), Rat(22, 45), Rat(1, 1), Rat(-9, 100)}) {
    cplx prod = e_of(-x.to_double());
    for (i64 p : {2, 3, 5}) prod *= psi_p(x, p);
    CHECK(std::abs(prod - cplx{1, 0}) < 1e-12);
  }
}

TEST_CASE("padic character enumeration") {
  auto c0 = enumerate_padic_characters(5, 0);
  CHECK(c0.size() == 1);
  CHECK(c0[0].is_trivial());

  auto c1 = enumerate_padic_characters(5, 1);
  CHECK(c1.size() == 4);
  int exact1 = 0;
  for (auto& c : c1)
    if (c.cond_exp() == 1) ++exact1;
  CHECK(exact1 == 3);

  auto c23 = enumerate_padic_characters(2, 3);
  CHECK(c23.size() == 4);  // phi(8)

  // counts phi(p^k) and multiplicativity on unit classes
  for (i64 p : {2, 3, 5, 7}) {
    for (int k = 0; k <= 3; ++k) {
      if (ipow(p, k) > 400) continue;
      auto cs = enumerate_padic_characters(p, k);
      CHECK((i64)cs.size() == euler_phi(ipow(p, k)));
      for (auto& chi : cs) {
        const auto& reps = unit_class_reps(p, std::max(k, 1));
        for (size_t i = 0; i < std::min<size_t>(reps.size(), 8); ++i)
          for (size_t j = 0; j < std::min<size_t>(reps.size(), 8); ++j) {
            i64 prod = mulmod(reps[i], reps[j], ipow(p, std::max(k, 1)));
            CHECK(std::abs(chi.eval_unit(reps[i]) * chi.eval_unit(reps[j]) - chi.eval_unit(prod)) < 1e-11);
          }
      }
    }
  }
}

TEST_CASE("gauss sum closed form values from the lemma") {
  auto triv5 = PadicCharacter::trivial(5);
  CHECK(std::abs(gauss_sum_padic(5, 1, 0, triv5) - cplx{1, 0}) < 1e-12);
  CHECK(std::abs(gauss_sum_padic(5, 1, -1, triv5) - cplx{-0.25, 0}) < 1e-12);
  CHECK(std::abs(gauss_sum_padic(5, 1, -2, triv5)) < 1e-12);
  for (auto& chi : enumerate_padic_characters(5, 1)) {
    if (chi.cond_exp() != 1) continue;
    CHECK(std::abs(gauss_sum_padic(5, 1, -2, chi)) < 1e-12);
    // magnitude (1-p^{-1})^{-1} p^{-a/2} on the support
    double mag = std::abs(gauss_sum_padic(5, 1, -1, chi));
    CHECK(mag == doctest::Approx(1.0 / (1.0 - 0.2) * std::pow(5.0, -0.5)).epsilon(1e-10));
  }
}

TEST_CASE("gauss sum closed form equals brute force on the grid") {
  double worst = 0;
  for (i64 p : {2, 3, 5, 7}) {
    for (auto& chi : enumerate_padic_characters(p, 3)) {
      cplx eps = chi.cond_exp() > 0 ? epsilon_half_inv_padic(chi) : cplx{1, 0};
      CHECK(std::abs(std::abs(eps) - 1.0) < 1e-10);
      for (i64 va = -3; va <= 1; ++va) {
        for (i64 u : {(i64)1, p + 1, 2 * p + 1}) {
          if (u % p == 0) continue;
          cplx brute = gauss_sum_padic(p, u, va, chi);
          cplx closed = gauss_sum_padic_closed(p, u, va, chi, eps);
          worst = std::max(worst, std::abs(brute - closed));
        }
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("progression gauss sum") {
  // chi trivial, a integral: the measure of the coset, psi-shifted trivially
  for (i64 p : {3, 5}) {
    for (int k = 1; k <= 2; ++k) {
      cplx v = gauss_sum_progression(p, 1, 0, PadicCharacter::trivial(p), k);
      CHECK(std::abs(v - 1.0 / (double)euler_phi(ipow(p, k))) < 1e-13);
    }
  }
  // vanishing for a(chi) > max{k, -v(a)}
  for (auto& chi : enumerate_padic_characters(3, 2)) {
    if (chi.cond_exp() != 2) continue;
    CHECK(std::abs(gauss_sum_progression(3, 1, -1, chi, 1)) < 1e-13);
  }
  // squared magnitude on the support: expanding |G|^2 by orthogonality leaves
  // the double coset 1 + p^{max{k, -v(a)-k}}, so the volume product is
  // Vol(1+p^k) Vol(1+p^{max{k,-v(a)-k}}); verified here against the average.
  for (i64 p : {(i64)2, (i64)3, (i64)5}) {
    for (int k = 1; k <= 2; ++k) {
      for (i64 va = -4; va <= 0; ++va) {
        for (auto& chi : enumerate_padic_characters(p, 4)) {
          cplx v = gauss_sum_progression(p, p + 1, va, chi, k);
          if (std::abs(v) < 1e-14) continue;
          CHECK(chi.cond_exp() <= std::max(k, (int)-va));
          int t = std::max(k, (int)(-va) - k);
          double vol_k = 1.0 / (double)euler_phi(ipow(p, k));
          double vol_t = 1.0 / (double)euler_phi(ipow(p, t));
          CHECK(std::norm(v) == doctest::Approx(vol_k * vol_t).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("mellin transform examples") {
  // indicator of Z_p^x -> trivial chi |-> constant 1
  auto S = mellin_padic(PadicShellFunction::indicator_units(5));
  REQUIRE(S.at.size() == 1);
  CHECK(S.at.begin()->first.is_trivial());
  CHECK(std::abs(S.at.begin()->second.coeff(0) - cplx{1, 0}) < 1e-14);

  // indicator of p Z_p^x -> trivial chi |-> Z^{-1}
  PadicShellFunction shifted = PadicShellFunction::indicator_units(5);
  shifted.vmin = shifted.vmax = 1;
  auto S2 = mellin_padic(shifted);
  REQUIRE(S2.at.size() == 1);
  CHECK(std::abs(S2.at.begin()->second.coeff(-1) - cplx{1, 0}) < 1e-14);
  CHECK(std::abs(S2.at.begin()->second.coeff(0)) < 1e-14);

  // indicator of 1 + p Z_p -> every chi with a(chi) <= 1 gets constant 1/(p-1)
  auto S3 = mellin_padic(PadicShellFunction::indicator_one_plus_pk(5, 1));
  CHECK(S3.at.size() == 4);
  for (auto& [chi, series] : S3.at)
    CHECK(std::abs(series.coeff(0) - cplx{0.25, 0}) < 1e-14);
}

TEST_CASE("mellin round trip on random shell functions") {
  std::mt19937_64 rng(2024);
  // identity case first
  auto ind = PadicShellFunction::indicator_units(3);
  CHECK(max_pointwise_diff(mellin_inverse_padic(mellin_padic(ind)), ind) < 1e-14);
  // zero spectrum -> zero function
  MellinSpectrum empty;
  empty.p = 3;
  CHECK(mellin_inverse_padic(empty).is_zero_window());

  std::vector<i64> primes{2, 3, 5, 7};
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    i64 p = primes[trial % primes.size()];
    std::uniform_int_distribution<int> lev(0, 2), width(0, 5), base(-3, 2);
    int level = lev(rng);
    int vmin = base(rng);
    int vmax = vmin + width(rng) % (p == 2 ? 6 : 4);
    auto f = random_shell(p, level, vmin, vmax, rng);
    auto back = mellin_inverse_padic(mellin_padic(f));
    worst = std::max(worst, max_pointwise_diff(back, f));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("circle integral is coefficient extraction") {
  // (log q / 2 pi) int Z^m dt over one period equals [m = 0]; quadrature check
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (i64 q : {2, 3, 5}) {
    double logq = std::log((double)q);
    for (int trial = 0; trial < 3; ++trial) {
      LaurentSeries s;
      for (int k = -3; k <= 3; ++k) s.set_coeff(k, cplx{U(rng), U(rng)});
      for (int m = -2; m <= 2; ++m) {
        // integrate s(Z) Z^{-m} over t in (-pi/log q, pi/log q], Z = q^{it}
        int Npts = 4096;
        cplx acc = 0;
        for (int j = 0; j < Npts; ++j) {
          double t = -M_PI / logq + (j + 0.5) * (2 * M_PI / logq) / Npts;
          cplx Z = std::exp(cplx{0, t * logq});
          cplx val = 0;
          for (int k = -3; k <= 3; ++k) val += s.coeff(k) * std::pow(Z, k);
          acc += val * std::pow(Z, -m);
        }
        acc *= (2 * M_PI / logq) / (double)Npts * (logq / (2 * M_PI));
        CHECK(std::abs(acc - s.coeff(m)) < 1e-9);
      }
    }
  }
}

TEST_CASE("spectrum support and exponent window invariants") {
  std::mt19937_64 rng(99);
  auto f = random_shell(3, 2, -1, 3, rng);
  auto S = mellin_padic(f);
  for (auto& [chi, series] : S.at) {
    CHECK(chi.cond_exp() <= 2);
    CHECK(series.lo >= -3);
    CHECK(series.hi() <= 1);
  }
}
