#pragma once

// Dirichlet characters mod N: CRT exponent vectors, conductors, Gauss sums.

#include "voronoi/modarith.hpp"

namespace voronoi {

class DirichletCharacter {
 public:
  DirichletCharacter() : N_(1) {}
  DirichletCharacter(i64 N, std::vector<i64> exps) : N_(N), exps_(std::move(exps)) {
    const auto& G = unit_group(N_);
    if (exps_.size() != G.gens.size())
      throw std::invalid_argument("DirichletCharacter: exponent count mismatch");
    for (size_t j = 0; j < exps_.size(); ++j) exps_[j] = imod(exps_[j], G.orders[j]);
    conductor_ = compute_conductor();
  }

  i64 modulus() const { return N_; }
  i64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == N_; }
  bool is_trivial() const {
    for (i64 e : exps_) if (e) return false;
    return true;
  }
  const std::vector<i64>& exponents() const { return exps_; }

  // Value angle as an exact fraction a/b, meaning chi(x) = e(a/b); requires
  // gcd(x, N) = 1.
  std::pair<i64, i64> eval_frac(i64 x) const {
    const auto& G = unit_group(N_);
    auto d = G.dlog(x);
    i64 a = 0, b = 1;
    for (size_t j = 0; j < exps_.size(); ++j) {
      i64 o = G.orders[j];
      i64 t = mulmod(exps_[j], d[j] % o, o);
      // a/b += t/o exactly, reduced
      i64 g = igcd(b, o);
      i64 nb = b / g * o;
      i64 na = imod(a * (o / g) + t * (b / g), nb);
      i64 g2 = igcd(na, nb);
      a = na / g2;
      b = nb / g2;
    }
    return {imod(a, b), b};
  }

  cplx operator()(i64 x) const {
    x = imod(x, N_);
    if (N_ > 1 && igcd(x, N_) != 1) return {0.0, 0.0};
    auto [a, b] = eval_frac(x);
    return e_frac(a, b);
  }

  DirichletCharacter conj() const {
    std::vector<i64> e = exps_;
    const auto& G = unit_group(N_);
    for (size_t j = 0; j < e.size(); ++j) e[j] = imod(-e[j], G.orders[j]);
    return DirichletCharacter(N_, e);
  }

  // CRT component at the prime-power factor p^k || N, as a character mod p^k.
  DirichletCharacter component_at(i64 p) const {
    const auto& G = unit_group(N_);
    for (size_t fi = 0; fi < G.factors.size(); ++fi) {
      if (G.factors[fi].p != p) continue;
      std::vector<i64> e;
      for (size_t j = 0; j < G.gens.size(); ++j)
        if (G.gen_factor[j] == (int)fi) e.push_back(exps_[j]);
      return DirichletCharacter(G.factors[fi].q, e);
    }
    throw std::invalid_argument("component_at: p does not divide N");
  }

  bool operator<(const DirichletCharacter& o) const {
    if (N_ != o.N_) return N_ < o.N_;
    return exps_ < o.exps_;
  }
  bool operator==(const DirichletCharacter& o) const {
    return N_ == o.N_ && exps_ == o.exps_;
  }

 private:
  i64 N_;
  std::vector<i64> exps_;
  i64 conductor_ = 1;

  // Conductor exponent at an odd prime-power factor: the character component
  // is trivial on units = 1 mod p^j iff ord(chi_p) | phi(p^j).
  i64 compute_conductor() const {
    const auto& G = unit_group(N_);
    i64 cond = 1;
    for (size_t fi = 0; fi < G.factors.size(); ++fi) {
      i64 p = G.factors[fi].p;
      int k = G.factors[fi].k;
      std::vector<i64> e, ords;
      for (size_t j = 0; j < G.gens.size(); ++j)
        if (G.gen_factor[j] == (int)fi) { e.push_back(exps_[j]); ords.push_back(G.orders[j]); }
      int ce = 0;
      if (p != 2) {
        i64 ord = e.empty() || e[0] == 0 ? 1 : ords[0] / igcd(e[0], ords[0]);
        if (ord == 1) ce = 0;
        else {
          for (int j = 1; j <= k; ++j) {
            i64 phij = ipow(p, j) - ipow(p, j - 1);
            if (phij % ord == 0) { ce = j; break; }
          }
          if (ce == 0) throw std::logic_error("conductor: order does not divide phi(p^k)");
        }
      } else {
        // generators: k=2 -> {-1}; k>=3 -> {-1, 5}
        i64 e_m1 = e.empty() ? 0 : e[0];
        i64 ord5 = 1;
        if (e.size() > 1 && e[1] != 0) ord5 = ords[1] / igcd(e[1], ords[1]);
        if (ord5 > 1) {
          int j = 2;
          while (ipow(2, j - 2) % ord5 != 0) ++j;
          ce = j;
        } else if (e_m1 % 2 != 0) {
          ce = 2;
        } else {
          ce = 0;
        }
      }
      cond *= ipow(p, ce);
    }
    return cond;
  }
};

// All phi(N) characters mod N, conductors precomputed.
inline std::vector<DirichletCharacter> enumerate_characters(i64 N) {
  const auto& G = unit_group(N);
  std::vector<DirichletCharacter> out;
  i64 total = G.phi();
  std::vector<i64> cur(G.gens.size(), 0);
  for (i64 it = 0; it < total; ++it) {
    out.emplace_back(N, cur);
    for (size_t j = 0; j < cur.size(); ++j) {
      if (++cur[j] < G.orders[j]) break;
      cur[j] = 0;
    }
  }
  return out;
}

// tau(chi) = sum_{x mod N} chi(x) e(x/N)
inline cplx gauss_sum_dirichlet(const DirichletCharacter& chi) {
  i64 N = chi.modulus();
  cplx s = 0;
  for (i64 x = 0; x < N; ++x) {
    if (N > 1 && igcd(x, N) != 1) continue;
    s += chi(x) * e_frac(x, N);
  }
  return N == 1 ? cplx{1.0, 0.0} : s;
}

// omega_p(y) = chi(p)^{-v_p(y)} for p not dividing N.
inline cplx hecke_character_local_value(const DirichletCharacter& chi, i64 p, i64 v) {
  if (chi.modulus() > 1 && chi.modulus() % p == 0)
    throw std::invalid_argument("hecke_character_local_value: p | N");
  auto [a, b] = chi.eval_frac(p);
  return e_frac(imod(-a * v, b), b);
}

// Local epsilon constant of a primitive Dirichlet character, normalised so the
// p-adic Gauss sum lemma holds verbatim: eps(1/2, chi^{-1}) = tau(chi)/sqrt(cond).
// For composite conductors it is the product of the local factors
// tau(chi_p)/sqrt(p^{c_p}) over the CRT components.
inline cplx epsilon_half_of_inverse(const DirichletCharacter& chi) {
  if (!chi.is_primitive())
    throw std::invalid_argument("epsilon_half_of_inverse: character not primitive");
  i64 N = chi.modulus();
  if (N == 1) return {1.0, 0.0};
  cplx prod = 1;
  for (auto& f : factorize(N)) {
    auto comp = chi.component_at(f.p);
    prod *= gauss_sum_dirichlet(comp) / std::sqrt((double)f.q);
  }
  return prod;
}

}  // namespace voronoi
