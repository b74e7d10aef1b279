#pragma once

// Exact integer and modular arithmetic helpers shared by every module.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace voronoi {

using cplx = std::complex<double>;
using i64 = long long;
using i128 = __int128;

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline i64 igcd(i64 a, i64 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) { i64 t = a % b; a = b; b = t; }
  return a;
}

inline i64 imod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return (i64)((i128)imod(a, m) * imod(b, m) % m);
}

inline i64 powmod(i64 a, i64 e, i64 m) {
  if (m == 1) return 0;
  i64 r = 1;
  a = imod(a, m);
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a mod m; throws if gcd(a, m) != 1.  invmod(x, 1) == 0.
inline i64 invmod(i64 a, i64 m) {
  if (m == 1) return 0;
  i64 t = 0, nt = 1, r = m, nr = imod(a, m);
  while (nr != 0) {
    i64 q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1)
    throw std::invalid_argument("invmod: " + std::to_string(a) +
                                " not invertible mod " + std::to_string(m));
  return imod(t, m);
}

// e(a/m) for integers, with the fraction reduced mod m first.
inline cplx e_frac(i64 a, i64 m) {
  if (m == 1) return {1.0, 0.0};
  a = imod(a, m);
  double x = kTwoPi * (double)a / (double)m;
  return {std::cos(x), std::sin(x)};
}

inline cplx e_of(double x) {
  double y = kTwoPi * (x - std::floor(x));
  return {std::cos(y), std::sin(y)};
}

struct PrimePower {
  i64 p;
  int k;
  i64 q;  // p^k
};

inline std::vector<PrimePower> factorize(i64 n) {
  if (n <= 0) throw std::invalid_argument("factorize: n must be positive");
  std::vector<PrimePower> f;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      PrimePower pp{p, 0, 1};
      while (n % p == 0) { n /= p; pp.k++; pp.q *= p; }
      f.push_back(pp);
    }
  }
  if (n > 1) f.push_back({n, 1, n});
  return f;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline i64 euler_phi(i64 n) {
  i64 r = 1;
  for (auto& f : factorize(n)) r *= f.q - f.q / f.p;
  return n == 1 ? 1 : r;
}

inline i64 v_p(i64 n, i64 p) {
  if (n == 0) throw std::invalid_argument("v_p(0) undefined");
  i64 v = 0;
  n = n < 0 ? -n : n;
  while (n % p == 0) { n /= p; ++v; }
  return v;
}

inline i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Unit group of Z/p^k: generators, their orders, and a discrete-log table.
// Odd p: cyclic, one generator.  p = 2: trivial (k=1), {-1} (k=2), {-1, 5} (k>=3).
struct PrimePowerUnits {
  i64 p = 0;
  int k = 0;
  i64 q = 1;                  // p^k
  std::vector<i64> gens;
  std::vector<i64> orders;
  std::vector<std::vector<i64>> dlog;  // dlog[g][residue], only coprime slots valid

  i64 phi() const {
    i64 r = 1;
    for (i64 o : orders) r *= o;
    return r;
  }
};

namespace detail {

inline i64 primitive_root_mod_p(i64 p) {
  if (p == 2) return 1;
  i64 phi = p - 1;
  auto fac = factorize(phi);
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    for (auto& f : fac)
      if (powmod(g, phi / f.p, p) == 1) { ok = false; break; }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

inline PrimePowerUnits build_prime_power_units(i64 p, int k) {
  PrimePowerUnits U;
  U.p = p; U.k = k; U.q = ipow(p, k);
  if (U.q <= 2) {
    // trivial group
  } else if (p == 2 && k == 2) {
    U.gens = {3}; U.orders = {2};
  } else if (p == 2) {
    U.gens = {U.q - 1, 5};
    U.orders = {2, U.q / 4};
  } else {
    i64 g = primitive_root_mod_p(p);
    if (k > 1 && powmod(g, p - 1, p * p) == 1) g += p;
    U.gens = {g};
    U.orders = {U.q - U.q / p};
  }
  // dlog tables by walking the generator orbits
  U.dlog.assign(U.gens.size(), std::vector<i64>(U.q, -1));
  std::vector<i64> idx(U.q, -1);
  std::vector<i64> exps(U.gens.size(), 0);
  // enumerate all products of generator powers
  i64 total = U.phi();
  i64 count = 0;
  std::vector<i64> cur(U.gens.size(), 0);
  // iterative mixed-radix enumeration
  for (i64 it = 0; it < total; ++it) {
    i64 x = 1;
    for (size_t j = 0; j < U.gens.size(); ++j)
      x = mulmod(x, powmod(U.gens[j], cur[j], U.q), U.q);
    for (size_t j = 0; j < U.gens.size(); ++j) U.dlog[j][x] = cur[j];
    ++count;
    for (size_t j = 0; j < U.gens.size(); ++j) {
      if (++cur[j] < (i64)U.orders[j]) break;
      cur[j] = 0;
    }
  }
  if (count != total) throw std::logic_error("unit group enumeration mismatch");
  return U;
}

}  // namespace detail

// Memoized access; the cache is internally synchronized.
inline const PrimePowerUnits& prime_power_units(i64 p, int k) {
  static std::map<std::pair<i64, int>, std::unique_ptr<PrimePowerUnits>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto U = std::make_unique<PrimePowerUnits>(detail::build_prime_power_units(p, k));
    it = cache.emplace(key, std::move(U)).first;
  }
  return *it->second;
}

// Unit group of Z/N as a CRT product of prime-power groups.  Generators are
// lifted to mod N (congruent to 1 at the other factors).
struct UnitGroup {
  i64 N = 1;
  std::vector<PrimePower> factors;
  std::vector<i64> gens;     // flattened, lifted mod N
  std::vector<i64> orders;   // parallel to gens
  std::vector<int> gen_factor;  // which factor each generator belongs to
  std::vector<int> gen_local;   // index within that factor's generator list

  i64 phi() const {
    i64 r = 1;
    for (i64 o : orders) r *= o;
    return r;
  }

  // exponent vector of x with respect to gens; throws if gcd(x, N) > 1
  std::vector<i64> dlog(i64 x) const {
    x = imod(x, N);
    if (N > 1 && igcd(x, N) != 1)
      throw std::invalid_argument("dlog: residue not a unit");
    std::vector<i64> e;
    for (size_t j = 0; j < gens.size(); ++j) {
      const auto& U = prime_power_units(factors[gen_factor[j]].p,
                                        factors[gen_factor[j]].k);
      i64 r = imod(x, U.q);
      i64 d = U.dlog[gen_local[j]][r];
      if (d < 0) throw std::logic_error("dlog table miss");
      e.push_back(d);
    }
    return e;
  }
};

inline const UnitGroup& unit_group(i64 N) {
  if (N < 1) throw std::invalid_argument("unit_group: N >= 1 required");
  static std::map<i64, std::unique_ptr<UnitGroup>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return *it->second;
  auto G = std::make_unique<UnitGroup>();
  G->N = N;
  if (N > 1) G->factors = factorize(N);
  for (int fi = 0; fi < (int)G->factors.size(); ++fi) {
    auto& f = G->factors[fi];
    const auto& U = prime_power_units(f.p, f.k);
    i64 other = N / f.q;
    for (int gj = 0; gj < (int)U.gens.size(); ++gj) {
      // CRT lift: congruent to gens[gj] mod p^k, to 1 mod N/p^k
      i64 g = U.gens[gj];
      i64 lifted;
      if (other == 1) {
        lifted = imod(g, N);
      } else {
        i64 m1 = f.q, m2 = other;
        i64 u = invmod(m2, m1);
        // x = 1 + m2 * t with t chosen so x = g mod m1
        i64 t = mulmod(imod(g - 1, m1), u, m1);
        lifted = imod(1 + (i128)m2 * t % N, N);
      }
      G->gens.push_back(lifted);
      G->orders.push_back(U.orders[gj]);
      G->gen_factor.push_back(fi);
      G->gen_local.push_back(gj);
    }
  }
  auto res = cache.emplace(N, std::move(G));
  return *res.first->second;
}

}  // namespace voronoi
