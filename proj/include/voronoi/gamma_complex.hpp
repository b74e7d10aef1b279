#pragma once

// Complex log-Gamma via the Lanczos approximation (g = 607/128, 15 terms),
// with reflection for Re(z) < 1/2, plus the normalised archimedean factors
// Gamma_R(s) = pi^{-s/2} Gamma(s/2) and Gamma_C(s) = 2 (2pi)^{-s} Gamma(s)
// kept in log space so quotients of large arguments stay finite.

#include <complex>
#include <cmath>

namespace voronoi {

namespace detail {

// Lanczos coefficients, g = 607/128
inline constexpr double kLanczosG = 4.7421875;
inline constexpr double kLanczosC[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

}  // namespace detail

// Principal branch of log Gamma(z).
inline std::complex<double> lgamma_complex(std::complex<double> z) {
  using C = std::complex<double>;
  constexpr double kLogSqrtTwoPi = 0.91893853320467274178;
  constexpr double kPi = 3.14159265358979323846;
  if (z.real() < 0.5) {
    // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z), branch-corrected
    // via log(sin) computed stably off the exponentially dominant term.
    C w = 1.0 - z;
    C lg = lgamma_complex(w);
    // log sin(pi z): sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i
    C ipz = C(0, 1) * kPi * z;
    C logsin;
    if (z.imag() > 0) {
      logsin = -ipz + std::log((std::exp(2.0 * ipz) - 1.0) / C(0, 2));
    } else {
      logsin = ipz + std::log((1.0 - std::exp(-2.0 * ipz)) / C(0, 2));
    }
    return std::log(C(kPi)) - logsin - lg;
  }
  C zm1 = z - 1.0;
  C sum = detail::kLanczosC[0];
  for (int k = 1; k < 15; ++k) sum += detail::kLanczosC[k] / (zm1 + (double)k);
  C t = zm1 + detail::kLanczosG + 0.5;
  return kLogSqrtTwoPi + (zm1 + 0.5) * std::log(t) - t + std::log(sum);
}

inline std::complex<double> gamma_complex(std::complex<double> z) {
  return std::exp(lgamma_complex(z));
}

// log Gamma_R(s) = -(s/2) log pi + log Gamma(s/2)
inline std::complex<double> lgamma_R(std::complex<double> s) {
  constexpr double kLogPi = 1.1447298858494001741;
  return -0.5 * s * kLogPi + lgamma_complex(0.5 * s);
}

// log Gamma_C(s) = log 2 - s log(2 pi) + log Gamma(s)
inline std::complex<double> lgamma_C(std::complex<double> s) {
  constexpr double kLog2 = 0.69314718055994530942;
  constexpr double kLogTwoPi = 1.8378770664093454836;
  return kLog2 - s * kLogTwoPi + lgamma_complex(s);
}

}  // namespace voronoi
