#pragma once

// JSON serialization for the local-representation and shell-function types.
// Kept separate so the core headers stay free of the JSON dependency.

#include <json.hpp>

#include "voronoi/bessel_padic.hpp"

namespace voronoi {

inline nlohmann::json to_json(const PadicShellFunction& f) {
  nlohmann::json shells = nlohmann::json::array();
  for (int v = f.vmin; v <= f.vmax; ++v) {
    nlohmann::json units = nlohmann::json::array();
    for (size_t i = 0; i < f.classes(); ++i) {
      cplx z = f.values[v - f.vmin][i];
      units.push_back(nlohmann::json::array({z.real(), z.imag()}));
    }
    shells.push_back(nlohmann::json{{"v", v}, {"units", units}});
  }
  return nlohmann::json{{"p", f.p}, {"level", f.level}, {"shells", shells}};
}

inline PadicShellFunction shell_function_from_json(const nlohmann::json& j) {
  PadicShellFunction f;
  f.p = j.at("p").get<i64>();
  f.level = j.at("level").get<int>();
  const auto& shells = j.at("shells");
  if (shells.empty()) return PadicShellFunction::zero(f.p);
  f.vmin = shells.front().at("v").get<int>();
  f.vmax = shells.back().at("v").get<int>();
  size_t nclasses = unit_class_reps(f.p, f.level).size();
  f.values.assign(f.vmax - f.vmin + 1, std::vector<cplx>(nclasses, cplx{0, 0}));
  for (const auto& s : shells) {
    int v = s.at("v").get<int>();
    const auto& units = s.at("units");
    if (units.size() != nclasses)
      throw std::runtime_error("shell function JSON: unit class count mismatch");
    for (size_t i = 0; i < nclasses; ++i)
      f.values[v - f.vmin][i] = cplx{units[i][0].get<double>(), units[i][1].get<double>()};
  }
  return f;
}

// LocalRepresentation:
//   {"type":"unramified","p":5,"mu":[[re,im],...]}
//   {"type":"minimal","p":3,"n":3,"a_pi":4,"eps0":[re,im],
//    "eps_chi":[{"cond":c,"exps":[...],"value":[re,im]},...]}
inline nlohmann::json to_json(const LocalRepresentation& rep) {
  if (rep.is_unramified()) {
    nlohmann::json mu = nlohmann::json::array();
    for (auto& m : rep.unram().satake.mu) mu.push_back(nlohmann::json::array({m.real(), m.imag()}));
    return nlohmann::json{{"type", "unramified"}, {"p", rep.p}, {"mu", mu}};
  }
  const auto& tm = rep.minimal();
  nlohmann::json chis = nlohmann::json::array();
  for (auto& [chi, eps] : tm.eps_chi) {
    // characters are addressed by (conductor exponent, index within that
    // conductor in enumeration order)
    int index = -1, idx = 0;
    for (auto& c : enumerate_padic_characters(tm.p, chi.cond_exp())) {
      if (c.cond_exp() != chi.cond_exp()) continue;
      if (c == chi) { index = idx; break; }
      ++idx;
    }
    chis.push_back(nlohmann::json{{"cond", chi.cond_exp()},
                                  {"index", index},
                                  {"value", nlohmann::json::array({eps.real(), eps.imag()})}});
  }
  return nlohmann::json{{"type", "minimal"},
                        {"p", tm.p},
                        {"n", tm.n},
                        {"a_pi", tm.a_pi},
                        {"eps0", nlohmann::json::array({tm.eps0.real(), tm.eps0.imag()})},
                        {"eps_chi", chis}};
}

inline LocalRepresentation local_representation_from_json(const nlohmann::json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "unramified") {
    SatakeParams mu{j.at("p").get<i64>(), {}};
    for (auto& e : j.at("mu")) mu.mu.push_back(cplx{e[0].get<double>(), e[1].get<double>()});
    return LocalRepresentation::unramified(mu);
  }
  if (type != "minimal") throw std::runtime_error("unknown representation type " + type);
  TwistMinimalRep tm;
  tm.p = j.at("p").get<i64>();
  tm.n = j.at("n").get<int>();
  tm.a_pi = j.at("a_pi").get<int>();
  tm.eps0 = cplx{j.at("eps0")[0].get<double>(), j.at("eps0")[1].get<double>()};
  for (auto& e : j.at("eps_chi")) {
    int cond = e.at("cond").get<int>();
    int index = e.at("index").get<int>();
    int idx = 0;
    bool found = false;
    for (auto& chi : enumerate_padic_characters(tm.p, cond)) {
      if (chi.cond_exp() != cond) continue;
      if (idx++ == index) {
        tm.eps_chi[chi] = cplx{e.at("value")[0].get<double>(), e.at("value")[1].get<double>()};
        found = true;
        break;
      }
    }
    if (!found) throw std::runtime_error("eps_chi entry: character index out of range");
  }
  return LocalRepresentation::twist_minimal(tm);
}

}  // namespace voronoi
