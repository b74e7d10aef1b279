// voronoi-kit: command-line access to the summation-formula toolkit.
//
//   voronoi-kit kloosterman --n 3 --q 15 --c 1 --d 1 --x 2 --y 7
//   voronoi-kit gauss --modulus 5 --char 1
//   voronoi-kit hecke --satake satake.json --m 8 --m 3
//   voronoi-kit bessel-p --p 3 --n 3 --rep minimal --a-pi 4 --zeta-val -2 ...
//   voronoi-kit bessel-p --gauss --p 5 --char-cond 1 --char-index 0 --a-val -1
//   voronoi-kit bessel-arch --phi plateau:1,4 --y-grid 1,2,4 --sigma 2.5
//   voronoi-kit verify {duality|geometric|voronoi-gl2|suite} [--json out.json]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "voronoi/acceptance.hpp"
#include "voronoi/json_io.hpp"

using namespace voronoi;
using nlohmann::json;

namespace {

json cplx_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

SatakeModel satake_from_json(const std::string& path, int& n_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  n_out = j.at("n").get<int>();
  SatakeModel model;
  for (auto& [key, val] : j.at("primes").items()) {
    SatakeParams mu{std::stoll(key), {}};
    for (auto& entry : val) mu.mu.push_back(cplx{entry[0].get<double>(), entry[1].get<double>()});
    if ((int)mu.mu.size() != n_out) throw std::runtime_error("satake rank mismatch at p = " + key);
    model[mu.p] = mu;
  }
  return model;
}

BumpFunction parse_phi(const std::string& spec) {
  if (spec.rfind("plateau:", 0) == 0) {
    auto rest = spec.substr(8);
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw std::runtime_error("expected plateau:a,b");
    return plateau_bump(std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1)));
  }
  throw std::runtime_error("unknown test function spec: " + spec);
}

ArchRep arch_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  ArchRep rep;
  for (auto& e : j.at("entries")) {
    std::string type = e.at("type").get<std::string>();
    if (type == "R")
      rep.rentries.push_back({cplx{e.at("mu")[0].get<double>(), e.at("mu")[1].get<double>()},
                              e.at("delta").get<int>()});
    else if (type == "C")
      rep.centries.push_back({cplx{e.at("nu")[0].get<double>(), e.at("nu")[1].get<double>()}});
    else
      throw std::runtime_error("unknown entry type " + type);
  }
  if (j.contains("eps"))
    for (int r = 0; r < 2; ++r)
      rep.eps[r] = cplx{j["eps"][r][0].get<double>(), j["eps"][r][1].get<double>()};
  return rep;
}

LocalRepresentation make_rep(const std::string& kind, i64 p, int n, int a_pi, double seed,
                             const std::string& mu_angles) {
  if (kind == "minimal") {
    TwistMinimalRep tm;
    tm.p = p; tm.n = n; tm.a_pi = a_pi;
    tm.eps0 = std::polar(1.0, seed);
    int idx = 1;
    for (auto& chi : enumerate_padic_characters(p, 3))
      if (chi.cond_exp() > 0) tm.eps_chi[chi] = std::polar(1.0, 0.7 * seed + 0.41 * idx++);
    return LocalRepresentation::twist_minimal(tm);
  }
  if (kind == "unramified") {
    SatakeParams mu{p, {}};
    if (!mu_angles.empty()) {
      std::stringstream ss(mu_angles);
      std::string tok;
      while (std::getline(ss, tok, ',')) mu.mu.push_back(std::polar(1.0, std::stod(tok)));
    } else {
      double tot = 0;
      for (int i = 0; i < n - 1; ++i) {
        double a = seed * (i + 1) + 0.29;
        tot += a;
        mu.mu.push_back(std::polar(1.0, a));
      }
      mu.mu.push_back(std::polar(1.0, -tot));
    }
    if ((int)mu.mu.size() != n) throw std::runtime_error("need n Satake angles");
    return LocalRepresentation::unramified(mu);
  }
  throw std::runtime_error("rep must be 'unramified' or 'minimal'");
}

int emit_verify(const std::vector<int>& which, const std::string& json_out) {
  json report = json::array();
  bool all = true;
  for (int k : which) {
    auto r = run_criterion(k);
    std::printf("criterion %2d [%s]: %s  (%s)  [%.1fs]\n", r.number, r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    report.push_back(json{{"criterion", r.number},
                          {"name", r.name},
                          {"pass", r.pass},
                          {"detail", r.detail},
                          {"seconds", r.seconds}});
    all = all && r.pass;
  }
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    out << json{{"pass", all}, {"results", report}}.dump(2) << "\n";
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voronoi-kit: GL(n) summation-formula toolkit"};
  app.require_subcommand(1);

  // kloosterman
  auto* kl = app.add_subcommand("kloosterman", "nested (n-1)-dimensional Kloosterman sum");
  int kl_n = 3;
  i64 kl_q = 1, kl_x = 0, kl_y = 0;
  std::vector<i64> kl_c, kl_d;
  kl->add_option("--n", kl_n, "dimension n >= 2");
  kl->add_option("--q", kl_q, "modulus");
  kl->add_option("--c", kl_c, "shifts c_2..c_{n-1}");
  kl->add_option("--d", kl_d, "divisors d_2..d_{n-1}");
  kl->add_option("--x", kl_x);
  kl->add_option("--y", kl_y);

  // gauss
  auto* ga = app.add_subcommand("gauss", "classical Gauss sum of a Dirichlet character");
  i64 ga_N = 1;
  int ga_idx = 0;
  ga->add_option("--modulus", ga_N, "modulus N");
  ga->add_option("--char", ga_idx, "character index in enumeration order");

  // hecke
  auto* he = app.add_subcommand("hecke", "Hecke coefficients from Satake data (CSV)");
  std::string he_file;
  std::vector<i64> he_m;
  he->add_option("--satake", he_file, "JSON file {n, primes: {p: [[re,im],...]}}")->required();
  he->add_option("--m", he_m, "index vector m_1..m_{n-1}")->required();

  // bessel-p
  auto* bp = app.add_subcommand("bessel-p", "p-adic Bessel transform / Gauss sums");
  i64 bp_p = 3;
  int bp_n = 2, bp_api = 3, bp_cutoff = 8, bp_k = 1;
  i64 bp_zval = 0, bp_zunit = 1;
  std::string bp_rep = "minimal", bp_phi = "units", bp_mu;
  double bp_seed = 0.37;
  bool bp_gauss = false;
  int bp_ccond = 0, bp_cidx = 0;
  i64 bp_aval = 0, bp_aunit = 1;
  int bp_apk = 0;
  bp->add_option("--p", bp_p, "prime");
  bp->add_option("--n", bp_n, "GL(n) rank");
  std::string bp_rep_file;
  bp->add_option("--rep", bp_rep, "unramified|minimal");
  bp->add_option("--rep-file", bp_rep_file, "JSON file with a serialized local representation");
  bp->add_option("--a-pi", bp_api, "conductor exponent (minimal model)");
  bp->add_option("--zeta-val", bp_zval, "v(zeta); 0 means no twist");
  bp->add_option("--zeta-unit", bp_zunit, "unit class of zeta");
  bp->add_option("--phi", bp_phi, "units | ap:k | json:FILE");
  bp->add_option("--cutoff", bp_cutoff, "highest output shell");
  bp->add_option("--mu-angles", bp_mu, "comma-separated Satake angles");
  bp->add_option("--seed", bp_seed, "synthetic root-number seed");
  bp->add_flag("--gauss", bp_gauss, "print Gauss sums instead of the transform");
  bp->add_option("--char-cond", bp_ccond, "a(chi) for --gauss");
  bp->add_option("--char-index", bp_cidx, "index among characters of that conductor");
  bp->add_option("--a-val", bp_aval, "v(a) for --gauss");
  bp->add_option("--a-unit", bp_aunit, "unit class of a for --gauss");
  bp->add_option("--ap-k", bp_apk, "progression level k (0 = plain Gauss sum only)");

  // bessel-arch
  auto* ba = app.add_subcommand("bessel-arch", "archimedean Bessel transform (CSV)");
  std::string ba_rep_file, ba_phi = "plateau:1,2", ba_grid = "1,2,4";
  double ba_sigma = -1, ba_T = -1;
  int ba_weight = 12;
  std::string ba_kind = "holomorphic";
  std::string ba_ts;
  ba->add_option("--rep", ba_rep_file, "JSON file with gamma-shift entries");
  ba->add_option("--kind", ba_kind, "holomorphic|tempered (when no --rep file)");
  ba->add_option("--weight", ba_weight, "holomorphic weight");
  ba->add_option("--spectral", ba_ts, "comma-separated tempered parameters");
  ba->add_option("--phi", ba_phi, "plateau:a,b");
  ba->add_option("--y-grid", ba_grid, "comma-separated evaluation points");
  ba->add_option("--sigma", ba_sigma, "contour abscissa (default (n-1)/2 + 2)");
  ba->add_option("--height", ba_T, "truncation height (default adaptive)");

  // voronoi-gl2: one full end-to-end instance with the built-in coefficients
  auto* vg = app.add_subcommand("voronoi-gl2", "assemble both sides of one GL(2) instance");
  i64 vg_q = 1, vg_a = 1, vg_tau = 10000;
  std::string vg_phi = "plateau:5,40", vg_json, vg_terms_csv;
  vg->add_option("--q", vg_q, "modulus");
  vg->add_option("--a", vg_a, "residue, coprime to q");
  vg->add_option("--phi", vg_phi, "plateau:a,b");
  vg->add_option("--tau-range", vg_tau, "coefficient range to generate");
  vg->add_option("--json", vg_json, "write {lhs, rhs, rel_err, tails, timing}");
  vg->add_option("--terms-csv", vg_terms_csv, "write per-term dual contributions");

  // verify
  auto* ve = app.add_subcommand("verify", "run verification gates");
  std::string ve_what = "suite", ve_json;
  ve->add_option("what", ve_what, "duality|geometric|voronoi-gl2|suite");
  ve->add_option("--json", ve_json, "write a machine-readable report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*kl) {
      if ((int)kl_c.size() != std::max(0, kl_n - 2)) kl_c.assign(std::max(0, kl_n - 2), 1);
      if ((int)kl_d.size() != std::max(0, kl_n - 2)) kl_d.assign(std::max(0, kl_n - 2), 1);
      KloostermanSpec spec{kl_n, kl_q, kl_c, kl_d};
      i64 terms = 1;
      if (kl_n >= 3)
        for (i64 m : spec.layer_moduli()) terms *= euler_phi(m);
      cplx v = kloosterman_classical(spec, kl_x, kl_y);
      std::cout << json{{"value", cplx_json(v)}, {"modulus", kl_q}, {"terms", terms}}.dump(2)
                << "\n";
    } else if (*ga) {
      auto chars = enumerate_characters(ga_N);
      if (ga_idx < 0 || ga_idx >= (int)chars.size())
        throw std::runtime_error("character index out of range (phi(N) = " +
                                 std::to_string(chars.size()) + ")");
      const auto& chi = chars[ga_idx];
      cplx v = gauss_sum_dirichlet(chi);
      std::cout << json{{"value", cplx_json(v)},
                        {"modulus", ga_N},
                        {"conductor", chi.conductor()},
                        {"primitive", chi.is_primitive()},
                        {"terms", euler_phi(ga_N)}}.dump(2)
                << "\n";
    } else if (*he) {
      int n = 0;
      auto model = satake_from_json(he_file, n);
      if ((int)he_m.size() != n - 1)
        throw std::runtime_error("need n-1 = " + std::to_string(n - 1) + " indices");
      cplx v = hecke_coefficient(model, n, he_m);
      for (size_t i = 0; i < he_m.size(); ++i) std::cout << he_m[i] << ",";
      std::cout << std::setprecision(17) << v.real() << "," << v.imag() << "\n";
    } else if (*bp) {
      if (bp_gauss) {
        auto chars = enumerate_padic_characters(bp_p, bp_ccond);
        std::vector<PadicCharacter> at_cond;
        for (auto& c : chars)
          if (c.cond_exp() == bp_ccond) at_cond.push_back(c);
        if (bp_cidx < 0 || bp_cidx >= (int)at_cond.size())
          throw std::runtime_error("character index out of range at that conductor");
        const auto& chi = at_cond[bp_cidx];
        json out{{"p", bp_p},
                 {"char_cond", bp_ccond},
                 {"gauss", cplx_json(gauss_sum_padic(bp_p, bp_aunit, bp_aval, chi))}};
        if (bp_apk >= 1)
          out["gauss_progression"] =
              cplx_json(gauss_sum_progression(bp_p, bp_aunit, bp_aval, chi, bp_apk));
        std::cout << out.dump(2) << "\n";
      } else {
          LocalRepresentation rep = [&] {
          if (!bp_rep_file.empty()) {
            std::ifstream in(bp_rep_file);
            if (!in) throw std::runtime_error("cannot open " + bp_rep_file);
            json j;
            in >> j;
            return local_representation_from_json(j);
          }
          return make_rep(bp_rep, bp_p, bp_n, bp_api, bp_seed, bp_mu);
        }();
        PadicShellFunction phi = PadicShellFunction::indicator_units(bp_p);
        if (bp_phi.rfind("ap:", 0) == 0)
          phi = PadicShellFunction::indicator_one_plus_pk(bp_p, std::stoi(bp_phi.substr(3)));
        else if (bp_phi.rfind("json:", 0) == 0) {
          std::ifstream in(bp_phi.substr(5));
          if (!in) throw std::runtime_error("cannot open " + bp_phi.substr(5));
          json j;
          in >> j;
          phi = shell_function_from_json(j);
        } else if (bp_phi != "units")
          throw std::runtime_error("phi must be units | ap:k | json:FILE");
        PadicModulus zeta =
            bp_zval == 0 ? PadicModulus::none() : PadicModulus::of(bp_zunit, bp_zval);
        BesselRequest req{rep, phi, zeta, bp_cutoff};
        auto out = bessel_general(req);
        json j = to_json(out);
        j["representation"] = to_json(rep);
        j["support_bound"] = bessel_support_bound(rep, zeta);
        // duality residuals per character, the defining check
        json residuals = json::array();
        int D = std::max(40, bp_n * (rep.a_pi() + 2 + (int)std::abs(bp_zval)) + 10);
        for (auto& chi : enumerate_padic_characters(bp_p, std::min(bp_k + 1, 2)))
          residuals.push_back(json{{"cond", chi.cond_exp()},
                                   {"residual", verify_duality(rep, phi, zeta, chi, D)}});
        j["duality_residuals"] = residuals;
        std::cout << j.dump(2) << "\n";
      }
    } else if (*ba) {
      ArchRep rep;
      if (!ba_rep_file.empty())
        rep = arch_from_json(ba_rep_file);
      else if (ba_kind == "holomorphic")
        rep = ArchRep::holomorphic_discrete_series(ba_weight);
      else {
        std::vector<double> ts;
        std::stringstream ss(ba_ts.empty() ? std::string("1.1,-1.1") : ba_ts);
        std::string tok;
        while (std::getline(ss, tok, ',')) ts.push_back(std::stod(tok));
        rep = ArchRep::tempered_principal_series(ts);
      }
      auto phi = parse_phi(ba_phi);
      double sigma = ba_sigma > 0 ? ba_sigma : default_sigma(rep.degree());
      double T = ba_T > 0 ? ba_T : adaptive_height(rep, phi, sigma);
      BesselEvaluatorReal ev(rep, phi, sigma, T);
      std::vector<double> grid;
      {
        std::stringstream ss(ba_grid);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
      }
      std::cout << "y,re,im,err_est\n";
      for (double y : grid) {
        cplx v = ev(y);
        std::cout << y << "," << std::setprecision(15) << v.real() << "," << v.imag() << ","
                  << ev.tail_magnitude() << "\n";
      }
    } else if (*vg) {
      std::vector<DualTerm> terms;
      auto rep = verify_voronoi_gl2(vg_q, vg_a, parse_phi(vg_phi), vg_tau, 2.5, -1.0,
                                    vg_terms_csv.empty() ? nullptr : &terms);
      json out{{"lhs", cplx_json(rep.lhs)},
               {"rhs", cplx_json(rep.rhs)},
               {"rel_err", rep.rel_err},
               {"tails", json{{"lhs", rep.lhs_tail}, {"rhs", rep.rhs_tail}}},
               {"timing", rep.seconds},
               {"lhs_terms", rep.lhs_terms},
               {"rhs_terms", rep.rhs_terms}};
      std::cout << out.dump(2) << "\n";
      if (!vg_json.empty()) {
        std::ofstream f(vg_json);
        f << out.dump(2) << "\n";
      }
      if (!vg_terms_csv.empty()) {
        std::ofstream f(vg_terms_csv);
        f << "m,r,re,im\n";
        for (auto& t : terms)
          f << t.m << "," << t.r << "," << std::setprecision(17) << t.value.real() << ","
            << t.value.imag() << "\n";
      }
      return rep.rel_err <= 1e-4 ? 0 : 1;
    } else if (*ve) {
      std::vector<int> which;
      if (ve_what == "duality") which = {3};
      else if (ve_what == "geometric") which = {5};
      else if (ve_what == "voronoi-gl2") which = {9};
      else if (ve_what == "suite")
        for (int k = 1; k <= 10; ++k) which.push_back(k);
      else
        throw std::runtime_error("verify target must be duality|geometric|voronoi-gl2|suite");
      return emit_verify(which, ve_json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
