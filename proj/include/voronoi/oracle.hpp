#pragma once

// Coefficient oracles feeding the assembler: Satake models for structural
// tests, the built-in Delta generator, and user-ingested CSV tables.  Every
// oracle exposes Hecke-normalised coefficients with A(1, ..., 1) = 1.

#include <fstream>
#include <sstream>

#include "voronoi/localrep.hpp"
#include "voronoi/tau.hpp"

namespace voronoi {

class CoefficientOracle {
 public:
  virtual ~CoefficientOracle() = default;
  virtual int rank() const = 0;  // n
  virtual cplx coeff(const std::vector<i64>& m) const = 0;
};

class SatakeOracle : public CoefficientOracle {
 public:
  SatakeOracle(int n, SatakeModel model) : n_(n), model_(std::move(model)) {}
  int rank() const override { return n_; }
  cplx coeff(const std::vector<i64>& m) const override {
    return hecke_coefficient(model_, n_, m);
  }
  const SatakeModel& model() const { return model_; }

 private:
  int n_;
  SatakeModel model_;
};

// Hecke-normalised Delta coefficients tau(m) / m^{11/2} on GL(2).
class DeltaOracle : public CoefficientOracle {
 public:
  explicit DeltaOracle(i64 n_max) : tau_(tau_coefficients(n_max)) {}
  int rank() const override { return 2; }
  cplx coeff(const std::vector<i64>& m) const override {
    if (m.size() != 1) throw std::invalid_argument("DeltaOracle: GL(2) takes one index");
    i64 a = std::abs(m[0]);
    if (a == 0) return {0, 0};
    if (a >= (i64)tau_.size())
      throw std::out_of_range("DeltaOracle: coefficient beyond generated range (n_max = " +
                              std::to_string(tau_.size() - 1) + ")");
    return {(double)tau_[a] / std::pow((double)a, 5.5), 0.0};
  }
  i64 n_max() const { return (i64)tau_.size() - 1; }

 private:
  std::vector<i128> tau_;
};

class CsvOracle : public CoefficientOracle {
 public:
  CsvOracle(int n, std::map<std::vector<i64>, cplx> table) : n_(n), table_(std::move(table)) {
    std::vector<i64> ones(n_ - 1, 1);
    auto it = table_.find(ones);
    if (it == table_.end() || std::abs(it->second - cplx{1, 0}) > 1e-9)
      throw std::invalid_argument("CsvOracle: A(1,...,1) = 1 required");
  }
  int rank() const override { return n_; }
  cplx coeff(const std::vector<i64>& m) const override {
    std::vector<i64> key;
    for (i64 x : m) key.push_back(std::abs(x));
    auto it = table_.find(key);
    if (it == table_.end())
      throw std::out_of_range("CsvOracle: no coefficient for requested index");
    return it->second;
  }

 private:
  int n_;
  std::map<std::vector<i64>, cplx> table_;
};

// Rows "m1,...,m_{n-1},re,im"; normalization is "hecke" (stored as-is) or
// "raw" (divided by prod m_i^{(n-1)/2}... left to the caller: raw tables are
// rescaled by prod |m_i|^{-i(n-i)/2}, the trivial-bound envelope).
inline CsvOracle ingest_csv(const std::string& path, int n, const std::string& normalization) {
  if (normalization != "hecke" && normalization != "raw")
    throw std::invalid_argument("ingest_csv: normalization must be 'hecke' or 'raw'");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest_csv: cannot open " + path);
  std::map<std::vector<i64>, cplx> table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
    if ((int)parts.size() != n + 1)
      throw std::runtime_error("ingest_csv: line " + std::to_string(lineno) + ": expected " +
                               std::to_string(n + 1) + " fields");
    std::vector<i64> key;
    try {
      for (int i = 0; i < n - 1; ++i) key.push_back(std::stoll(parts[i]));
      double re = std::stod(parts[n - 1]), im = std::stod(parts[n]);
      cplx val{re, im};
      if (normalization == "raw") {
        double scale = 1.0;
        for (int i = 0; i < n - 1; ++i)
          scale *= std::pow((double)std::abs(key[i]), (double)(i + 1) * (n - 1 - i) / 2.0);
        val /= scale;
      }
      for (auto& k : key) k = std::abs(k);
      if (table.count(key))
        throw std::runtime_error("ingest_csv: duplicate row at line " + std::to_string(lineno));
      table[key] = val;
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("ingest_csv: malformed number at line " + std::to_string(lineno));
    }
  }
  if (table.empty()) throw std::runtime_error("ingest_csv: empty table");
  return CsvOracle(n, std::move(table));
}

}  // namespace voronoi
