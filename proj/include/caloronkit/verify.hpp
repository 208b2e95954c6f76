#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "caloronkit/io.hpp"

namespace caloronkit {

/// One checked identity: measured defect against a pinned tolerance.
struct CheckRow {
  std::string name;
  std::string identity;
  double defect = 0.0;
  double tol = 0.0;
  bool pass() const { return defect <= tol; }
};

struct SuiteConfig {
  GridPtr grid;          // optional; suites fall back to their defaults
  int rank = 2;
  int cutoff = 2;
  std::uint64_t seed = 7;
  int band = 2;
  double amplitude = 0.2;
  int ode_steps = 64;
  double tol = 1e-8;        // identity tolerance override (0 = per-row defaults)
  double exact_tol = 1e-7;  // exactness/period tolerance
};

std::vector<CheckRow> suite_calculus(const SuiteConfig& cfg);
std::vector<CheckRow> suite_caloron(const SuiteConfig& cfg);
std::vector<CheckRow> suite_chernweil(const SuiteConfig& cfg);
std::vector<CheckRow> suite_string(const SuiteConfig& cfg);
std::vector<CheckRow> suite_total(const SuiteConfig& cfg);
std::vector<CheckRow> suite_twz(const SuiteConfig& cfg);

/// Named suite dispatch; "all" concatenates every suite.
std::vector<CheckRow> run_suite(const std::string& name, const SuiteConfig& cfg);
std::vector<std::string> suite_names();

json rows_to_json(const std::string& suite, const SuiteConfig& cfg,
                  const std::vector<CheckRow>& rows);

}  // namespace caloronkit
