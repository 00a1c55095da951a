#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bnmix/builders.hpp"

namespace bnmix {

/// One experiment, read from an INI file with sections [paradigm], [walk], [analysis], [mc], [output].
struct ExperimentConfig {
  // [paradigm]
  std::string source = "fixture";  // fixture | paradigm1 | paradigm2 | paradigm3
  std::string fixture = "triangle";
  ParadigmParams params;
  std::vector<int> family;  // k values for the family stage

  // [walk]
  double laziness = 0.5;
  std::size_t exact_budget = 20000;
  long horizon = 100;
  std::size_t squaring_max_vertices = 6000;

  // [analysis]
  std::optional<double> epsilon;
  std::optional<double> gamma;  // default k^p
  std::optional<double> delta;  // default k^t
  double h_of_z = 0.0;
  double prec_ratio = 0.5;
  double upper_slack = 2.0;
  double cutoff_fraction = 0.1;

  // [mc]
  std::size_t n = 10000;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  long step_budget = 0;
  long coupling_horizon = 200;

  // [output]
  std::string dir = "out";
  bool exact = true;
  bool mc = true;
  bool harness = true;

  std::vector<std::string> overrides;  // as given, in order
};

/// Parses INI text; unknown sections or keys raise ConfigError naming the key (and line).
ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Canonical "section.key=value" listing of every setting except the thread count.
std::string canonical_config(const ExperimentConfig& c);
std::string config_hash(const ExperimentConfig& c);

}  // namespace bnmix
