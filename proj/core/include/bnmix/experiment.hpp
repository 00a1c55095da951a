#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bnmix/config.hpp"
#include "bnmix/graph.hpp"
#include "bnmix/harness.hpp"

namespace bnmix {

enum class RunMode { Build, Analyze, Mc, Harness, Family, All };

struct RunManifest {
  std::string config_hash;
  std::string version;
  std::vector<std::pair<std::string, double>> timings;  // stage -> seconds
  std::vector<std::string> outputs;                     // file names relative to the output dir
  std::vector<std::string> overrides;
  bool partial = false;
  std::string error;  // "<stage>: <message>" when partial
  bool bound_violated = false;

  nlohmann::json to_json() const;
};

/// Graph named by the config (fixture or paradigm at params.k).
RegionTaggedGraph config_graph(const ExperimentConfig& c);
/// gamma/delta from the config, defaulting to k^p and k^t (k = 1 for plain fixtures).
AnalysisParams config_analysis(const ExperimentConfig& c, int k);

/// Runs the stages selected by `mode`, writes outputs plus manifest.json into c.dir.
/// Stage errors are recorded in the manifest and rethrown.
RunManifest run_experiment(const ExperimentConfig& c, RunMode mode = RunMode::All);

std::string toolkit_version();

}  // namespace bnmix
