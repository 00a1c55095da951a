#pragma once

#include <string>
#include <vector>

#include "bnmix/builders.hpp"
#include "bnmix/graph.hpp"

namespace bnmix {

struct FixtureInfo {
  std::string name;
  std::string description;
};

/// Stable, ordered list of the built-in fixtures.
const std::vector<FixtureInfo>& list_fixtures();

/// Builds a fixture by name. "path-m" accepts an explicit length as "path-<m>" (default m = 5).
RegionTaggedGraph make_fixture(const std::string& name);

RegionTaggedGraph complete_graph(std::size_t n);
/// Path [-m, 0] with region tail 1 (bottleneck), 2 (S); vertex i <= m sits at position -i.
RegionTaggedGraph path_fixture(std::size_t m);
RegionTaggedGraph dumbbell_fixture();

/// Parameters of the scaled paradigm fixtures (k = 2, r = q = 1).
ParadigmParams scaled_fixture_params(int paradigm);

}  // namespace bnmix
