#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bnmix/graph.hpp"

namespace bnmix {

enum class Growth { Scaled, DoublyExponential };

/// n_j under the chosen schedule: 2^j (scaled) or 2^(2^j). Throws SizeOverflow past 2^62.
std::uint64_t growth_value(Growth g, int j);
/// Index of the first attached tree, ceil(k/2).
int first_tree_index(int k);

struct ParadigmParams {
  int k = 2;
  Growth growth = Growth::Scaled;
  std::optional<std::uint64_t> N;  // default n_k^3
  std::optional<std::uint64_t> m;  // line length [-m, 0]
  std::optional<std::uint64_t> q;  // line copies
  std::optional<std::uint64_t> r;  // graph copies
  std::optional<std::uint64_t> M;  // T0 tree size (paradigm 3)
  std::optional<double> t0_mass_ratio;  // q = ceil(ratio * |B u S| / (m - 1)) when q unset
  double s_exp = 1.0;
  double p_exp = 0.25;
  double t_exp = 1.0;
  std::size_t vertex_budget = 50000;
  bool lump_copies = false;  // collapse r/q copies to own + one weighted aggregate
};

/// Vertex count of the unlumped construction, from the closed-form formulas.
std::uint64_t paradigm_vertex_count(int paradigm, const ParadigmParams& params);

RegionTaggedGraph build_paradigm1(const ParadigmParams& params);
RegionTaggedGraph build_paradigm2(const ParadigmParams& params);
RegionTaggedGraph build_paradigm3(const ParadigmParams& params);
RegionTaggedGraph build_paradigm(int paradigm, const ParadigmParams& params);

}  // namespace bnmix
