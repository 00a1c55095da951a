#include "bnmix/fixtures.hpp"

#include <charconv>

#include "bnmix/error.hpp"

namespace bnmix {

const std::vector<FixtureInfo>& list_fixtures() {
  static const std::vector<FixtureInfo> fixtures = {
      {"K2", "single edge; bipartite, periodic without laziness"},
      {"triangle", "complete graph on 3 vertices"},
      {"dumbbell", "two triangles joined by a bridge; S is the far triangle"},
      {"path-m", "reflecting path [-m,0] with bottleneck 1 and S = {2}; default m = 5"},
      {"paradigm1-scaled", "paradigm 1, k = 2, n_j = 2^j"},
      {"paradigm2-scaled", "paradigm 2, k = 2, n_j = 2^j, r = q = 1, m = round(sqrt(6Nk))"},
      {"paradigm3-scaled", "paradigm 3, k = 2, n_j = 2^j, r = 1, M = 63"},
  };
  return fixtures;
}

RegionTaggedGraph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  }
  return make_plain_graph("K" + std::to_string(n), n, std::move(edges));
}

RegionTaggedGraph path_fixture(std::size_t m) {
  if (m < 1) throw Error(Errc::InvalidParams, "path length must be >= 1");
  CaseSpec spec;
  spec.name = "path-" + std::to_string(m);
  spec.vertex_count = m + 3;
  for (Vertex i = 0; i < m; ++i) spec.edges.push_back({i, i + 1, 1.0});
  spec.edges.push_back({0, m + 1, 1.0});
  spec.edges.push_back({m + 1, m + 2, 1.0});
  spec.region_of.assign(m + 1, Region::T0);
  spec.region_of.push_back(Region::Bottleneck);
  spec.region_of.push_back(Region::S);
  spec.origin = 0;
  spec.z = m + 1;
  spec.c = m + 2;
  spec.boundary = {m};
  return build_case_graph(spec);
}

RegionTaggedGraph dumbbell_fixture() {
  CaseSpec spec;
  spec.name = "dumbbell";
  spec.vertex_count = 6;
  spec.edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
  spec.region_of = {Region::T0, Region::T0, Region::Bottleneck, Region::S, Region::S, Region::S};
  spec.origin = 1;
  spec.z = 2;
  spec.c = 4;
  spec.boundary = {0};
  return build_case_graph(spec);
}

ParadigmParams scaled_fixture_params(int paradigm) {
  ParadigmParams p;
  p.k = 2;
  p.growth = Growth::Scaled;
  if (paradigm != 1) p.r = 1;
  if (paradigm == 2) p.q = 1;
  if (paradigm == 3) p.M = 63;
  return p;
}

RegionTaggedGraph make_fixture(const std::string& name) {
  if (name == "K2") return make_plain_graph("K2", 2, {{0, 1, 1.0}});
  if (name == "triangle") return make_plain_graph("triangle", 3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  if (name == "dumbbell") return dumbbell_fixture();
  if (name == "path-m") return path_fixture(5);
  if (name.rfind("path-", 0) == 0) {
    std::size_t m = 0;
    const char* first = name.data() + 5;
    const char* last = name.data() + name.size();
    const auto [ptr, ec] = std::from_chars(first, last, m);
    if (ec != std::errc{} || ptr != last) throw Error(Errc::InvalidParams, "bad path fixture '" + name + "'");
    return path_fixture(m);
  }
  for (int paradigm = 1; paradigm <= 3; ++paradigm) {
    if (name == "paradigm" + std::to_string(paradigm) + "-scaled") {
      auto g = build_paradigm(paradigm, scaled_fixture_params(paradigm));
      g.name = name;
      return g;
    }
  }
  throw Error(Errc::InvalidParams, "unknown fixture '" + name + "'");
}

}  // namespace bnmix
