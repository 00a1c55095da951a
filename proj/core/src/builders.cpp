#include "bnmix/builders.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "bnmix/error.hpp"

namespace bnmix {

std::uint64_t growth_value(Growth g, int j) {
  if (j < 0) throw Error(Errc::InvalidParams, "tree index must be non-negative");
  const long double exponent = g == Growth::Scaled ? j : std::ldexp(1.0L, j);
  if (exponent > 62) throw Error(Errc::SizeOverflow, "n_j = 2^" + std::to_string(static_cast<double>(exponent)));
  return std::uint64_t{1} << static_cast<int>(exponent);
}

int first_tree_index(int k) { return (k + 1) / 2; }

namespace {

struct Resolved {
  int k = 0;
  int h = 0;
  std::uint64_t nk = 0;
  std::uint64_t N = 0;
  std::vector<std::uint64_t> nj;  // n_h .. n_k
  std::uint64_t m = 0, q = 0, r = 0, M = 0;
  double tree_mass() const {
    double sum = 0.0;
    for (auto n : nj) sum += static_cast<double>(N / n);
    return sum;
  }
  double inverse_sum() const {
    double sum = 0.0;
    for (auto n : nj) sum += 1.0 / static_cast<double>(n);
    return sum;
  }
  // Bottleneck plus S for one copy, excluding the shared glue vertex c.
  double copy_size() const { return static_cast<double>(nk) + tree_mass(); }
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw Error(Errc::SizeOverflow, "parameter product overflows");
  }
  return a * b;
}

std::uint64_t at_least_one(double x) { return x < 1.0 ? 1 : static_cast<std::uint64_t>(x); }

Resolved resolve(int paradigm, const ParadigmParams& p, Provenance* prov) {
  if (p.k < 1) throw Error(Errc::InvalidParams, "k must be >= 1");
  if (!(p.p_exp < 0.5)) throw Error(Errc::InvalidParams, "p must be < 1/2");
  if (!(p.t_exp > 0.0) || p.t_exp > p.s_exp) throw Error(Errc::InvalidParams, "need 0 < t <= s");
  Resolved r;
  r.k = p.k;
  r.h = first_tree_index(p.k);
  r.nk = growth_value(p.growth, p.k);
  for (int j = r.h; j <= p.k; ++j) r.nj.push_back(growth_value(p.growth, j));
  for (std::size_t i = 1; i < r.nj.size(); ++i) {
    if (r.nj[i] <= r.nj[i - 1]) throw Error(Errc::InvalidParams, "n_j must be strictly increasing");
  }
  r.N = p.N ? *p.N : checked_mul(checked_mul(r.nk, r.nk), r.nk);
  if (r.N < r.nk) throw Error(Errc::InvalidParams, "N must be at least n_k");

  auto note = [prov](const std::string& key, double v) {
    if (prov) prov->set(key, v);
  };
  note("paradigm", paradigm);
  note("k", p.k);
  note("n_k", static_cast<double>(r.nk));
  note("h_index", r.h);
  note("n_h", static_cast<double>(r.nj.front()));
  note("N", static_cast<double>(r.N));
  note("s", p.s_exp);
  note("p", p.p_exp);
  note("t", p.t_exp);

  const double k = p.k;
  const double rule_power = std::pow(k, 2.0 * p.s_exp + 1.0);
  if (paradigm == 2) {
    const double m_raw = std::sqrt(6.0 * static_cast<double>(r.N) * k);
    r.m = p.m ? *p.m : at_least_one(std::round(m_raw));
    note("m_raw", m_raw);
    const double r_raw = 12.0 * rule_power / r.inverse_sum();
    r.r = p.r ? *p.r : at_least_one(std::ceil(r_raw));
    note("r_raw", r_raw);
    double q_raw = 1.0;
    if (!p.q && p.t0_mass_ratio && r.m > 1) {
      q_raw = *p.t0_mass_ratio * (static_cast<double>(r.r) * r.copy_size() + 1.0) / static_cast<double>(r.m - 1);
      note("t0_mass_ratio", *p.t0_mass_ratio);
    }
    r.q = p.q ? *p.q : at_least_one(std::ceil(q_raw));
    note("q_raw", p.q ? static_cast<double>(*p.q) : q_raw);
    const double q_bound = 12.0 * rule_power * static_cast<double>(r.N) / (m_raw - 2.0);
    note("q_bound", q_bound);
    note("q_bound_holds", static_cast<double>(r.q) > q_bound ? 1.0 : 0.0);
    if (r.m == 0 || r.q == 0 || r.r == 0) throw Error(Errc::InvalidParams, "r, q, m must be >= 1");
    if (r.m == 1 && r.q > 1 && !p.lump_copies) throw Error(Errc::InvalidParams, "m = 1 admits only q = 1");
    note("m", static_cast<double>(r.m));
    note("q", static_cast<double>(r.q));
    note("r", static_cast<double>(r.r));
  } else if (paradigm == 3) {
    const double m_raw = std::floor(std::sqrt(static_cast<double>(r.N) * k)) + 1.0;
    r.m = p.m ? *p.m : static_cast<std::uint64_t>(m_raw);
    note("m_raw", m_raw);
    if (p.M) {
      r.M = *p.M;
    } else {
      if (r.m >= 62) throw Error(Errc::SizeOverflow, "M = 2^m - 1 overflows");
      r.M = (std::uint64_t{1} << r.m) - 1;
    }
    if (r.M < 3) throw Error(Errc::InvalidParams, "M must be >= 3");
    const double r_raw = 6.0 * rule_power / r.inverse_sum();
    r.r = p.r ? *p.r : at_least_one(std::ceil(r_raw));
    note("r_raw", r_raw);
    if (r.r == 0) throw Error(Errc::InvalidParams, "r must be >= 1");
    note("m", static_cast<double>(r.m));
    note("M", static_cast<double>(r.M));
    note("r", static_cast<double>(r.r));
  }
  return r;
}

std::uint64_t count_of(int paradigm, const Resolved& r, std::uint64_t r_copies, std::uint64_t q_copies) {
  std::uint64_t copy = r.nk;
  for (auto n : r.nj) copy += r.N / n;
  switch (paradigm) {
    case 1: return r.N + copy;
    case 2: return 3 + checked_mul(r_copies, copy) + checked_mul(q_copies, r.m - 1);
    case 3: return r.M + 1 + checked_mul(r_copies, copy);
    default: throw Error(Errc::InvalidParams, "paradigm must be 1, 2 or 3");
  }
}

class Builder {
 public:
  Vertex add(Region region, int subtree = -1) {
    region_.push_back(region);
    subtree_.push_back(subtree);
    return region_.size() - 1;
  }
  void link(Vertex u, Vertex v, double w = 1.0) { edges_.push_back({u, v, w}); }

  // Complete binary tree in heap order, last level filled left to right.
  // Returns the vertex ids; ids[0] is the root.
  std::vector<Vertex> tree(std::uint64_t size, Region region, int subtree, double w = 1.0) {
    std::vector<Vertex> ids(size);
    for (std::uint64_t i = 0; i < size; ++i) {
      ids[i] = add(region, subtree);
      if (i > 0) link(ids[(i - 1) / 2], ids[i], w);
    }
    return ids;
  }

  RegionTaggedGraph finish(std::string name, Marks marks, CaseKind kind, Provenance prov) {
    RegionTaggedGraph g;
    g.name = std::move(name);
    g.graph = Graph(region_.size(), std::move(edges_));
    RegionLayer layer;
    layer.region_of = std::move(region_);
    layer.subtree_of = std::move(subtree_);
    layer.marks = std::move(marks);
    layer.case_kind = kind;
    g.regions = std::move(layer);
    prov.set("vertex_count", static_cast<double>(g.vertex_count()));
    g.provenance = std::move(prov);
    return g;
  }

 private:
  std::vector<Region> region_;
  std::vector<int> subtree_;
  std::vector<Edge> edges_;
};

// Vertices on the last level of a heap-ordered tree of `size` vertices.
std::vector<Vertex> deepest_level(const std::vector<Vertex>& ids) {
  std::uint64_t first = 1;
  while (2 * first + 1 <= ids.size()) first = 2 * first + 1;  // size of the full part
  std::uint64_t start = first == ids.size() ? (first - 1) / 2 : first;
  return {ids.begin() + static_cast<long>(start), ids.end()};
}

void check_budget(std::uint64_t count, const ParadigmParams& p) {
  if (count > p.vertex_budget) {
    throw Error(Errc::SizeOverflow, std::to_string(count) + " vertices exceed the budget of " +
                                        std::to_string(p.vertex_budget));
  }
}

// One copy of the line 1..n_k from the origin to c with its attached trees.
// Returns the vertex at position n_h (the z of this copy).
Vertex add_bottleneck_copy(Builder& b, const Resolved& r, Vertex origin, Vertex c, double w) {
  const std::uint64_t nh = r.nj.front();
  Vertex prev = origin;
  std::vector<Vertex> line(r.nk + 1);
  for (std::uint64_t pos = 1; pos <= r.nk; ++pos) {
    line[pos] = b.add(pos <= nh ? Region::Bottleneck : Region::S);
    b.link(prev, line[pos], w);
    prev = line[pos];
  }
  b.link(prev, c, w);
  for (std::size_t i = 0; i < r.nj.size(); ++i) {
    const int j = r.h + static_cast<int>(i);
    auto ids = b.tree(r.N / r.nj[i], Region::S, j, w);
    b.link(line[r.nj[i]], ids.front(), w);
  }
  return line[nh];
}

std::vector<double> copy_weights(std::uint64_t copies, bool lumped) {
  if (!lumped || copies == 1) return std::vector<double>(copies, 1.0);
  return {1.0, static_cast<double>(copies - 1)};
}

}  // namespace

std::uint64_t paradigm_vertex_count(int paradigm, const ParadigmParams& params) {
  const auto r = resolve(paradigm, params, nullptr);
  return count_of(paradigm, r, r.r, r.q);
}

RegionTaggedGraph build_paradigm1(const ParadigmParams& params) {
  Provenance prov;
  const auto r = resolve(1, params, &prov);
  check_budget(count_of(1, r, 1, 1), params);

  Builder b;
  const auto t0 = b.tree(r.N, Region::T0, -1);
  const Vertex origin = t0.front();
  const std::uint64_t nh = r.nj.front();
  std::vector<Vertex> line(r.nk + 1);
  Vertex prev = origin;
  for (std::uint64_t pos = 1; pos <= r.nk; ++pos) {
    line[pos] = b.add(pos <= nh ? Region::Bottleneck : Region::S);
    b.link(prev, line[pos]);
    prev = line[pos];
  }
  Vertex c = 0;
  for (std::size_t i = 0; i < r.nj.size(); ++i) {
    const int j = r.h + static_cast<int>(i);
    auto ids = b.tree(r.N / r.nj[i], Region::S, j);
    b.link(line[r.nj[i]], ids.front());
    if (j == r.k) c = ids.front();
  }
  Marks marks;
  marks.origin = origin;
  marks.z = line[nh];
  marks.z_set = {marks.z};
  marks.c = c;
  marks.boundary = deepest_level(t0);
  return b.finish("paradigm1-k" + std::to_string(r.k), std::move(marks), CaseKind::CaseB, std::move(prov));
}

RegionTaggedGraph build_paradigm2(const ParadigmParams& params) {
  Provenance prov;
  const auto r = resolve(2, params, &prov);
  const std::uint64_t rc = params.lump_copies ? std::min<std::uint64_t>(r.r, 2) : r.r;
  const std::uint64_t qc = params.lump_copies ? std::min<std::uint64_t>(r.q, 2) : r.q;
  check_budget(count_of(2, r, rc, qc), params);
  prov.set("lumped", params.lump_copies ? 1.0 : 0.0);

  Builder b;
  const Vertex origin = b.add(Region::T0);
  const Vertex c = b.add(Region::S);
  Marks marks;
  marks.origin = origin;
  marks.c = c;
  for (double w : copy_weights(r.r, params.lump_copies)) {
    marks.z_set.push_back(add_bottleneck_copy(b, r, origin, c, w));
  }
  marks.z = marks.z_set.front();
  const Vertex end = b.add(Region::T0);
  for (double w : copy_weights(r.q, params.lump_copies)) {
    Vertex prev = origin;
    for (std::uint64_t i = 1; i < r.m; ++i) {
      const Vertex v = b.add(Region::T0);
      b.link(prev, v, w);
      prev = v;
    }
    b.link(prev, end, w);
  }
  marks.boundary = {end};
  return b.finish("paradigm2-k" + std::to_string(r.k), std::move(marks), CaseKind::CaseA, std::move(prov));
}

RegionTaggedGraph build_paradigm3(const ParadigmParams& params) {
  Provenance prov;
  const auto r = resolve(3, params, &prov);
  const std::uint64_t rc = params.lump_copies ? std::min<std::uint64_t>(r.r, 2) : r.r;
  check_budget(count_of(3, r, rc, 1), params);
  prov.set("lumped", params.lump_copies ? 1.0 : 0.0);

  Builder b;
  const auto t0 = b.tree(r.M, Region::T0, -1);
  const Vertex origin = t0.front();
  const Vertex c = b.add(Region::S);
  Marks marks;
  marks.origin = origin;
  marks.c = c;
  for (double w : copy_weights(r.r, params.lump_copies)) {
    marks.z_set.push_back(add_bottleneck_copy(b, r, origin, c, w));
  }
  marks.z = marks.z_set.front();
  marks.boundary = deepest_level(t0);
  return b.finish("paradigm3-k" + std::to_string(r.k), std::move(marks), CaseKind::CaseA, std::move(prov));
}

RegionTaggedGraph build_paradigm(int paradigm, const ParadigmParams& params) {
  switch (paradigm) {
    case 1: return build_paradigm1(params);
    case 2: return build_paradigm2(params);
    case 3: return build_paradigm3(params);
    default: throw Error(Errc::InvalidParams, "paradigm must be 1, 2 or 3");
  }
}

}  // namespace bnmix
