#include "bnmix/bottleneck.hpp"

#include "bnmix/error.hpp"

namespace bnmix {

namespace {

std::vector<bool> s_mask(std::size_t n, const std::vector<Vertex>& S) {
  if (S.empty()) throw Error(Errc::EmptyS, "S is empty");
  std::vector<bool> mask(n, false);
  std::size_t count = 0;
  for (Vertex v : S) {
    if (v >= n) throw Error(Errc::InvalidParams, "S vertex out of range");
    if (!mask[v]) ++count;
    mask[v] = true;
  }
  if (count == n) throw Error(Errc::FullS, "S is the whole vertex set");
  return mask;
}

}  // namespace

BottleneckReport bottleneck_ratio(const WalkKernel& k, const std::vector<Vertex>& S) {
  const std::size_t n = k.size();
  const auto in_s = s_mask(n, S);
  BottleneckReport r;
  r.S = S;
  r.mu_S = Eigen::VectorXd::Zero(static_cast<long>(n));
  for (std::size_t x = 0; x < n; ++x) {
    if (in_s[x]) r.pi_S += k.pi(static_cast<long>(x));
  }
  double flow = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (!in_s[x]) continue;
    const long xi = static_cast<long>(x);
    r.mu_S(xi) = k.pi(xi) / r.pi_S;
    for (SparseRM::InnerIterator it(k.P, xi); it; ++it) {
      if (!in_s[static_cast<std::size_t>(it.col())]) flow += r.mu_S(xi) * it.value();
    }
  }
  r.phi_S = flow;
  return r;
}

RestrictedEvolution restricted_evolution_check(const WalkKernel& k, const std::vector<Vertex>& S, long horizon,
                                               double tolerance) {
  if (horizon < 0) throw Error(Errc::InvalidParams, "horizon must be >= 0");
  const auto report = bottleneck_ratio(k, S);
  RestrictedEvolution out;
  out.phi_S = report.phi_S;
  Eigen::RowVectorXd cur = report.mu_S.transpose();
  for (long t = 0; t <= horizon; ++t) {
    if (t > 0) cur = cur * k.P;
    const double dist = 0.5 * (cur - report.mu_S.transpose()).cwiseAbs().sum();
    const double bound = static_cast<double>(t) * report.phi_S;
    out.distance.push_back(dist);
    out.bound.push_back(bound);
    if (dist > bound + tolerance) out.violations.push_back(t);
  }
  return out;
}

}  // namespace bnmix
