#include "bnmix/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "bnmix/error.hpp"

namespace bnmix {

Summary summarize(const std::vector<double>& x) {
  Summary s;
  s.n = x.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(s.n);
  s.variance = s.n > 1 ? m2 / (n - 1.0) : 0.0;
  s.se_mean = std::sqrt(s.variance / n);
  const double pop2 = m2 / n;
  s.se_variance = std::sqrt(std::max(0.0, m4 / n - pop2 * pop2) / n);
  return s;
}

Summary summarize(const std::vector<long>& x) {
  return summarize(std::vector<double>(x.begin(), x.end()));
}

Proportion wilson(std::size_t successes, std::size_t n, double z) {
  Proportion p;
  if (n == 0) {
    p.upper = 1.0;
    p.half_width = 1.0;
    return p;
  }
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double spread = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  p.estimate = phat;
  p.lower = std::max(0.0, center - spread);
  p.upper = std::min(1.0, center + spread);
  p.half_width = std::max(phat - p.lower, p.upper - phat);
  return p;
}

double chi_square_sf(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

GofResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs, double min_expected) {
  if (observed.size() != probs.size()) throw Error(Errc::DimensionMismatch, "observed and probability cells differ");
  double total = 0.0;
  for (double o : observed) total += o;
  std::vector<double> obs, expv;
  double acc_o = 0.0, acc_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    acc_o += observed[i];
    acc_e += probs[i] * total;
    if (acc_e >= min_expected) {
      obs.push_back(acc_o);
      expv.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (expv.empty()) {
      obs.push_back(acc_o);
      expv.push_back(acc_e);
    } else {
      obs.back() += acc_o;
      expv.back() += acc_e;
    }
  }
  GofResult r;
  r.bins = obs.size();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (expv[i] > 0.0) r.statistic += (obs[i] - expv[i]) * (obs[i] - expv[i]) / expv[i];
  }
  r.dof = static_cast<int>(obs.size()) - 1;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

GofResult geometric_gof(const std::vector<long>& samples, double p, long first) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(Errc::InvalidParams, "geometric parameter must lie in (0, 1]");
  long max_value = first;
  for (long s : samples) max_value = std::max(max_value, s);
  const std::size_t cells = static_cast<std::size_t>(max_value - first) + 2;  // last cell is the tail
  std::vector<double> observed(cells, 0.0), probs(cells, 0.0);
  for (long s : samples) {
    if (s < first) throw Error(Errc::InvalidParams, "sample below the geometric support");
    observed[static_cast<std::size_t>(s - first)] += 1.0;
  }
  double remaining = 1.0;
  for (std::size_t i = 0; i + 1 < cells; ++i) {
    probs[i] = remaining * p;
    remaining -= probs[i];
  }
  probs.back() = std::max(0.0, remaining);
  return chi_square_gof(observed, probs);
}

double kendall_tau(const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (y[j] > y[i]) ++concordant;
      if (y[j] < y[i]) ++discordant;
    }
  }
  const double pairs = static_cast<double>(n * (n - 1) / 2);
  return static_cast<double>(concordant - discordant) / pairs;
}

}  // namespace bnmix
