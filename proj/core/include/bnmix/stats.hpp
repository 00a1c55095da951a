#pragma once

#include <cstddef>
#include <vector>

namespace bnmix {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double se_mean = 0.0;
  double se_variance = 0.0;  // sqrt((m4 - s^4) / n)
};

Summary summarize(const std::vector<double>& x);
Summary summarize(const std::vector<long>& x);

struct Proportion {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double half_width = 0.0;  // max distance from the estimate to either Wilson end
};

/// Wilson score interval (95% by default).
Proportion wilson(std::size_t successes, std::size_t n, double z = 1.959963984540054);

struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

/// Chi-square test of observed counts against cell probabilities; cells with expected
/// count below `min_expected` are merged into their right neighbour (the last cell leftwards).
GofResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs,
                         double min_expected = 5.0);

/// Goodness of fit of samples on {first, first+1, ...} to a geometric law with success probability p.
GofResult geometric_gof(const std::vector<long>& samples, double p, long first = 1);

/// Kendall rank correlation of a sequence against its index; -1 means strictly decreasing.
double kendall_tau(const std::vector<double>& y);

}  // namespace bnmix
