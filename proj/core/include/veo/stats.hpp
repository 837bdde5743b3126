#pragma once

#include <span>
#include <string>
#include <vector>

namespace veo {

enum class Decision { better, similar, worse };
/// "+", "≈" or "-".
std::string symbol(Decision d);
Decision parse_decision(const std::string& s);

struct RankSumResult {
  double statistic = 0.0;  // Mann-Whitney U of x
  double p = 1.0;          // two-sided
  bool exact = false;
  Decision decision = Decision::similar;
};

/// Two-sided Wilcoxon rank-sum (Mann-Whitney U) test of x against y. Exact
/// null distribution when min(|x|, |y|) <= 10 and there are no ties,
/// otherwise the normal approximation with tie and continuity correction.
/// When p < alpha the decision follows the sign of median(x) - median(y).
/// Throws ConfigError when either sample has fewer than 3 values.
RankSumResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, double alpha = 0.05);

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  bool different = false;
  double df_between = 0.0;
  double df_within = 0.0;
};

/// One-way ANOVA. Needs at least two groups of at least two values each.
/// No variance at all gives F = 0, p = 1; only between-group variance gives
/// F = inf, p = 0.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups, double alpha = 0.05);

/// Ranks of `values` (1 = largest when `descending`), ties share the mean rank.
std::vector<double> average_ranks(std::span<const double> values, bool descending = true);

/// Mean rank per arm over rows (one row per network, one column per arm).
std::vector<double> mean_rank_per_arm(const std::vector<std::vector<double>>& rows, bool descending = true);

double mean(std::span<const double> v);
/// Sample standard deviation; 0 for fewer than two values.
double sample_sd(std::span<const double> v);
double median(std::span<const double> v);

}  // namespace veo
