#include "veo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/fisher_f.hpp>

#include "veo/error.hpp"

namespace veo {

std::string symbol(Decision d) {
  switch (d) {
    case Decision::better: return "+";
    case Decision::similar: return "≈";
    case Decision::worse: return "-";
  }
  return "≈";
}

Decision parse_decision(const std::string& s) {
  if (s == "+") return Decision::better;
  if (s == "-") return Decision::worse;
  if (s == "≈" || s == "~" || s == "=") return Decision::similar;
  throw ParseError("unknown decision symbol '" + s + "'");
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median(std::span<const double> v) {
  if (v.empty()) return 0.0;
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 ? s[n / 2] : (s[n / 2 - 1] + s[n / 2]) / 2.0;
}

std::vector<double> average_ranks(std::span<const double> values, bool descending) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? values[a] > values[b] : values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> mean_rank_per_arm(const std::vector<std::vector<double>>& rows, bool descending) {
  if (rows.empty()) return {};
  std::vector<double> total(rows.front().size(), 0.0);
  for (const auto& row : rows) {
    if (row.size() != total.size()) throw ConfigError("every network needs a value for every arm");
    const auto r = average_ranks(row, descending);
    for (std::size_t a = 0; a < r.size(); ++a) total[a] += r[a];
  }
  for (double& t : total) t /= static_cast<double>(rows.size());
  return total;
}

namespace {

// Number of arrangements giving each U value for sample sizes (n1, n2).
std::vector<double> u_counts(std::size_t n1, std::size_t n2) {
  const std::size_t max_u = n1 * n2;
  // table[i][j] is the count vector for sizes (i, j); built row by row.
  std::vector<std::vector<std::vector<double>>> table(n1 + 1, std::vector<std::vector<double>>(n2 + 1));
  for (std::size_t i = 0; i <= n1; ++i) {
    for (std::size_t j = 0; j <= n2; ++j) {
      auto& c = table[i][j];
      c.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        c[0] = 1.0;
        continue;
      }
      // The largest value belongs to x (adds j to U) or to y (adds nothing).
      const auto& from_x = table[i - 1][j];
      const auto& from_y = table[i][j - 1];
      for (std::size_t u = 0; u < from_x.size(); ++u) c[u + j] += from_x[u];
      for (std::size_t u = 0; u < from_y.size(); ++u) c[u] += from_y[u];
    }
  }
  auto out = table[n1][n2];
  out.resize(max_u + 1, 0.0);
  return out;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

RankSumResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, double alpha) {
  if (x.size() < 3 || y.size() < 3) throw ConfigError("rank-sum test needs at least 3 values per sample");
  const std::size_t n1 = x.size();
  const std::size_t n2 = y.size();
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  const auto ranks = average_ranks(pooled, false);
  double r1 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
  const double u1 = r1 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
  const double u2 = static_cast<double>(n1 * n2) - u1;
  const double u = std::max(u1, u2);

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    if (t > 1) ties = true;
    tie_term += t * t * t - t;
    i = j + 1;
  }

  RankSumResult out;
  out.statistic = u1;
  if (std::min(n1, n2) <= 10 && !ties) {
    out.exact = true;
    const auto counts = u_counts(n1, n2);
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    double upper = 0.0;
    for (std::size_t k = static_cast<std::size_t>(u); k < counts.size(); ++k) upper += counts[k];
    out.p = std::min(1.0, 2.0 * upper / total);
  } else {
    const double n = static_cast<double>(n1 + n2);
    const double mu = static_cast<double>(n1 * n2) / 2.0;
    const double var = static_cast<double>(n1 * n2) / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (var <= 0.0) {
      out.p = 1.0;
    } else {
      const double z = (u - mu - 0.5) / std::sqrt(var);
      out.p = std::min(1.0, 2.0 * normal_sf(z));
    }
  }
  if (out.p < alpha) {
    const double diff = median(x) - median(y);
    if (diff > 0.0 || (diff == 0.0 && u1 > static_cast<double>(n1 * n2) / 2.0)) {
      out.decision = Decision::better;
    } else if (diff < 0.0 || u1 < static_cast<double>(n1 * n2) / 2.0) {
      out.decision = Decision::worse;
    }
  }
  return out;
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups, double alpha) {
  if (groups.size() < 2) throw ConfigError("ANOVA needs at least two groups");
  std::size_t n = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw ConfigError("every ANOVA group needs at least two values");
    n += g.size();
    grand += std::accumulate(g.begin(), g.end(), 0.0);
  }
  grand /= static_cast<double>(n);
  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    const double m = mean(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  AnovaResult out;
  out.df_between = static_cast<double>(groups.size() - 1);
  out.df_within = static_cast<double>(n - groups.size());
  // Sums of squares below this are rounding noise relative to the data.
  double peak = 0.0;
  for (const auto& g : groups) {
    for (double v : g) peak = std::max(peak, std::abs(v));
  }
  const double eps = 1e-24 * peak * peak * static_cast<double>(n);
  if (ssw <= eps) {
    if (ssb <= eps) {
      out.f = 0.0;
      out.p = 1.0;
    } else {
      out.f = std::numeric_limits<double>::infinity();
      out.p = 0.0;
    }
  } else {
    out.f = (ssb / out.df_between) / (ssw / out.df_within);
    const boost::math::fisher_f dist(out.df_between, out.df_within);
    out.p = boost::math::cdf(boost::math::complement(dist, out.f));
  }
  out.different = out.p < alpha;
  return out;
}

}  // namespace veo
