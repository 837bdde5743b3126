#include "veo/layout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "json.hpp"

#include "veo/error.hpp"
#include "veo/hashing.hpp"

namespace veo {

LayoutStyle parse_layout_style(const std::string& name) {
  if (name == "kk" || name == "KK" || name == "kamada_kawai") return LayoutStyle::kamada_kawai;
  if (name == "fr" || name == "FR" || name == "fruchterman_reingold") return LayoutStyle::fruchterman_reingold;
  throw ConfigError("unknown layout style '" + name + "' (expected kk or fr)");
}

std::string to_string(LayoutStyle style) { return style == LayoutStyle::kamada_kawai ? "kk" : "fr"; }

namespace {

using DistanceMatrix = std::vector<std::vector<int>>;

DistanceMatrix all_pairs(const Graph& g) {
  DistanceMatrix d;
  d.reserve(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) d.push_back(bfs_distances(g, v));
  return d;
}

void require_connected(const Graph& g) {
  if (!g.empty() && !is_connected(g)) throw GraphError("layout needs a connected graph (pass the largest component)");
}

double stress_with(const DistanceMatrix& d, const std::vector<Point>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double dij = static_cast<double>(d[i][j]);
      const double e = std::hypot(p[i].x - p[j].x, p[i].y - p[j].y) - dij;
      s += e * e / (dij * dij);
    }
  }
  return s;
}

std::vector<Point> stress_gradient(const DistanceMatrix& d, const std::vector<Point>& p) {
  std::vector<Point> grad(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double dx = p[i].x - p[j].x;
      const double dy = p[i].y - p[j].y;
      const double len = std::hypot(dx, dy);
      if (len == 0.0) continue;
      const double dij = static_cast<double>(d[i][j]);
      const double c = 2.0 * (len - dij) / (dij * dij * len);
      grad[i].x += c * dx;
      grad[i].y += c * dy;
      grad[j].x -= c * dx;
      grad[j].y -= c * dy;
    }
  }
  return grad;
}

std::vector<Point> circle(std::size_t n, double radius) {
  std::vector<Point> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    p[i] = {radius * std::cos(a), radius * std::sin(a)};
  }
  return p;
}

}  // namespace

double kk_stress(const Graph& g, const std::vector<Point>& positions) {
  if (positions.size() != g.node_count()) throw GraphError("layout does not cover the graph");
  require_connected(g);
  return stress_with(all_pairs(g), positions);
}

std::vector<Point> kk_initial_positions(const Graph& g) {
  require_connected(g);
  const auto d = all_pairs(g);
  int diameter = 0;
  for (const auto& row : d) diameter = std::max(diameter, *std::max_element(row.begin(), row.end()));
  return circle(g.node_count(), std::max<double>(0.5, static_cast<double>(diameter) / 2.0));
}

KkResult kk_optimize(const Graph& g, int max_iterations, double tolerance) {
  require_connected(g);
  KkResult out;
  if (g.node_count() <= 1) {
    out.raw.assign(g.node_count(), Point{});
    return out;
  }
  const auto d = all_pairs(g);
  out.raw = kk_initial_positions(g);
  out.initial_stress = stress_with(d, out.raw);
  double current = out.initial_stress;
  double step = 0.1;
  std::vector<Point> trial(out.raw.size());
  for (int it = 0; it < max_iterations; ++it) {
    const auto grad = stress_gradient(d, out.raw);
    bool accepted = false;
    double next = current;
    // Backtrack until the step lowers the stress, so acceptance is monotone.
    while (step > 1e-12) {
      for (std::size_t i = 0; i < trial.size(); ++i) {
        trial[i] = {out.raw[i].x - step * grad[i].x, out.raw[i].y - step * grad[i].y};
      }
      next = stress_with(d, trial);
      if (next < current) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    out.iterations = it + 1;
    if (!accepted) break;
    out.raw.swap(trial);
    const double delta = current - next;
    current = next;
    step *= 1.2;
    if (delta < tolerance) break;
  }
  out.final_stress = current;
  return out;
}

std::vector<Point> fit_to_canvas(const std::vector<Point>& raw, const CanvasFit& fit) {
  if (fit.width <= 0 || fit.height <= 0) throw ConfigError("canvas dimensions must be positive");
  if (!(fit.margin_fraction >= 0.0 && fit.margin_fraction < 0.5)) throw ConfigError("margin must lie in [0, 0.5)");
  std::vector<Point> out(raw.size());
  if (raw.empty()) return out;
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto& p : raw) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double avail_w = fit.width * (1.0 - 2.0 * fit.margin_fraction);
  const double avail_h = fit.height * (1.0 - 2.0 * fit.margin_fraction);
  const double ext_x = max_x - min_x;
  const double ext_y = max_y - min_y;
  double scale = std::numeric_limits<double>::infinity();
  if (ext_x > 1e-12) scale = std::min(scale, avail_w / ext_x);
  if (ext_y > 1e-12) scale = std::min(scale, avail_h / ext_y);
  if (!std::isfinite(scale)) scale = 0.0;
  const double mid_x = (min_x + max_x) / 2.0;
  const double mid_y = (min_y + max_y) / 2.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = {fit.width / 2.0 + scale * (raw[i].x - mid_x), fit.height / 2.0 + scale * (raw[i].y - mid_y)};
  }
  return out;
}

Layout layout_kamada_kawai(const Graph& g, const CanvasFit& fit) {
  const auto result = kk_optimize(g);
  return {fit_to_canvas(result.raw, fit), LayoutStyle::kamada_kawai, fit.width, fit.height};
}

Layout layout_fruchterman_reingold(const Graph& g, std::uint64_t rng_seed, const CanvasFit& fit, int iterations) {
  require_connected(g);
  const std::size_t n = g.node_count();
  std::vector<Point> p(n);
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& q : p) {
    q.x = unit(rng);
    q.y = unit(rng);
  }
  if (n > 1) {
    const double k = std::sqrt(1.0 / static_cast<double>(n));
    const double t0 = 0.1;
    std::vector<Point> disp(n);
    for (int it = 0; it < iterations; ++it) {
      const double temperature = t0 * (1.0 - static_cast<double>(it) / iterations);
      std::fill(disp.begin(), disp.end(), Point{});
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          double dx = p[i].x - p[j].x;
          double dy = p[i].y - p[j].y;
          double dist = std::hypot(dx, dy);
          if (dist < 1e-9) {
            // Coincident points: push apart along a fixed direction.
            dx = 1e-3 * (1.0 + static_cast<double>(i));
            dy = 1e-3;
            dist = std::hypot(dx, dy);
          }
          double force = k * k / dist;
          if (g.has_edge(static_cast<NodeIndex>(i), static_cast<NodeIndex>(j))) force -= dist * dist / k;
          disp[i].x += dx / dist * force;
          disp[i].y += dy / dist * force;
          disp[j].x -= dx / dist * force;
          disp[j].y -= dy / dist * force;
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double len = std::hypot(disp[i].x, disp[i].y);
        if (len < 1e-12) continue;
        const double move = std::min(len, temperature);
        p[i].x += disp[i].x / len * move;
        p[i].y += disp[i].y / len * move;
      }
    }
  }
  return {fit_to_canvas(p, fit), LayoutStyle::fruchterman_reingold, fit.width, fit.height};
}

Layout compute_layout(const Graph& g, LayoutStyle style, std::uint64_t rng_seed, const CanvasFit& fit) {
  if (style == LayoutStyle::kamada_kawai) return layout_kamada_kawai(g, fit);
  return layout_fruchterman_reingold(g, rng_seed, fit);
}

Layout cached_layout(const Graph& g, LayoutStyle style, std::uint64_t rng_seed, const std::filesystem::path& dir,
                     const CanvasFit& fit) {
  const std::string key = graph_hash(g).substr(0, 16) + "_" + to_string(style) + "_" + std::to_string(rng_seed) + "_" +
                          std::to_string(fit.width) + "x" + std::to_string(fit.height);
  const auto path = dir / ("layout_" + key + ".json");
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.contains("positions") && j["positions"].size() == g.node_count()) {
      Layout layout;
      layout.style = style;
      layout.width = fit.width;
      layout.height = fit.height;
      for (const auto& xy : j["positions"]) layout.positions.push_back({xy.at(0).get<double>(), xy.at(1).get<double>()});
      return layout;
    }
  }
  auto layout = compute_layout(g, style, rng_seed, fit);
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["style"] = to_string(style);
  j["seed"] = rng_seed;
  auto& positions = j["positions"] = nlohmann::json::array();
  for (const auto& p : layout.positions) positions.push_back({p.x, p.y});
  const auto tmp = path.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp);
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
  return layout;
}

}  // namespace veo
