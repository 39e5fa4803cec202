// Independent reference implementations used only to check the real ones.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "inav/planner.hpp"

namespace oracle {

// Bellman-Ford-style relaxation to a fixed point over the 8-connected grid.
// Shares nothing with the production Dijkstra besides the edge-cost
// definition, and converges to the same unique fixed point.
inline std::vector<double> brute_force_distances(const inav::OccupancyGrid& grid,
                                                 inav::GridIndex goal) {
  const double inf = std::numeric_limits<double>::infinity();
  const double res = grid.resolution();
  const double diag = res * std::sqrt(2.0);
  std::vector<double> dist(static_cast<size_t>(grid.nx()) * grid.ny(), inf);
  if (!grid.free(goal)) return dist;
  dist[grid.index(goal)] = 0.0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int iy = 0; iy < grid.ny(); ++iy) {
      for (int ix = 0; ix < grid.nx(); ++ix) {
        inav::GridIndex c{ix, iy};
        if (!grid.free(c)) continue;
        double best = dist[grid.index(c)];
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            inav::GridIndex n{ix + dx, iy + dy};
            if (!grid.free(n)) continue;
            double cand = dist[grid.index(n)] + (dx != 0 && dy != 0 ? diag : res);
            if (cand < best) best = cand;
          }
        }
        if (best < dist[grid.index(c)]) {
          dist[grid.index(c)] = best;
          changed = true;
        }
      }
    }
  }
  return dist;
}

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0.0, my = 0.0;
  for (double x : xs) mx += x;
  for (double y : ys) my += y;
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
