#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "cellex/graph.hpp"

namespace cellex::oracle {

struct WalkCensus {
  std::int64_t closed = 0;  // all closed walks of length k
  std::int64_t cycles = 0;  // those that traverse a simple k-cycle
};

/// Enumerates every closed walk of length k explicitly.
inline WalkCensus closed_walks(const Graph& g, int k) {
  WalkCensus census;
  std::vector<int> walk;
  std::function<void(int)> step = [&](int depth) {
    if (depth == k) {
      if (walk.back() != walk.front()) return;
      ++census.closed;
      if (k >= 3) {
        std::vector<int> inner(walk.begin(), walk.end() - 1);
        std::sort(inner.begin(), inner.end());
        if (std::adjacent_find(inner.begin(), inner.end()) == inner.end()) ++census.cycles;
      }
      return;
    }
    for (int w : g.neighbors(walk.back())) {
      walk.push_back(w);
      step(depth + 1);
      walk.pop_back();
    }
  };
  for (int s = 0; s < g.node_count(); ++s) {
    walk.assign(1, s);
    step(0);
  }
  return census;
}

/// Simple cycles as sets of edges, found by unrestricted path search and
/// deduplicated afterwards.
inline std::set<std::vector<Edge>> cycle_edge_sets(const Graph& g, int max_len) {
  std::set<std::vector<Edge>> out;
  std::vector<int> path;
  std::vector<char> used(g.node_count(), 0);
  std::function<void()> extend = [&] {
    const int u = path.back();
    for (int w : g.neighbors(u)) {
      if (w == path.front() && path.size() >= 3) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < path.size(); ++i) edges.push_back(make_edge(path[i], path[(i + 1) % path.size()]));
        std::sort(edges.begin(), edges.end());
        out.insert(edges);
      } else if (!used[w] && static_cast<int>(path.size()) < max_len) {
        used[w] = 1;
        path.push_back(w);
        extend();
        path.pop_back();
        used[w] = 0;
      }
    }
  };
  for (int s = 0; s < g.node_count(); ++s) {
    path.assign(1, s);
    used[s] = 1;
    extend();
    used[s] = 0;
  }
  return out;
}

/// Central finite difference of a scalar function of a parameter vector.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              std::vector<double> x, double eps = 1e-5) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + eps;
    const double up = f(x);
    x[i] = saved - eps;
    const double down = f(x);
    x[i] = saved;
    grad[i] = (up - down) / (2 * eps);
  }
  return grad;
}

}  // namespace cellex::oracle
