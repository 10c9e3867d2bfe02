#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "nlcurv/errors.hpp"
#include "nlcurv/surface.hpp"

namespace nlcurv {

/// Weighted graph approximating intrinsic distances: mesh vertices,
/// `steiner` evenly spaced nodes on every edge, and straight links between
/// every pair of nodes lying on a common element. With one node per edge this
/// is the edge graph after one round of midpoint refinement, with the
/// in-face diagonals added. Nodes [0, V) are the mesh vertices.
template <typename Scalar>
struct GeodesicGraph {
  Eigen::Index num_mesh_vertices = 0;
  int steiner = 1;
  std::vector<Eigen::Index> offset;
  std::vector<int> target;
  std::vector<Scalar> length;

  Eigen::Index num_nodes() const { return static_cast<Eigen::Index>(offset.size()) - 1; }
};

inline constexpr int kDefaultSteinerPoints = 5;

template <typename Scalar>
GeodesicGraph<Scalar> build_geodesic_graph(const DiscreteHypersurface<Scalar>& mesh,
                                           int steiner = kDefaultSteinerPoints) {
  if (steiner < 1) throw InvalidParams("at least one node per edge is required");
  const Eigen::Index V = mesh.num_vertices();
  const int k = mesh.dim() + 1;
  std::vector<RowVectorX<Scalar>> pos;
  pos.reserve(static_cast<std::size_t>(V));
  for (Eigen::Index v = 0; v < V; ++v) pos.push_back(mesh.vertices().row(v));
  // first interior node of each edge, numbered from its lower vertex
  std::map<std::pair<int, int>, int> edge_nodes;
  std::vector<std::pair<int, int>> links;
  std::vector<int> nodes;
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    nodes.clear();
    for (int a = 0; a < k; ++a) nodes.push_back(mesh.elements()(e, a));
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        const auto key = std::minmax(mesh.elements()(e, a), mesh.elements()(e, b));
        auto it = edge_nodes.find(key);
        if (it == edge_nodes.end()) {
          it = edge_nodes.emplace(key, static_cast<int>(pos.size())).first;
          for (int i = 1; i <= steiner; ++i) {
            const Scalar t = Scalar(i) / Scalar(steiner + 1);
            pos.push_back((1 - t) * mesh.vertices().row(key.first) + t * mesh.vertices().row(key.second));
          }
        }
        for (int i = 0; i < steiner; ++i) nodes.push_back(it->second + i);
      }
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = a + 1; b < nodes.size(); ++b)
        links.emplace_back(std::min(nodes[a], nodes[b]), std::max(nodes[a], nodes[b]));
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());

  GeodesicGraph<Scalar> g;
  g.num_mesh_vertices = V;
  g.steiner = steiner;
  const std::size_t n = pos.size();
  std::vector<Eigen::Index> degree(n, 0);
  for (const auto& [a, b] : links) {
    ++degree[static_cast<std::size_t>(a)];
    ++degree[static_cast<std::size_t>(b)];
  }
  g.offset.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offset[i + 1] = g.offset[i] + degree[i];
  g.target.resize(static_cast<std::size_t>(g.offset[n]));
  g.length.resize(g.target.size());
  std::vector<Eigen::Index> fill(g.offset.begin(), g.offset.end() - 1);
  for (const auto& [a, b] : links) {
    const Scalar len = (pos[static_cast<std::size_t>(a)] - pos[static_cast<std::size_t>(b)]).norm();
    const auto ia = static_cast<std::size_t>(fill[static_cast<std::size_t>(a)]++);
    const auto ib = static_cast<std::size_t>(fill[static_cast<std::size_t>(b)]++);
    g.target[ia] = b;
    g.length[ia] = len;
    g.target[ib] = a;
    g.length[ib] = len;
  }
  return g;
}

/// Shortest-path lengths from `source` to every graph node; unreachable
/// nodes stay at +infinity.
template <typename Scalar>
std::vector<Scalar> shortest_paths(const GeodesicGraph<Scalar>& g, int source) {
  std::vector<Scalar> dist(static_cast<std::size_t>(g.num_nodes()), std::numeric_limits<Scalar>::infinity());
  using Item = std::pair<Scalar, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[static_cast<std::size_t>(source)] = 0;
  heap.emplace(Scalar(0), source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (Eigen::Index k = g.offset[static_cast<std::size_t>(u)]; k < g.offset[static_cast<std::size_t>(u) + 1]; ++k) {
      const int v = g.target[static_cast<std::size_t>(k)];
      const Scalar nd = d + g.length[static_cast<std::size_t>(k)];
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  return dist;
}

/// True when every mesh vertex is reachable from vertex 0.
template <typename Scalar>
bool is_connected(const GeodesicGraph<Scalar>& g) {
  if (g.num_mesh_vertices == 0) return true;
  const auto d = shortest_paths(g, 0);
  for (Eigen::Index v = 0; v < g.num_mesh_vertices; ++v)
    if (!std::isfinite(d[static_cast<std::size_t>(v)])) return false;
  return true;
}

}  // namespace nlcurv
