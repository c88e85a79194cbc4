// Topology construction, hop distances via per-source BFS, property bounds,
// and the fixed injection scenarios.

#include "aodvmc/topology.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace aodvmc {

Topology Topology::from_edges(int n,
                              const std::vector<std::pair<int, int>>& edges) {
  if (n < 3 || n > kMaxNodes) {
    throw std::invalid_argument("topology: node count must be 3..5");
  }
  Topology t;
  t.n = static_cast<std::uint8_t>(n);
  for (const auto& [a, b] : edges) {
    if (a < 1 || b < 1 || a > n || b > n || a == b) {
      throw std::invalid_argument("topology: edge out of range");
    }
    t.adj[a][b] = 1;
    t.adj[b][a] = 1;
  }
  return t;
}

void Topology::set_edge(NodeId i, NodeId j, bool on) {
  if (i < 1 || j < 1 || i > n || j > n || i == j) {
    throw std::invalid_argument("topology: edge out of range");
  }
  adj[i][j] = on ? 1 : 0;
  adj[j][i] = on ? 1 : 0;
}

std::vector<std::pair<int, int>> Topology::edge_list() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (adj[i][j] != 0) out.emplace_back(i, j);
    }
  }
  return out;
}

int Topology::edge_count() const {
  int c = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (adj[i][j] != 0) ++c;
    }
  }
  return c;
}

namespace {

// Connected component of `start` as a bitmask over node ids.
std::uint32_t component_of(const Topology& t, NodeId start) {
  std::uint32_t seen = 1u << start;
  std::queue<NodeId> q;
  q.push(start);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId v = 1; v <= t.n; ++v) {
      if (t.adj[u][v] != 0 && (seen & (1u << v)) == 0) {
        seen |= 1u << v;
        q.push(v);
      }
    }
  }
  return seen;
}

}  // namespace

bool Topology::abc_connected() const {
  std::uint32_t comp = component_of(*this, kNodeA);
  return (comp & (1u << kNodeB)) != 0 && (comp & (1u << kNodeC)) != 0;
}

bool Topology::all_connected() const {
  std::uint32_t comp = component_of(*this, kNodeA);
  for (NodeId v = 1; v <= n; ++v) {
    if ((comp & (1u << v)) == 0) return false;
  }
  return true;
}

Scenario scenario(int id) {
  Scenario s;
  s.id = id;
  switch (id) {
    case 1:
      s.inj = {{{kNodeA, kNodeB}, {kNodeA, kNodeC}}};
      break;
    case 2:
      s.inj = {{{kNodeB, kNodeA}, {kNodeC, kNodeA}}};
      break;
    case 3:
      s.inj = {{{kNodeA, kNodeB}, {kNodeB, kNodeC}}};
      break;
    case 4:
      s.inj = {{{kNodeB, kNodeC}, {kNodeA, kNodeB}}};
      break;
    default:
      throw std::invalid_argument("scenario id must be 1..4");
  }
  return s;
}

DistMatrix distance_matrix(const Topology& t) {
  DistMatrix d{};
  for (auto& row : d) row.fill(kUnreachable);
  for (NodeId s = 1; s <= t.n; ++s) {
    d[s][s] = 0;
    std::queue<NodeId> q;
    q.push(s);
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop();
      for (NodeId v = 1; v <= t.n; ++v) {
        if (t.adj[u][v] != 0 && d[s][v] == kUnreachable) {
          d[s][v] = static_cast<std::uint8_t>(d[s][u] + 1);
          q.push(v);
        }
      }
    }
  }
  return d;
}

DistMatrix property_bound(const Topology& pre, const Topology* post) {
  DistMatrix b = distance_matrix(pre);
  if (post != nullptr) {
    DistMatrix p = distance_matrix(*post);
    for (int i = 0; i <= kMaxNodes; ++i) {
      for (int j = 0; j <= kMaxNodes; ++j) {
        b[i][j] = std::max(b[i][j], p[i][j]);
      }
    }
  }
  return b;
}

Topology apply_change(const Topology& t, const TopologyChange& c) {
  if (c.kind == ChangeKind::kNone) return t;
  Topology out = t;
  out.set_edge(c.i, c.j, c.kind == ChangeKind::kAddLink);
  return out;
}

}  // namespace aodvmc
