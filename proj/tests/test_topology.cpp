// Topology, distance and change tests. Hop distances are cross-checked by
// an independent brute-force path-enumeration oracle.

#include <doctest.h>

#include <algorithm>
#include <vector>

#include "aodvmc/topology.hpp"

using namespace aodvmc;

namespace {

// Oracle: shortest path length by enumerating all simple paths.
int oracle_distance(const Topology& t, NodeId a, NodeId b) {
  if (a == b) return 0;
  int best = kUnreachable;
  std::vector<NodeId> path{a};
  std::vector<bool> used(kMaxNodes + 1, false);
  used[a] = true;
  auto rec = [&](auto&& self, NodeId at, int len) -> void {
    if (at == b) {
      best = std::min(best, len);
      return;
    }
    for (NodeId nx = 1; nx <= t.n; ++nx) {
      if (!used[nx] && t.connected(at, nx)) {
        used[nx] = true;
        self(self, nx, len + 1);
        used[nx] = false;
      }
    }
  };
  rec(rec, a, 0);
  return best;
}

Topology line_abc() { return Topology::from_edges(3, {{1, 2}, {2, 3}}); }
Topology triangle() {
  return Topology::from_edges(3, {{1, 2}, {2, 3}, {1, 3}});
}

}  // namespace

TEST_CASE("topology construction and queries") {
  Topology t = line_abc();
  CHECK(t.n == 3);
  CHECK(t.connected(1, 2));
  CHECK(t.connected(2, 1));  // symmetric
  CHECK_FALSE(t.connected(1, 3));
  CHECK_FALSE(t.connected(1, 1));  // irreflexive
  CHECK(t.abc_connected());
  CHECK(t.all_connected());
  CHECK(t.edge_count() == 2);
  CHECK(t.edge_list() == std::vector<std::pair<int, int>>{{1, 2}, {2, 3}});

  Topology split = Topology::from_edges(3, {{1, 2}});
  CHECK_FALSE(split.abc_connected());
}

TEST_CASE("distance_matrix matches the path-enumeration oracle") {
  // Pinned cases first.
  DistMatrix line = distance_matrix(line_abc());
  CHECK(line[1][3] == 2);
  CHECK(line[3][1] == 2);
  CHECK(line[1][1] == 0);

  DistMatrix tri = distance_matrix(triangle());
  for (NodeId i = 1; i <= 3; ++i)
    for (NodeId j = 1; j <= 3; ++j)
      CHECK(tri[i][j] == (i == j ? 0 : 1));

  // 5-node star centered at relay 4 (node 5 hangs off the center too).
  Topology star =
      Topology::from_edges(5, {{1, 4}, {2, 4}, {3, 4}, {4, 5}});
  DistMatrix sm = distance_matrix(star);
  CHECK(sm[1][2] == 2);
  CHECK(sm[1][5] == 2);
  CHECK(sm[1][4] == 1);

  // Unreachable pairs are marked.
  Topology gap = Topology::from_edges(4, {{1, 2}, {2, 3}});
  DistMatrix gm = distance_matrix(gap);
  CHECK(gm[1][4] == kUnreachable);

  // Exhaustive cross-check on every 4-node graph.
  for (int bits = 0; bits < 64; ++bits) {
    std::vector<std::pair<int, int>> edges;
    int k = 0;
    for (int i = 1; i <= 4; ++i)
      for (int j = i + 1; j <= 4; ++j, ++k)
        if (bits & (1 << k)) edges.push_back({i, j});
    Topology t = Topology::from_edges(4, edges);
    DistMatrix d = distance_matrix(t);
    for (NodeId i = 1; i <= 4; ++i)
      for (NodeId j = 1; j <= 4; ++j)
        REQUIRE(d[i][j] == oracle_distance(t, i, j));
  }
}

TEST_CASE("property_bound takes the greater distance") {
  // Static: the topology's own distances.
  DistMatrix st = property_bound(line_abc(), nullptr);
  CHECK(st[1][3] == 2);

  // Adding the A-C link cannot lower the bound below the pre distance.
  Topology post = triangle();
  DistMatrix add = property_bound(line_abc(), &post);
  CHECK(add[1][3] == 2);  // max(2, 1)
  CHECK(add[1][2] == 1);

  // Removing the A-C link raises the bound to the post distance.
  Topology pre = triangle(), after = line_abc();
  DistMatrix rem = property_bound(pre, &after);
  CHECK(rem[1][3] == 2);  // max(1, 2)

  // Dominance: the bound is pointwise >= both matrices.
  DistMatrix dpre = distance_matrix(pre), dpost = distance_matrix(after);
  for (NodeId i = 1; i <= 3; ++i)
    for (NodeId j = 1; j <= 3; ++j) {
      CHECK(rem[i][j] >= dpre[i][j]);
      CHECK(rem[i][j] >= dpost[i][j]);
    }
}

TEST_CASE("apply_change toggles exactly one edge") {
  TopologyChange add{ChangeKind::kAddLink, 1, 3};
  CHECK(apply_change(line_abc(), add) == triangle());

  TopologyChange rem{ChangeKind::kRemoveLink, 1, 3};
  CHECK(apply_change(triangle(), rem) == line_abc());
}

TEST_CASE("scenarios are the four fixed injection pairs") {
  using P = std::pair<NodeId, NodeId>;
  CHECK(scenario(1).inj == std::array<P, 2>{P{1, 2}, P{1, 3}});
  CHECK(scenario(2).inj == std::array<P, 2>{P{2, 1}, P{3, 1}});
  CHECK(scenario(3).inj == std::array<P, 2>{P{1, 2}, P{2, 3}});
  CHECK(scenario(4).inj == std::array<P, 2>{P{2, 3}, P{1, 2}});
}
