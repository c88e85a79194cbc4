// Topologies (symmetric connectivity graphs over nodes 1..5), hop-distance
// matrices, the distance bound used by the optimality properties, injection
// scenarios, and the one-shot topology change.

#ifndef AODVMC_TOPOLOGY_HPP_
#define AODVMC_TOPOLOGY_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aodvmc/types.hpp"

namespace aodvmc {

constexpr std::uint8_t kUnreachable = 0xff;

// Symmetric, irreflexive adjacency over node ids 1..n. Nodes beyond n do
// not exist for the instance. A valid topology keeps A, B, C in one
// connected component (relays may be detached only in the pre-state of an
// AddLink pair, where they are idle until the link appears).
struct Topology {
  std::uint8_t n = 0;
  std::array<std::array<std::uint8_t, kMaxNodes + 1>, kMaxNodes + 1> adj{};

  static Topology from_edges(int n,
                             const std::vector<std::pair<int, int>>& edges);

  bool connected(NodeId i, NodeId j) const { return adj[i][j] != 0; }
  void set_edge(NodeId i, NodeId j, bool on);
  bool has_edge(NodeId i, NodeId j) const { return adj[i][j] != 0; }
  std::vector<std::pair<int, int>> edge_list() const;  // i < j, sorted
  int edge_count() const;

  // True iff A, B, C lie in one connected component.
  bool abc_connected() const;
  // True iff every node 1..n lies in the component containing A.
  bool all_connected() const;

  bool operator==(const Topology&) const = default;
};

enum class ChangeKind : std::uint8_t { kNone = 0, kAddLink = 1, kRemoveLink = 2 };

struct TopologyChange {
  ChangeKind kind = ChangeKind::kNone;
  NodeId i = kNullNode;
  NodeId j = kNullNode;
};

// The four fixed two-injection scenarios ((originator, destination) pairs).
struct Scenario {
  int id = 0;
  std::array<std::pair<NodeId, NodeId>, 2> inj{};
};

// scenario(1..4): S1 ((A,B),(A,C)), S2 ((B,A),(C,A)), S3 ((A,B),(B,C)),
// S4 ((B,C),(A,B)).
Scenario scenario(int id);

// All-pairs hop distances (0 on the diagonal, kUnreachable when no path).
using DistMatrix = std::array<std::array<std::uint8_t, kMaxNodes + 1>,
                              kMaxNodes + 1>;
DistMatrix distance_matrix(const Topology& t);

// The per-pair hop bound for the optimality properties: static instances
// use the topology's own distances; dynamic instances take the pointwise
// greater of the pre- and post-change distances.
DistMatrix property_bound(const Topology& pre, const Topology* post);

// Applies a one-shot change (edge toggled on for AddLink, off for
// RemoveLink). Construction-time validation guarantees RemoveLink keeps
// A, B, C connected.
Topology apply_change(const Topology& t, const TopologyChange& c);

}  // namespace aodvmc

#endif  // AODVMC_TOPOLOGY_HPP_
