// Exhaustive enumeration of the experiment topology classes with symmetry
// reduction: connected topologies on 3..5 nodes (endpoints A, B, C pinned,
// relays 4 and 5 interchangeable) and single-link-change pairs.

#ifndef AODVMC_ENUMERATE_HPP_
#define AODVMC_ENUMERATE_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "aodvmc/topology.hpp"

namespace aodvmc {

enum class InstanceClass : std::uint8_t { kStatic = 0, kAddLink = 1,
                                          kRemoveLink = 2 };

const char* class_name(InstanceClass c);
InstanceClass class_from_name(const std::string& name);

// Total-order key for a topology: node count plus the lexicographically
// minimal adjacency encoding over all permutations of the relay nodes
// (A, B, C stay fixed). Two topologies get equal keys iff one maps to the
// other by permuting relays only.
std::string canonical_key(const Topology& t);

// A topology brought to its canonical labeling (the relay permutation that
// minimizes the key is applied).
Topology canonicalize(const Topology& t);

// All topologies with min_n <= n <= max_n whose every node lies in the
// single connected component containing A, B, C, one representative per
// canonical key, sorted by key. Full range (3..5) yields 444.
std::vector<Topology> enumerate_static(int min_n = 3, int max_n = kMaxNodes);

// A single-link-change pair. Both sides live on the full 5-node universe
// (unused relays are isolated vertices): `pre` is a static-class member in
// its canonical labeling, `post` = pre plus one labeled link, and every
// linked node of post still lies in the A-B-C component. The link may
// attach a previously isolated relay. Link additions are enumerated
// labeled - symmetry reduction applies to the topologies, not to the added
// link - so a relay-symmetric pre contributes both mirror links and a
// 3-node pre contributes relay 4 and relay 5 attachments separately.
// AddLink instances start on pre and may add the link; RemoveLink
// instances start on post and may remove it. Ordered by (pre key, edge);
// either kind yields 1978 pairs.
struct ChangePair {
  Topology pre;
  Topology post;
  NodeId i = kNullNode;  // changed edge endpoints, i < j
  NodeId j = kNullNode;
};

std::vector<ChangePair> enumerate_change_pairs();

// Topology-file records: one JSON object per line with deterministic field
// order. Static records carry {id, n, edges}; pair records additionally
// {change: {kind, edge}} describing the instance-relevant change, with the
// starting topology in `edges` (pre for add, post for remove).
void write_static_file(std::ostream& os, const std::vector<Topology>& topos);
void write_pairs_file(std::ostream& os, const std::vector<ChangePair>& pairs,
                      InstanceClass kind);
std::vector<Topology> read_static_file(std::istream& is);
std::vector<ChangePair> read_pairs_file(std::istream& is, InstanceClass kind);

}  // namespace aodvmc

#endif  // AODVMC_ENUMERATE_HPP_
