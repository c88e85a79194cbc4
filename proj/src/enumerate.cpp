// Topology-class enumeration with relay-symmetry reduction, and the
// line-oriented topology file format.

#include "aodvmc/enumerate.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aodvmc {

const char* class_name(InstanceClass c) {
  switch (c) {
    case InstanceClass::kStatic:
      return "static";
    case InstanceClass::kAddLink:
      return "add";
    case InstanceClass::kRemoveLink:
      return "remove";
  }
  throw std::invalid_argument("bad instance class");
}

InstanceClass class_from_name(const std::string& name) {
  if (name == "static") return InstanceClass::kStatic;
  if (name == "add") return InstanceClass::kAddLink;
  if (name == "remove") return InstanceClass::kRemoveLink;
  throw std::invalid_argument("unknown instance class: " + name);
}

namespace {

// Relabels nodes through `perm` (perm[v] = new id of v; endpoints fixed).
Topology apply_perm(const Topology& t,
                    const std::array<NodeId, kMaxNodes + 1>& perm) {
  Topology out;
  out.n = t.n;
  for (NodeId i = 1; i <= t.n; ++i) {
    for (NodeId j = 1; j <= t.n; ++j) {
      out.adj[perm[i]][perm[j]] = t.adj[i][j];
    }
  }
  return out;
}

constexpr std::array<NodeId, kMaxNodes + 1> kIdentityPerm = {0, 1, 2, 3, 4, 5};
constexpr std::array<NodeId, kMaxNodes + 1> kSwapRelays = {0, 1, 2, 3, 5, 4};

std::string encode(const Topology& t) {
  std::string s;
  s.push_back(static_cast<char>('0' + t.n));
  for (int i = 1; i <= t.n; ++i) {
    for (int j = i + 1; j <= t.n; ++j) {
      s.push_back(t.adj[i][j] != 0 ? '1' : '0');
    }
  }
  return s;
}

// Both relays exist only at n = 5; below that the relay group is trivial.
bool has_relay_symmetry(const Topology& t) { return t.n == kMaxNodes; }

}  // namespace

std::string canonical_key(const Topology& t) {
  std::string key = encode(t);
  if (has_relay_symmetry(t)) {
    key = std::min(key, encode(apply_perm(t, kSwapRelays)));
  }
  return key;
}

Topology canonicalize(const Topology& t) {
  if (has_relay_symmetry(t)) {
    Topology swapped = apply_perm(t, kSwapRelays);
    if (encode(swapped) < encode(t)) return swapped;
  }
  return t;
}

std::vector<Topology> enumerate_static(int min_n, int max_n) {
  if (min_n < 3 || max_n > kMaxNodes || min_n > max_n) {
    throw std::invalid_argument("enumerate_static: node range must be 3..5");
  }
  std::vector<Topology> out;
  std::set<std::string> seen;
  for (int n = min_n; n <= max_n; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) slots.emplace_back(i, j);
    }
    const std::uint32_t total = 1u << slots.size();
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      Topology t;
      t.n = static_cast<std::uint8_t>(n);
      for (std::size_t b = 0; b < slots.size(); ++b) {
        if ((mask >> b) & 1u) {
          t.adj[slots[b].first][slots[b].second] = 1;
          t.adj[slots[b].second][slots[b].first] = 1;
        }
      }
      if (!t.all_connected()) continue;
      std::string key = canonical_key(t);
      if (seen.insert(key).second) out.push_back(canonicalize(t));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Topology& a, const Topology& b) {
              return encode(a) < encode(b);
            });
  return out;
}

namespace {

// A class member on the full universe, with unused relays isolated.
Topology pad_to_universe(const Topology& t) {
  Topology out = t;
  out.n = kMaxNodes;
  return out;
}

// True when every linked node lies in the A-B-C component (isolated
// relays are fine; a detached relay-relay edge is not).
bool padded_class_member(const Topology& t) {
  if (!t.abc_connected()) return false;
  DistMatrix d = distance_matrix(t);
  for (NodeId v = 4; v <= kMaxNodes; ++v) {
    bool linked = false;
    for (NodeId u = 1; u <= kMaxNodes; ++u) {
      if (t.adj[v][u] != 0) linked = true;
    }
    if (linked && d[kNodeA][v] == kUnreachable) return false;
  }
  return true;
}

}  // namespace

std::vector<ChangePair> enumerate_change_pairs() {
  std::vector<ChangePair> out;
  for (const Topology& member : enumerate_static()) {
    Topology pre = pad_to_universe(member);
    for (NodeId i = 1; i <= kMaxNodes; ++i) {
      for (NodeId j = static_cast<NodeId>(i + 1); j <= kMaxNodes; ++j) {
        if (pre.has_edge(i, j)) continue;
        Topology post = pre;
        post.set_edge(i, j, true);
        if (!padded_class_member(post)) continue;
        ChangePair p;
        p.pre = pre;
        p.post = post;
        p.i = i;
        p.j = j;
        out.push_back(p);
      }
    }
  }
  // enumerate_static is key-sorted and the edge loop ascending, so `out`
  // is already ordered by (pre key, edge).
  return out;
}

namespace {

void write_edges(std::ostream& os, const Topology& t) {
  os << "[";
  bool first = true;
  for (const auto& [i, j] : t.edge_list()) {
    if (!first) os << ",";
    first = false;
    os << "[" << i << "," << j << "]";
  }
  os << "]";
}

Topology topology_from_json(const nlohmann::json& rec) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : rec.at("edges")) {
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  return Topology::from_edges(rec.at("n").get<int>(), edges);
}

}  // namespace

void write_static_file(std::ostream& os, const std::vector<Topology>& topos) {
  for (std::size_t id = 0; id < topos.size(); ++id) {
    os << "{\"id\":" << id << ",\"n\":" << int(topos[id].n) << ",\"edges\":";
    write_edges(os, topos[id]);
    os << "}\n";
  }
}

void write_pairs_file(std::ostream& os, const std::vector<ChangePair>& pairs,
                      InstanceClass kind) {
  if (kind == InstanceClass::kStatic) {
    throw std::invalid_argument("write_pairs_file: kind must be a change class");
  }
  const char* kind_name = kind == InstanceClass::kAddLink ? "add" : "remove";
  for (std::size_t id = 0; id < pairs.size(); ++id) {
    const ChangePair& p = pairs[id];
    const Topology& start =
        kind == InstanceClass::kAddLink ? p.pre : p.post;
    os << "{\"id\":" << id << ",\"n\":" << int(start.n) << ",\"edges\":";
    write_edges(os, start);
    os << ",\"change\":{\"kind\":\"" << kind_name << "\",\"edge\":["
       << int(p.i) << "," << int(p.j) << "]}}\n";
  }
}

std::vector<Topology> read_static_file(std::istream& is) {
  std::vector<Topology> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line);
    out.push_back(topology_from_json(rec));
  }
  return out;
}

std::vector<ChangePair> read_pairs_file(std::istream& is, InstanceClass kind) {
  if (kind == InstanceClass::kStatic) {
    throw std::invalid_argument("read_pairs_file: kind must be a change class");
  }
  std::vector<ChangePair> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line);
    Topology start = topology_from_json(rec);
    const auto& ch = rec.at("change");
    if (class_from_name(ch.at("kind").get<std::string>()) != kind) {
      throw std::runtime_error("pair file kind mismatch");
    }
    ChangePair p;
    p.i = static_cast<NodeId>(ch.at("edge").at(0).get<int>());
    p.j = static_cast<NodeId>(ch.at("edge").at(1).get<int>());
    if (kind == InstanceClass::kAddLink) {
      p.pre = start;
      p.post = start;
      p.post.set_edge(p.i, p.j, true);
    } else {
      p.post = start;
      p.pre = start;
      p.pre.set_edge(p.i, p.j, false);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace aodvmc
