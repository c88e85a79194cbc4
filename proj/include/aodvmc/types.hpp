// Core value types for the AODV verification model: node identifiers,
// sequence numbers, routing-table entries, messages, and per-node state.
// Everything here is a trivially copyable POD so that global states can be
// copied and byte-encoded cheaply during exhaustive exploration.

#ifndef AODVMC_TYPES_HPP_
#define AODVMC_TYPES_HPP_

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>

namespace aodvmc {

// Node addresses. 0 is the null/no-route sentinel and never names a real
// node; the three endpoints are fixed as A=1, B=2, C=3, relays are 4 and 5.
using NodeId = std::uint8_t;
constexpr NodeId kNullNode = 0;
constexpr NodeId kNodeA = 1;
constexpr NodeId kNodeB = 2;
constexpr NodeId kNodeC = 3;
constexpr int kMaxNodes = 5;

// Sequence numbers; 0 encodes "unknown". A node's own number starts at 1.
using Sqn = std::uint8_t;

// Checked uint8 increment: model counters stay tiny, so a wrap means a bug.
inline std::uint8_t checked_inc(std::uint8_t v, const char* what) {
  if (v == 0xff) throw std::overflow_error(what);
  return static_cast<std::uint8_t>(v + 1);
}

// Fixed-capacity sequence that keeps the enclosing struct trivially
// copyable. Unused slots are zeroed so byte-wise comparisons stay canonical.
template <typename T, int N>
struct FixedVec {
  std::uint8_t n = 0;
  std::array<T, N> v{};

  bool empty() const { return n == 0; }
  bool full() const { return n == N; }
  std::uint8_t size() const { return n; }
  const T& operator[](int i) const { return v[static_cast<size_t>(i)]; }
  T& operator[](int i) { return v[static_cast<size_t>(i)]; }
  const T* begin() const { return v.data(); }
  const T* end() const { return v.data() + n; }

  // Returns false when full (caller decides whether that is an error).
  bool push_back(const T& x) {
    if (n == N) return false;
    v[n++] = x;
    return true;
  }
  // Removes the first element, shifting the rest down (FIFO pop).
  T pop_front() {
    T head = v[0];
    for (int i = 1; i < n; ++i) v[i - 1] = v[i];
    --n;
    v[n] = T{};  // keep trailing storage zeroed for canonical bytes
    return head;
  }
  void erase_at(int i) {
    for (int k = i + 1; k < n; ++k) v[k - 1] = v[k];
    --n;
    v[n] = T{};
  }

  // Trailing storage is always zeroed, so whole-array comparison is exact.
  bool operator==(const FixedVec&) const = default;
};

// One routing-table entry. nhop == 0 means "no route", in which case the
// whole entry is null (hops 0, invalid); an entry invalidated later keeps
// its nhop/hops but clears the valid flag.
struct RouteEntry {
  Sqn dsn = 0;
  std::uint8_t valid = 0;
  std::uint8_t hops = 0;
  NodeId nhop = kNullNode;

  bool operator==(const RouteEntry&) const = default;
};

// Routing table: one slot per possible destination, indexed by NodeId.
// Slot 0 and the owner's own slot stay null.
struct RoutingTable {
  std::array<RouteEntry, kMaxNodes + 1> entry{};

  const RouteEntry& operator[](NodeId d) const { return entry[d]; }
  RouteEntry& operator[](NodeId d) { return entry[d]; }
  bool operator==(const RoutingTable&) const = default;
};

enum class MsgType : std::uint8_t {
  kRreq = 1,  // route request (broadcast)
  kRrep = 2,  // route reply (unicast)
  kRerr = 3,  // route error (broadcast)
  kPkt = 4,   // data packet (unicast)
};

// An unreachable-destination notice inside an RERR: (destination, new dsn).
struct ErrDest {
  NodeId dip = kNullNode;
  Sqn dsn = 0;
  bool operator==(const ErrDest&) const = default;
};

// One protocol message. A single layout covers all types; fields unused by
// a type are zero. RREPs carry the rreqid of the request they answer so a
// failed reply can be traced back to its discovery (variant 4).
struct Message {
  MsgType type = MsgType::kRreq;
  std::uint8_t hops = 0;
  std::uint8_t rreqid = 0;
  NodeId dip = kNullNode;
  Sqn dsn = 0;
  NodeId oip = kNullNode;
  Sqn osn = 0;
  NodeId sip = kNullNode;
  FixedVec<ErrDest, kMaxNodes> rerr{};  // used only when type == kRerr

  bool operator==(const Message&) const = default;
};

constexpr int kMsgBufCapacity = 16;

// A seen route request, identified by originator and request id.
struct SeenReq {
  NodeId oip = kNullNode;
  std::uint8_t rreqid = 0;
  bool operator==(const SeenReq&) const = default;
};

// Complete state of one AODV node. rreqs is kept sorted so equal sets have
// equal bytes; queues counts pending data packets per destination.
struct NodeState {
  NodeId ip = kNullNode;
  Sqn sn = 1;
  std::uint8_t rreq_counter = 0;
  RoutingTable rt{};
  FixedVec<SeenReq, 12> rreqs{};
  std::array<std::uint8_t, kMaxNodes + 1> queues{};
  FixedVec<Message, kMsgBufCapacity> msgbuf{};

  bool operator==(const NodeState&) const = default;

  bool rreq_seen(NodeId oip, std::uint8_t rreqid) const {
    for (const auto& r : rreqs)
      if (r.oip == oip && r.rreqid == rreqid) return true;
    return false;
  }
  // Insert keeping ascending (oip, rreqid) order; duplicates ignored.
  void rreq_mark_seen(NodeId oip, std::uint8_t rreqid) {
    int pos = 0;
    for (; pos < rreqs.size(); ++pos) {
      const auto& r = rreqs[pos];
      if (r.oip == oip && r.rreqid == rreqid) return;
      if (r.oip > oip || (r.oip == oip && r.rreqid > rreqid)) break;
    }
    if (!rreqs.push_back(SeenReq{}))
      throw std::overflow_error("seen-request set full");
    for (int k = rreqs.size() - 1; k > pos; --k) rreqs[k] = rreqs[k - 1];
    rreqs[pos] = SeenReq{oip, rreqid};
  }
  void rreq_unmark(NodeId oip, std::uint8_t rreqid) {
    for (int i = 0; i < rreqs.size(); ++i)
      if (rreqs[i].oip == oip && rreqs[i].rreqid == rreqid) {
        rreqs.erase_at(i);
        return;
      }
  }
};

// Protocol variant under test (cumulative fixes, 1 = basic).
enum class ModelVariant : std::uint8_t { kV1 = 1, kV2 = 2, kV3 = 3, kV4 = 4 };

inline ModelVariant variant_from_int(int v) {
  if (v < 1 || v > 4) throw std::invalid_argument("variant must be 1..4");
  return static_cast<ModelVariant>(v);
}
inline int variant_int(ModelVariant v) { return static_cast<int>(v); }

// Result of a node-local processing step: the successor node state plus
// what (if anything) the node emits. Broadcast carries RREQ/RERR, Unicast
// carries RREP/PKT; Deliver is the destination consuming a data packet.
enum class OutcomeKind : std::uint8_t {
  kSilent = 0,
  kDeliver = 1,
  kBroadcast = 2,
  kUnicast = 3,
};

struct LocalOutcome {
  NodeState node{};
  OutcomeKind kind = OutcomeKind::kSilent;
  NodeId recipient = kNullNode;  // unicast target (nonzero iff kUnicast)
  Message msg{};                 // emission (valid iff kBroadcast/kUnicast)
  NodeId delivered = kNullNode;  // dip of a delivered packet (kDeliver)
};

}  // namespace aodvmc

#endif  // AODVMC_TYPES_HPP_
