// The network transition system and its exhaustive exploration: broadcast
// synchronization (sender fires regardless, exactly the connected nodes
// receive), blocking unicast with a failure branch, strict priority for
// internal steps, visited-state deduplication on canonical byte keys, and
// breadth-first minimal counterexample reconstruction.

#ifndef AODVMC_EXPLORER_HPP_
#define AODVMC_EXPLORER_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "aodvmc/enumerate.hpp"
#include "aodvmc/node.hpp"
#include "aodvmc/topology.hpp"
#include "aodvmc/types.hpp"

namespace aodvmc {

// Tester automaton locations: Init --inject1--> Sent1 --inject2--> Final.
enum class TesterLoc : std::uint8_t { kInit = 0, kSent1 = 1, kFinal = 2 };

// Options governing one exploration.
struct ExploreOptions {
  std::uint32_t state_limit = 2'000'000;  // visited-state cap -> Inconclusive
  bool force_change = false;   // enabled topology change preempts everything
  bool v3_reply_only = false;  // narrow variant-3 duplicate reprocessing
  std::uint64_t shuffle_seed = 0;  // 0 = canonical transition order
};

// One model-checking instance: variant, topology (pair), scenario.
struct Instance {
  ModelVariant variant = ModelVariant::kV1;
  InstanceClass cls = InstanceClass::kStatic;
  int topo_id = 0;  // index into the enumerated class, for records
  Topology start;   // connectivity before any change
  Topology post;    // connectivity after the change (== start when static)
  TopologyChange change;  // kNone for static instances
  Scenario sc;
  DistMatrix bound{};  // per-pair hop bound for the optimality properties
  ExploreOptions opts;

  bool is_dynamic() const { return change.kind != ChangeKind::kNone; }
};

Instance make_static_instance(ModelVariant v, const Topology& t, int topo_id,
                              int scenario_id);
Instance make_change_instance(ModelVariant v, InstanceClass cls,
                              const ChangePair& p, int pair_id,
                              int scenario_id);

// Product state of all nodes plus tester location and change status.
struct GlobalState {
  std::array<NodeState, kMaxNodes + 1> node{};  // index = NodeId, 0 unused
  std::uint8_t n = 0;
  TesterLoc tester = TesterLoc::kInit;
  std::uint8_t change_applied = 0;
  std::uint8_t first_req_arrived = 0;  // sticky change guard

  bool operator==(const GlobalState&) const = default;
};

GlobalState initial_state(const Instance& inst);

// Canonical byte encoding: injective on distinct states, fixed field order
// and width, identical across runs and platforms.
std::string state_key(const GlobalState& gs);

enum class TransKind : std::uint8_t {
  kInternal = 0,     // buffer-head step with a Silent/Deliver outcome
  kBroadcast = 1,    // buffer-head step emitting RREQ/RERR to neighbors
  kUnicast = 2,      // buffer-head or queued-send unicast, target connected
  kUnicastFail = 3,  // unicast blocked; link-break handling + RERR broadcast
  kInject = 4,       // tester injects a new packet at an originator
  kChange = 5,       // the one-shot topology change fires
};

// A labeled transition, as generated (enough to apply deterministically and
// to render traces after replay).
struct Transition {
  TransKind kind = TransKind::kInternal;
  NodeId actor = kNullNode;      // processing node / sender / originator
  NodeId recipient = kNullNode;  // unicast target (intended one on failure)
  std::uint8_t inject_idx = 0;   // 0/1: which scenario injection
  bool from_queue = false;  // unicast of a queued data packet, not buffer-head
  Message msg{};            // processed or emitted message, see apply
  // Filled in by apply_transition for trace rendering:
  FixedVec<NodeId, kMaxNodes> receivers{};  // broadcast deliveries
  Message emitted{};                        // message actually sent
  bool has_emission = false;
  LocalOutcome outcome{};  // node-local result (post-update state)
};

// All transitions enabled at gs in canonical order, with the priority rule
// applied: when any internal step exists, exactly the internal steps are
// returned. Canonical order: buffer-head steps by node id, queued sends by
// (node, destination), Inject, Change.
std::vector<Transition> enabled_transitions(const GlobalState& gs,
                                            const Instance& inst);

// Applies t (which must come from enabled_transitions(gs, inst)), returning
// the successor. Sender updates land before receiver buffer appends;
// receivers append in ascending node order. Throws std::runtime_error on
// message-buffer overflow.
GlobalState apply_transition(const GlobalState& gs, const Instance& inst,
                             Transition& t);

// Property verdicts, per property (route found / found-route optimal at
// completion / installed-route optimal always) and per injection pair.
enum class Verdict : std::uint8_t { kHolds = 0, kViolated = 1, kUnknown = 2 };

struct PropertyVerdicts {
  // [property 0..2][injection pair 0..1]
  Verdict v[3][2] = {{Verdict::kHolds, Verdict::kHolds},
                     {Verdict::kHolds, Verdict::kHolds},
                     {Verdict::kHolds, Verdict::kHolds}};

  bool operator==(const PropertyVerdicts&) const = default;
  bool all_hold() const {
    for (const auto& row : v)
      for (Verdict x : row)
        if (x != Verdict::kHolds) return false;
    return true;
  }
  bool any_violated() const {
    for (const auto& row : v)
      for (Verdict x : row)
        if (x == Verdict::kViolated) return true;
    return false;
  }
  bool any_unknown() const {
    for (const auto& row : v)
      for (Verdict x : row)
        if (x == Verdict::kUnknown) return true;
    return false;
  }
};

// check_invariants: evaluates the three properties at one state, returning
// violation flags [property][pair]. Property 1 and 2 are guarded by
// (tester Final and all message buffers empty).
struct PropertyCheck {
  bool violated[3][2] = {{false, false}, {false, false}, {false, false}};
};
PropertyCheck check_invariants(const GlobalState& gs, const Instance& inst,
                               const DistMatrix& bound);

struct ExploreResult {
  PropertyVerdicts verdicts;
  std::uint32_t states = 0;       // distinct states discovered
  bool inconclusive = false;      // cap hit or hard model error
  std::string reason;             // "state-limit" / "msgbuf-overflow" / ""
  std::int64_t millis = 0;        // wall time
};

// Exhaustive prioritized exploration. The returned object retains the
// search graph so minimal counterexample traces can be reconstructed.
class Explorer {
 public:
  explicit Explorer(const Instance& inst);
  ~Explorer();
  Explorer(const Explorer&) = delete;
  Explorer& operator=(const Explorer&) = delete;

  const ExploreResult& run();
  const ExploreResult& result() const { return result_; }

  // Minimal-length (then lexicographically least, under canonical order)
  // trace to the first discovered state violating the given property for
  // the given injection pair. Empty when that verdict is not kViolated.
  std::vector<Transition> trace(int property, int pair) const;

  // The states along a replayed trace, starting at the initial state.
  std::vector<GlobalState> replay(const std::vector<Transition>& tr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Instance inst_;
  ExploreResult result_;
  bool ran_ = false;
};

// Convenience wrapper: run and discard the graph.
ExploreResult explore(const Instance& inst);

// Reference interpreter without the internal-priority rule: every enabled
// transition (internal, synchronizing, inject, change) is explored at every
// state. Used to validate that prioritization preserves verdicts. The cap
// marks the result inconclusive exactly like the prioritized search.
ExploreResult explore_unprioritized(const Instance& inst,
                                    std::uint32_t state_limit);

}  // namespace aodvmc

#endif  // AODVMC_EXPLORER_HPP_
