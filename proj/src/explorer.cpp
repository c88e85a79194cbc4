// Exhaustive exploration of the network transition system: strict priority
// for internal steps, broadcast/unicast synchronization against the current
// connectivity, the one-shot topology change, visited-state deduplication
// on canonical byte keys, and breadth-first minimal-counterexample
// reconstruction via parent pointers.

#include "aodvmc/explorer.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "aodvmc/node.hpp"

namespace aodvmc {

namespace {

constexpr std::uint32_t kNoState = 0xffffffffu;

const Topology& current_topology(const GlobalState& gs, const Instance& inst) {
  return gs.change_applied ? inst.post : inst.start;
}

void put(std::string& k, std::uint8_t b) {
  k.push_back(static_cast<char>(b));
}

// Exact inverse of state_key. Node ids, slot 0, and slots beyond n are
// implicit (reconstructed to their fixed values), so the encoding is
// injective on states the explorer can produce.
GlobalState state_from_key(const std::string& k) {
  GlobalState gs;
  std::size_t p = 0;
  auto get = [&]() { return static_cast<std::uint8_t>(k[p++]); };
  gs.n = get();
  gs.tester = static_cast<TesterLoc>(get());
  gs.change_applied = get();
  gs.first_req_arrived = get();
  for (NodeId i = 1; i <= gs.n; ++i) {
    NodeState& nd = gs.node[i];
    nd.ip = i;
    nd.sn = get();
    nd.rreq_counter = get();
    for (NodeId d = 1; d <= gs.n; ++d) {
      RouteEntry& e = nd.rt[d];
      e.dsn = get();
      e.valid = get();
      e.hops = get();
      e.nhop = get();
    }
    for (NodeId d = 1; d <= gs.n; ++d) nd.queues[d] = get();
    std::uint8_t seen = get();
    for (int s = 0; s < seen; ++s) {
      SeenReq r;
      r.oip = get();
      r.rreqid = get();
      nd.rreqs.push_back(r);
    }
    std::uint8_t buffered = get();
    for (int b = 0; b < buffered; ++b) {
      Message m;
      m.type = static_cast<MsgType>(get());
      m.hops = get();
      m.rreqid = get();
      m.dip = get();
      m.dsn = get();
      m.oip = get();
      m.osn = get();
      m.sip = get();
      std::uint8_t errs = get();
      for (int e = 0; e < errs; ++e) {
        ErrDest ed;
        ed.dip = get();
        ed.dsn = get();
        m.rerr.push_back(ed);
      }
      nd.msgbuf.push_back(m);
    }
  }
  return gs;
}

// Buffer appends during a synchronization, ascending receiver order. Also
// the one place the arrival flag can flip: the first injection's request
// arriving (being enqueued) at its destination enables both the second
// injection and, in dynamic instances, the topology change.
void deliver_broadcast(GlobalState& gs, const Instance& inst,
                       const Topology& topo, NodeId sender, const Message& m,
                       Transition& t) {
  for (NodeId r = 1; r <= gs.n; ++r) {
    if (r == sender || !topo.connected(sender, r)) continue;
    if (!enqueue_message(gs.node[r], m))
      throw std::runtime_error("msgbuf-overflow");
    t.receivers.push_back(r);
    if (gs.first_req_arrived == 0 && m.type == MsgType::kRreq &&
        r == inst.sc.inj[0].second && m.oip == inst.sc.inj[0].first &&
        m.dip == r)
      gs.first_req_arrived = 1;
  }
}

// Transition generation in canonical order. With `prioritize` set (the
// model's semantics), any internal step suppresses every synchronization,
// injection, and the optional change; the unprioritized variant is the
// reference interpreter used to validate that suppression is sound. A
// forced change preempts everything until applied.
std::vector<Transition> enabled_impl(const GlobalState& gs,
                                     const Instance& inst, bool prioritize) {
  if (inst.opts.force_change && inst.is_dynamic() &&
      gs.first_req_arrived != 0 && gs.change_applied == 0) {
    Transition t;
    t.kind = TransKind::kChange;
    t.actor = inst.change.i;
    t.recipient = inst.change.j;
    return {t};
  }
  const Topology& topo = current_topology(gs, inst);

  // Buffer-head steps, one per node with a pending message.
  std::vector<Transition> heads;
  bool any_internal = false;
  for (NodeId i = 1; i <= gs.n; ++i) {
    if (gs.node[i].msgbuf.empty()) continue;
    NodeState after = gs.node[i];
    Message head = after.msgbuf.pop_front();
    LocalOutcome out =
        process_message(after, head, inst.variant, inst.opts.v3_reply_only);
    Transition t;
    t.actor = i;
    t.msg = head;
    switch (out.kind) {
      case OutcomeKind::kSilent:
      case OutcomeKind::kDeliver:
        t.kind = TransKind::kInternal;
        any_internal = true;
        break;
      case OutcomeKind::kBroadcast:
        t.kind = TransKind::kBroadcast;
        break;
      case OutcomeKind::kUnicast:
        t.recipient = out.recipient;
        t.kind = topo.connected(i, out.recipient) ? TransKind::kUnicast
                                                  : TransKind::kUnicastFail;
        break;
    }
    heads.push_back(t);
  }
  if (prioritize && any_internal) {
    std::vector<Transition> internals;
    for (const Transition& t : heads)
      if (t.kind == TransKind::kInternal) internals.push_back(t);
    return internals;
  }

  std::vector<Transition> out = std::move(heads);

  // Queued data-packet sends, by (node, destination).
  for (NodeId i = 1; i <= gs.n; ++i) {
    for (NodeId dip : sendable_destinations(gs.node[i])) {
      LocalOutcome send = send_queued(gs.node[i], dip);
      Transition t;
      t.actor = i;
      t.recipient = send.recipient;
      t.from_queue = true;
      t.msg = send.msg;
      t.kind = topo.connected(i, send.recipient) ? TransKind::kUnicast
                                                 : TransKind::kUnicastFail;
      out.push_back(t);
    }
  }

  // Tester injection: the first from Init, the second enabled at any point
  // after the first has fired.
  if (gs.tester != TesterLoc::kFinal) {
    int idx = gs.tester == TesterLoc::kInit ? 0 : 1;
    Transition t;
    t.kind = TransKind::kInject;
    t.inject_idx = static_cast<std::uint8_t>(idx);
    t.actor = inst.sc.inj[static_cast<std::size_t>(idx)].first;
    t.recipient = inst.sc.inj[static_cast<std::size_t>(idx)].second;
    out.push_back(t);
  }

  // The optional one-shot topology change.
  if (inst.is_dynamic() && gs.change_applied == 0 &&
      gs.first_req_arrived != 0) {
    Transition t;
    t.kind = TransKind::kChange;
    t.actor = inst.change.i;
    t.recipient = inst.change.j;
    out.push_back(t);
  }
  return out;
}

}  // namespace

Instance make_static_instance(ModelVariant v, const Topology& t, int topo_id,
                              int scenario_id) {
  if (!t.abc_connected())
    throw std::invalid_argument("static topology must connect A, B, C");
  Instance inst;
  inst.variant = v;
  inst.cls = InstanceClass::kStatic;
  inst.topo_id = topo_id;
  inst.start = t;
  inst.post = t;
  inst.sc = scenario(scenario_id);
  inst.bound = property_bound(t, nullptr);
  return inst;
}

Instance make_change_instance(ModelVariant v, InstanceClass cls,
                              const ChangePair& p, int pair_id,
                              int scenario_id) {
  if (cls == InstanceClass::kStatic)
    throw std::invalid_argument("change instance needs a change class");
  Instance inst;
  inst.variant = v;
  inst.cls = cls;
  inst.topo_id = pair_id;
  if (cls == InstanceClass::kAddLink) {
    inst.start = p.pre;
    inst.post = p.post;
    inst.change = TopologyChange{ChangeKind::kAddLink, p.i, p.j};
  } else {
    inst.start = p.post;
    inst.post = p.pre;
    inst.change = TopologyChange{ChangeKind::kRemoveLink, p.i, p.j};
  }
  if (!inst.start.abc_connected() || !inst.post.abc_connected())
    throw std::invalid_argument("change pair must keep A, B, C connected");
  if (!(inst.post == apply_change(inst.start, inst.change)))
    throw std::invalid_argument("change pair sides differ beyond the edge");
  inst.sc = scenario(scenario_id);
  inst.bound = property_bound(inst.start, &inst.post);
  return inst;
}

GlobalState initial_state(const Instance& inst) {
  GlobalState gs;
  gs.n = inst.start.n;
  for (NodeId i = 1; i <= gs.n; ++i) gs.node[i].ip = i;
  return gs;
}

std::string state_key(const GlobalState& gs) {
  std::string k;
  k.reserve(96);
  put(k, gs.n);
  put(k, static_cast<std::uint8_t>(gs.tester));
  put(k, gs.change_applied);
  put(k, gs.first_req_arrived);
  for (NodeId i = 1; i <= gs.n; ++i) {
    const NodeState& nd = gs.node[i];
    put(k, nd.sn);
    put(k, nd.rreq_counter);
    for (NodeId d = 1; d <= gs.n; ++d) {
      const RouteEntry& e = nd.rt[d];
      put(k, e.dsn);
      put(k, e.valid);
      put(k, e.hops);
      put(k, e.nhop);
    }
    for (NodeId d = 1; d <= gs.n; ++d) put(k, nd.queues[d]);
    put(k, nd.rreqs.n);
    for (const SeenReq& r : nd.rreqs) {
      put(k, r.oip);
      put(k, r.rreqid);
    }
    put(k, nd.msgbuf.n);
    for (const Message& m : nd.msgbuf) {
      put(k, static_cast<std::uint8_t>(m.type));
      put(k, m.hops);
      put(k, m.rreqid);
      put(k, m.dip);
      put(k, m.dsn);
      put(k, m.oip);
      put(k, m.osn);
      put(k, m.sip);
      put(k, m.rerr.n);
      for (const ErrDest& e : m.rerr) {
        put(k, e.dip);
        put(k, e.dsn);
      }
    }
  }
  return k;
}

std::vector<Transition> enabled_transitions(const GlobalState& gs,
                                            const Instance& inst) {
  return enabled_impl(gs, inst, true);
}

GlobalState apply_transition(const GlobalState& gs, const Instance& inst,
                             Transition& t) {
  GlobalState next = gs;
  const Topology& topo = current_topology(gs, inst);
  t.receivers = FixedVec<NodeId, kMaxNodes>{};
  t.emitted = Message{};
  t.has_emission = false;

  switch (t.kind) {
    case TransKind::kInternal: {
      NodeState after = next.node[t.actor];
      Message head = after.msgbuf.pop_front();
      LocalOutcome out =
          process_message(after, head, inst.variant, inst.opts.v3_reply_only);
      next.node[t.actor] = out.node;
      t.outcome = out;
      break;
    }
    case TransKind::kBroadcast: {
      NodeState after = next.node[t.actor];
      Message head = after.msgbuf.pop_front();
      LocalOutcome out =
          process_message(after, head, inst.variant, inst.opts.v3_reply_only);
      next.node[t.actor] = out.node;
      t.outcome = out;
      t.emitted = out.msg;
      t.has_emission = true;
      deliver_broadcast(next, inst, topo, t.actor, out.msg, t);
      break;
    }
    case TransKind::kUnicast:
    case TransKind::kUnicastFail: {
      LocalOutcome out;
      if (t.from_queue) {
        out = send_queued(next.node[t.actor], t.msg.dip);
      } else {
        NodeState after = next.node[t.actor];
        Message head = after.msgbuf.pop_front();
        out = process_message(after, head, inst.variant,
                              inst.opts.v3_reply_only);
      }
      if (t.kind == TransKind::kUnicast) {
        next.node[t.actor] = out.node;
        t.outcome = out;
        t.emitted = out.msg;
        t.has_emission = true;
        if (!enqueue_message(next.node[out.recipient], out.msg))
          throw std::runtime_error("msgbuf-overflow");
        t.receivers.push_back(out.recipient);
      } else {
        // Blocked unicast: the sender's send-side update still lands, then
        // link-break handling and the resulting RERR fire atomically.
        LocalOutcome fail =
            on_unicast_failure(out.node, out.msg, out.recipient, inst.variant);
        next.node[t.actor] = fail.node;
        t.outcome = fail;
        if (fail.kind == OutcomeKind::kBroadcast) {
          t.emitted = fail.msg;
          t.has_emission = true;
          deliver_broadcast(next, inst, topo, t.actor, fail.msg, t);
        }
      }
      break;
    }
    case TransKind::kInject: {
      NodeId oip = inst.sc.inj[t.inject_idx].first;
      NodeId dip = inst.sc.inj[t.inject_idx].second;
      LocalOutcome out = handle_newpkt(next.node[oip], dip);
      next.node[oip] = out.node;
      t.outcome = out;
      if (out.kind == OutcomeKind::kBroadcast) {
        t.emitted = out.msg;
        t.has_emission = true;
        deliver_broadcast(next, inst, topo, oip, out.msg, t);
      }
      next.tester =
          t.inject_idx == 0 ? TesterLoc::kSent1 : TesterLoc::kFinal;
      break;
    }
    case TransKind::kChange: {
      next.change_applied = 1;
      break;
    }
  }
  return next;
}

PropertyCheck check_invariants(const GlobalState& gs, const Instance& inst,
                               const DistMatrix& bound) {
  PropertyCheck pc;
  bool final_guard = gs.tester == TesterLoc::kFinal;
  for (NodeId i = 1; final_guard && i <= gs.n; ++i)
    if (!gs.node[i].msgbuf.empty()) final_guard = false;
  for (int pair = 0; pair < 2; ++pair) {
    NodeId oip = inst.sc.inj[static_cast<std::size_t>(pair)].first;
    NodeId dip = inst.sc.inj[static_cast<std::size_t>(pair)].second;
    const RouteEntry& e = gs.node[oip].rt[dip];
    bool over_bound = e.valid != 0 && e.hops > bound[oip][dip];
    if (over_bound) pc.violated[2][pair] = true;
    if (final_guard) {
      if (e.nhop == kNullNode) pc.violated[0][pair] = true;
      if (over_bound) pc.violated[1][pair] = true;
    }
  }
  return pc;
}

namespace {

// Search graph: discovery-order state arena (keys owned by the dedup map)
// plus parent pointers for trace reconstruction.
struct SearchGraph {
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<const std::string*> key_of;  // discovery order -> canonical key
  struct Meta {
    std::uint32_t parent = 0;
    std::uint8_t trans_idx = 0;  // canonical index at the parent
  };
  std::vector<Meta> meta;
  std::uint32_t witness[3][2] = {{kNoState, kNoState},
                                 {kNoState, kNoState},
                                 {kNoState, kNoState}};
};

void note_violations(SearchGraph& g, const GlobalState& gs,
                     const Instance& inst, std::uint32_t id) {
  PropertyCheck pc = check_invariants(gs, inst, inst.bound);
  for (int prop = 0; prop < 3; ++prop)
    for (int pair = 0; pair < 2; ++pair)
      if (pc.violated[prop][pair] && g.witness[prop][pair] == kNoState)
        g.witness[prop][pair] = id;
}

// Breadth-first closure over the (un)prioritized successor relation.
// Property checks happen at first discovery, so with the canonical
// generation order the recorded witness is minimal-length and the
// parent-pointer trace to it lexicographically least. A shuffle seed only
// permutes per-state expansion order: the closure, verdicts, and state
// count are unchanged, the witness choice need not be.
ExploreResult run_bfs(const Instance& inst, bool prioritize, SearchGraph& g) {
  auto t0 = std::chrono::steady_clock::now();
  ExploreResult res;
  bool stopped = false;
  std::string reason;
  std::mt19937_64 rng;
  try {
    GlobalState init = initial_state(inst);
    auto [it0, fresh0] = g.index.emplace(state_key(init), 0u);
    g.key_of.push_back(&it0->first);
    g.meta.push_back({});
    note_violations(g, init, inst, 0);
    for (std::uint32_t cursor = 0;
         cursor < g.key_of.size() && !stopped; ++cursor) {
      GlobalState gs = state_from_key(*g.key_of[cursor]);
      std::vector<Transition> ts = enabled_impl(gs, inst, prioritize);
      std::vector<std::uint8_t> order(ts.size());
      std::iota(order.begin(), order.end(), std::uint8_t{0});
      if (inst.opts.shuffle_seed != 0) {
        rng.seed(inst.opts.shuffle_seed + cursor);
        std::shuffle(order.begin(), order.end(), rng);
      }
      for (std::uint8_t k : order) {
        Transition t = ts[k];
        GlobalState next = apply_transition(gs, inst, t);
        std::string key = state_key(next);
        if (g.index.find(key) != g.index.end()) continue;
        if (g.index.size() >= inst.opts.state_limit) {
          stopped = true;
          reason = "state-limit";
          break;
        }
        auto id = static_cast<std::uint32_t>(g.key_of.size());
        auto [it, fresh] = g.index.emplace(std::move(key), id);
        g.key_of.push_back(&it->first);
        g.meta.push_back({cursor, k});
        note_violations(g, next, inst, id);
      }
    }
  } catch (const std::runtime_error& err) {
    stopped = true;
    reason = err.what();
  }
  res.states = static_cast<std::uint32_t>(g.index.size());
  res.inconclusive = stopped;
  res.reason = reason;
  for (int prop = 0; prop < 3; ++prop)
    for (int pair = 0; pair < 2; ++pair)
      res.verdicts.v[prop][pair] =
          stopped ? Verdict::kUnknown
                  : (g.witness[prop][pair] != kNoState ? Verdict::kViolated
                                                       : Verdict::kHolds);
  res.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  return res;
}

}  // namespace

struct Explorer::Impl : SearchGraph {};

Explorer::Explorer(const Instance& inst)
    : impl_(std::make_unique<Impl>()), inst_(inst) {}

Explorer::~Explorer() = default;

const ExploreResult& Explorer::run() {
  if (!ran_) {
    result_ = run_bfs(inst_, true, *impl_);
    ran_ = true;
  }
  return result_;
}

std::vector<Transition> Explorer::trace(int property, int pair) const {
  if (!ran_ || result_.inconclusive) return {};
  std::uint32_t w = impl_->witness[property][pair];
  if (w == kNoState) return {};
  std::vector<std::uint8_t> idxs;
  for (std::uint32_t s = w; s != 0; s = impl_->meta[s].parent)
    idxs.push_back(impl_->meta[s].trans_idx);
  std::reverse(idxs.begin(), idxs.end());
  std::vector<Transition> out;
  GlobalState gs = initial_state(inst_);
  for (std::uint8_t k : idxs) {
    std::vector<Transition> ts = enabled_transitions(gs, inst_);
    Transition t = ts[k];
    gs = apply_transition(gs, inst_, t);
    out.push_back(t);
  }
  return out;
}

std::vector<GlobalState> Explorer::replay(
    const std::vector<Transition>& tr) const {
  std::vector<GlobalState> states;
  GlobalState gs = initial_state(inst_);
  states.push_back(gs);
  for (const Transition& step : tr) {
    bool enabled = false;
    for (const Transition& cand : enabled_transitions(gs, inst_)) {
      if (cand.kind == step.kind && cand.actor == step.actor &&
          cand.recipient == step.recipient &&
          cand.inject_idx == step.inject_idx &&
          cand.from_queue == step.from_queue && cand.msg == step.msg) {
        enabled = true;
        break;
      }
    }
    if (!enabled) throw std::logic_error("trace step not enabled");
    Transition t = step;
    gs = apply_transition(gs, inst_, t);
    states.push_back(gs);
  }
  return states;
}

ExploreResult explore(const Instance& inst) {
  Explorer e(inst);
  return e.run();
}

ExploreResult explore_unprioritized(const Instance& inst,
                                    std::uint32_t state_limit) {
  Instance copy = inst;
  copy.opts.state_limit = state_limit;
  SearchGraph g;
  return run_bfs(copy, false, g);
}

}  // namespace aodvmc
