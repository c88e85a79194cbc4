// Transition-system and exploration tests: canonical state keys, internal
// priority, synchronization atomicity, the topology-change guard, property
// checking, and the three-node route-discovery-failure regression with its
// minimal counterexample trace.

#include <doctest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "aodvmc/enumerate.hpp"
#include "aodvmc/explorer.hpp"
#include "aodvmc/node.hpp"
#include "aodvmc/topology.hpp"

using namespace aodvmc;

namespace {

Topology line3() { return Topology::from_edges(3, {{1, 2}, {2, 3}}); }
Topology triangle() {
  return Topology::from_edges(3, {{1, 2}, {1, 3}, {2, 3}});
}

Message rreq(std::uint8_t hops, std::uint8_t rid, NodeId dip, Sqn dsn,
             NodeId oip, Sqn osn, NodeId sip) {
  Message m;
  m.type = MsgType::kRreq;
  m.hops = hops;
  m.rreqid = rid;
  m.dip = dip;
  m.dsn = dsn;
  m.oip = oip;
  m.osn = osn;
  m.sip = sip;
  return m;
}

// A random state whose encoded fields are filled arbitrarily; `tag` is
// stamped into full-width counters so distinct tags give distinct states.
GlobalState random_state(std::mt19937& rng, std::uint32_t tag) {
  std::uniform_int_distribution<int> byte(0, 5);
  GlobalState gs;
  gs.n = static_cast<std::uint8_t>(3 + byte(rng) % 3);
  gs.tester = static_cast<TesterLoc>(byte(rng) % 3);
  gs.change_applied = static_cast<std::uint8_t>(byte(rng) % 2);
  gs.first_req_arrived = static_cast<std::uint8_t>(byte(rng) % 2);
  for (NodeId i = 1; i <= gs.n; ++i) {
    NodeState& nd = gs.node[i];
    nd.ip = i;
    nd.sn = static_cast<Sqn>(byte(rng));
    nd.rreq_counter = static_cast<std::uint8_t>(byte(rng));
    for (NodeId d = 1; d <= gs.n; ++d) {
      nd.rt[d].dsn = static_cast<Sqn>(byte(rng));
      nd.rt[d].valid = static_cast<std::uint8_t>(byte(rng) % 2);
      nd.rt[d].hops = static_cast<std::uint8_t>(byte(rng));
      nd.rt[d].nhop = static_cast<NodeId>(byte(rng));
      nd.queues[d] = static_cast<std::uint8_t>(byte(rng));
    }
    int seen = byte(rng) % 3;
    for (int s = 0; s < seen; ++s)
      nd.rreqs.push_back(SeenReq{static_cast<NodeId>(1 + byte(rng)),
                                 static_cast<std::uint8_t>(byte(rng))});
    int buffered = byte(rng) % 3;
    for (int b = 0; b < buffered; ++b) {
      Message m = rreq(static_cast<std::uint8_t>(byte(rng)),
                       static_cast<std::uint8_t>(byte(rng)),
                       static_cast<NodeId>(1 + byte(rng) % gs.n),
                       static_cast<Sqn>(byte(rng)),
                       static_cast<NodeId>(1 + byte(rng) % gs.n),
                       static_cast<Sqn>(byte(rng)),
                       static_cast<NodeId>(1 + byte(rng) % gs.n));
      if (byte(rng) % 4 == 0) {
        m.type = MsgType::kRerr;
        m.rerr.push_back(ErrDest{static_cast<NodeId>(1 + byte(rng) % gs.n),
                                 static_cast<Sqn>(byte(rng))});
      }
      nd.msgbuf.push_back(m);
    }
  }
  gs.node[1].sn = static_cast<Sqn>(tag & 0xff);
  gs.node[1].rreq_counter = static_cast<std::uint8_t>((tag >> 8) & 0xff);
  gs.node[2].sn = static_cast<Sqn>((tag >> 16) & 0xff);
  return gs;
}

// Counts the steps of `tr` satisfying a predicate.
template <typename Pred>
int count_steps(const std::vector<Transition>& tr, Pred p) {
  int c = 0;
  for (const Transition& t : tr)
    if (p(t)) ++c;
  return c;
}

}  // namespace

TEST_CASE("initial_state: fresh nodes, tester at Init, change unapplied") {
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 1);
  GlobalState gs = initial_state(inst);
  CHECK(gs.n == 3);
  CHECK(gs.tester == TesterLoc::kInit);
  CHECK(gs.change_applied == 0);
  CHECK(gs.first_req_arrived == 0);
  for (NodeId i = 1; i <= 3; ++i) {
    CHECK(gs.node[i].ip == i);
    CHECK(gs.node[i].sn == 1);
    CHECK(gs.node[i].rreq_counter == 0);
    CHECK(gs.node[i].rreqs.empty());
    CHECK(gs.node[i].msgbuf.empty());
    for (NodeId d = 1; d <= 3; ++d) {
      CHECK(gs.node[i].rt[d] == RouteEntry{});
      CHECK(gs.node[i].queues[d] == 0);
    }
  }

  Topology five = Topology::from_edges(
      5, {{1, 2}, {2, 3}, {1, 4}, {4, 5}, {5, 3}});
  Instance big = make_static_instance(ModelVariant::kV2, five, 1, 3);
  GlobalState bgs = initial_state(big);
  CHECK(bgs.n == 5);
  CHECK(bgs.node[5].ip == 5);

  std::vector<ChangePair> pairs = {
      ChangePair{Topology::from_edges(5, {{1, 2}, {2, 3}}),
                 Topology::from_edges(5, {{1, 2}, {2, 3}, {1, 3}}), 1, 3}};
  Instance dyn = make_change_instance(ModelVariant::kV1,
                                      InstanceClass::kAddLink, pairs[0], 0, 2);
  CHECK(initial_state(dyn).change_applied == 0);
  CHECK(dyn.is_dynamic());
}

TEST_CASE("instance construction: start/post sides and the property bound") {
  Topology pre = Topology::from_edges(5, {{1, 2}, {2, 3}});
  Topology post = Topology::from_edges(5, {{1, 2}, {2, 3}, {1, 3}});
  ChangePair p{pre, post, 1, 3};

  Instance add = make_change_instance(ModelVariant::kV1,
                                      InstanceClass::kAddLink, p, 7, 2);
  CHECK(add.start == pre);
  CHECK(add.post == post);
  CHECK(add.change.kind == ChangeKind::kAddLink);
  CHECK(add.topo_id == 7);
  // Pointwise max of pre (d(A,C)=2) and post (d(A,C)=1) distances.
  CHECK(add.bound[1][3] == 2);
  CHECK(add.bound[1][2] == 1);

  Instance rem = make_change_instance(ModelVariant::kV4,
                                      InstanceClass::kRemoveLink, p, 7, 2);
  CHECK(rem.start == post);
  CHECK(rem.post == pre);
  CHECK(rem.change.kind == ChangeKind::kRemoveLink);
  CHECK(rem.bound[1][3] == 2);

  Instance st = make_static_instance(ModelVariant::kV1, line3(), 0, 2);
  CHECK(st.start == st.post);
  CHECK_FALSE(st.is_dynamic());
  CHECK(st.bound[2][1] == 1);
  CHECK(st.bound[3][1] == 2);
}

TEST_CASE("state_key: equal states equal keys, any field difference splits") {
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 1);
  GlobalState gs = initial_state(inst);
  GlobalState copy = gs;
  CHECK(state_key(gs) == state_key(copy));

  GlobalState buf = gs;
  Message m = rreq(0, 1, 1, 0, 2, 2, 2);
  REQUIRE(enqueue_message(buf.node[1], m));
  CHECK(state_key(buf) != state_key(gs));

  GlobalState buf2 = buf;
  buf2.node[1].msgbuf[0].osn = 3;  // one buffered-message field
  CHECK(state_key(buf2) != state_key(buf));

  GlobalState flag = gs;
  flag.first_req_arrived = 1;
  CHECK(state_key(flag) != state_key(gs));
}

TEST_CASE("state_key: no collisions across 100000 random distinct states") {
  std::mt19937 rng(20260819);
  std::set<std::string> keys;
  const int kCount = 100000;
  for (int i = 0; i < kCount; ++i) {
    GlobalState gs = random_state(rng, static_cast<std::uint32_t>(i));
    keys.insert(state_key(gs));
  }
  // The tag stamp makes every generated state distinct, so every key must
  // be distinct too.
  CHECK(keys.size() == static_cast<std::size_t>(kCount));
}

TEST_CASE("state_key: single random mutations always change the key") {
  std::mt19937 rng(97);
  std::uniform_int_distribution<int> pick(0, 7);
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    GlobalState gs = random_state(rng, static_cast<std::uint32_t>(i));
    GlobalState mut = gs;
    switch (pick(rng)) {
      case 0: mut.tester = static_cast<TesterLoc>(
                  (static_cast<int>(mut.tester) + 1) % 3);
        break;
      case 1: mut.change_applied ^= 1; break;
      case 2: mut.node[1].sn ^= 1; break;
      case 3: mut.node[2].rt[1].hops ^= 1; break;
      case 4: mut.node[3].queues[2] ^= 1; break;
      case 5: mut.node[1].rt[3].valid ^= 1; break;
      case 6:
        if (mut.node[2].msgbuf.empty()) continue;
        mut.node[2].msgbuf[0].hops ^= 1;
        break;
      default:
        if (mut.node[1].rreqs.empty()) continue;
        mut.node[1].rreqs[0].rreqid ^= 1;
        break;
    }
    ++checked;
    CHECK(state_key(mut) != state_key(gs));
  }
  CHECK(checked > 15000);
}

TEST_CASE("enabled_transitions: internal steps suppress synchronizations") {
  // B must discard an already-seen request while A could broadcast a fresh
  // forward: only B's internal step may be returned.
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 1);
  GlobalState gs = initial_state(inst);
  Message fresh = rreq(0, 1, 3, 0, 2, 2, 2);  // B's request for C, at A
  Message dup = rreq(0, 1, 1, 0, 3, 2, 3);    // C's request for A, at B
  REQUIRE(enqueue_message(gs.node[1], fresh));
  REQUIRE(enqueue_message(gs.node[2], dup));
  gs.node[2].rreq_mark_seen(3, 1);

  std::vector<Transition> ts = enabled_transitions(gs, inst);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].kind == TransKind::kInternal);
  CHECK(ts[0].actor == 2);

  // Without the duplicate, A's forward and B's forward plus the injection
  // are all offered, buffer-head steps first in node order.
  GlobalState gs2 = initial_state(inst);
  REQUIRE(enqueue_message(gs2.node[1], fresh));
  std::vector<Transition> ts2 = enabled_transitions(gs2, inst);
  REQUIRE(ts2.size() == 2);
  CHECK(ts2[0].kind == TransKind::kBroadcast);
  CHECK(ts2[0].actor == 1);
  CHECK(ts2[1].kind == TransKind::kInject);
  CHECK(ts2[1].inject_idx == 0);
}

TEST_CASE("apply_transition: injection queues the packet and floods") {
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 1);
  GlobalState gs = initial_state(inst);
  std::vector<Transition> ts = enabled_transitions(gs, inst);
  REQUIRE(ts.size() == 1);
  REQUIRE(ts[0].kind == TransKind::kInject);
  CHECK(ts[0].actor == 1);      // S1 first injects at A
  CHECK(ts[0].recipient == 2);  // towards B

  Transition t = ts[0];
  GlobalState next = apply_transition(gs, inst, t);
  CHECK(next.tester == TesterLoc::kSent1);
  CHECK(next.node[1].queues[2] == 1);
  CHECK(next.node[1].sn == 2);  // discovery bumped the originator's number
  CHECK(t.has_emission);
  CHECK(t.emitted.type == MsgType::kRreq);
  REQUIRE(t.receivers.size() == 1);  // line: A only reaches B
  CHECK(t.receivers[0] == 2);
  REQUIRE(next.node[2].msgbuf.size() == 1);
  CHECK(next.node[2].msgbuf[0] == t.emitted);
  CHECK(next.node[3].msgbuf.empty());

  // Second injection is enabled from Sent1 and moves the tester to Final.
  std::vector<Transition> ts2 = enabled_transitions(next, inst);
  bool has_second = false;
  for (const Transition& c : ts2)
    if (c.kind == TransKind::kInject && c.inject_idx == 1) has_second = true;
  CHECK(has_second);
}

TEST_CASE("apply_transition: broadcast delivers to exactly the connected") {
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 2);
  GlobalState gs = initial_state(inst);
  // B forwards a fresh request from C: line neighbors A and C receive.
  Message fresh = rreq(0, 1, 1, 0, 3, 2, 3);
  REQUIRE(enqueue_message(gs.node[2], fresh));

  std::vector<Transition> ts = enabled_transitions(gs, inst);
  REQUIRE(!ts.empty());
  REQUIRE(ts[0].kind == TransKind::kBroadcast);
  Transition t = ts[0];
  GlobalState next = apply_transition(gs, inst, t);
  REQUIRE(t.receivers.size() == 2);
  CHECK(t.receivers[0] == 1);
  CHECK(t.receivers[1] == 3);
  CHECK(next.node[1].msgbuf.size() == 1);
  CHECK(next.node[3].msgbuf.size() == 1);
  CHECK(next.node[2].msgbuf.empty());  // head consumed

  // Frame: only sender and receivers may differ.
  CHECK(!(next.node[2] == gs.node[2]));
  GlobalState frame = next;
  frame.node[1] = gs.node[1];
  frame.node[3] = gs.node[3];
  frame.node[2] = gs.node[2];
  CHECK(state_key(frame) == state_key(gs));
}

TEST_CASE("apply_transition: FIFO heads only, tail order preserved") {
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 1);
  GlobalState gs = initial_state(inst);
  Message first = rreq(0, 1, 2, 0, 3, 2, 3);   // addressed to B: answered
  Message second = rreq(0, 2, 1, 0, 3, 3, 3);  // C's next discovery, for A
  REQUIRE(enqueue_message(gs.node[2], first));
  REQUIRE(enqueue_message(gs.node[2], second));

  std::vector<Transition> ts = enabled_transitions(gs, inst);
  REQUIRE(ts.size() >= 1);
  REQUIRE(ts[0].actor == 2);
  CHECK(ts[0].msg == first);
  Transition t = ts[0];
  GlobalState next = apply_transition(gs, inst, t);
  REQUIRE(next.node[2].msgbuf.size() == 1);
  CHECK(next.node[2].msgbuf[0] == second);
}

TEST_CASE("apply_transition: blocked unicast invalidates and floods RERR") {
  // C holds a stale route to A over a missing link; forwarding a reply
  // towards A fails, the route is invalidated, and B hears the error.
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 2);
  GlobalState gs = initial_state(inst);
  gs.tester = TesterLoc::kFinal;  // keep the tester's steps out of the way
  gs.node[3].rt[1] = RouteEntry{1, 1, 1, 1};
  Message rep;
  rep.type = MsgType::kRrep;
  rep.hops = 0;
  rep.rreqid = 1;
  rep.dip = 2;
  rep.dsn = 1;
  rep.oip = 1;
  rep.osn = 1;
  rep.sip = 2;
  REQUIRE(enqueue_message(gs.node[3], rep));
  gs.node[3].rreq_mark_seen(1, 1);

  std::vector<Transition> ts = enabled_transitions(gs, inst);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].kind == TransKind::kUnicastFail);
  CHECK(ts[0].actor == 3);
  CHECK(ts[0].recipient == 1);

  Transition t = ts[0];
  GlobalState next = apply_transition(gs, inst, t);
  CHECK(next.node[3].rt[1].valid == 0);
  CHECK(next.node[3].rt[1].dsn == 2);  // bumped on invalidation
  CHECK(t.has_emission);
  CHECK(t.emitted.type == MsgType::kRerr);
  REQUIRE(t.receivers.size() == 1);
  CHECK(t.receivers[0] == 2);
  REQUIRE(next.node[2].msgbuf.size() == 1);
  CHECK(next.node[2].msgbuf[0].type == MsgType::kRerr);

  // Variant 4 additionally forgets the answered request on a failed reply.
  Instance v4 = make_static_instance(ModelVariant::kV4, line3(), 0, 2);
  Transition t4 = ts[0];
  GlobalState next4 = apply_transition(gs, v4, t4);
  CHECK_FALSE(next4.node[3].rreq_seen(1, 1));
  CHECK(next.node[3].rreq_seen(1, 1));  // variant 1 keeps it
}

TEST_CASE("apply_transition: queued data packet travels and is delivered") {
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 2);
  GlobalState gs = initial_state(inst);
  gs.node[2].queues[1] = 1;
  gs.node[2].rt[1] = RouteEntry{1, 1, 1, 1};

  std::vector<Transition> ts = enabled_transitions(gs, inst);
  bool found = false;
  for (const Transition& c : ts) {
    if (c.from_queue) {
      found = true;
      CHECK(c.kind == TransKind::kUnicast);
      CHECK(c.actor == 2);
      CHECK(c.recipient == 1);
      CHECK(c.msg.type == MsgType::kPkt);
      Transition t = c;
      GlobalState next = apply_transition(gs, inst, t);
      CHECK(next.node[2].queues[1] == 0);
      REQUIRE(next.node[1].msgbuf.size() == 1);
      CHECK(next.node[1].msgbuf[0].type == MsgType::kPkt);

      // The destination consumes it as an internal Deliver step.
      std::vector<Transition> ts2 = enabled_transitions(next, inst);
      REQUIRE(ts2.size() == 1);
      CHECK(ts2[0].kind == TransKind::kInternal);
      CHECK(ts2[0].actor == 1);
      Transition d = ts2[0];
      GlobalState last = apply_transition(next, inst, d);
      CHECK(d.outcome.kind == OutcomeKind::kDeliver);
      CHECK(d.outcome.delivered == 1);
      CHECK(last.node[1].msgbuf.empty());
    }
  }
  CHECK(found);
}

TEST_CASE("change guard: armed by the first request reaching its target") {
  Topology pre = Topology::from_edges(5, {{1, 2}, {2, 3}});
  Topology post = Topology::from_edges(5, {{1, 2}, {2, 3}, {1, 3}});
  ChangePair p{pre, post, 1, 3};
  // S2 injects (B, A) first: B's request reaches A in one hop.
  Instance inst = make_change_instance(ModelVariant::kV1,
                                       InstanceClass::kAddLink, p, 0, 2);

  GlobalState gs = initial_state(inst);
  std::vector<Transition> ts = enabled_transitions(gs, inst);
  REQUIRE(ts.size() == 1);  // no change offered before the request arrives
  REQUIRE(ts[0].kind == TransKind::kInject);

  Transition t = ts[0];
  GlobalState after = apply_transition(gs, inst, t);
  CHECK(after.first_req_arrived == 1);
  CHECK(after.change_applied == 0);

  bool change_offered = false;
  for (const Transition& c : enabled_transitions(after, inst))
    if (c.kind == TransKind::kChange) change_offered = true;
  CHECK(change_offered);

  // The change applies the edge exactly once.
  Transition ch;
  ch.kind = TransKind::kChange;
  ch.actor = 1;
  ch.recipient = 3;
  GlobalState changed = apply_transition(after, inst, ch);
  CHECK(changed.change_applied == 1);
  for (const Transition& c : enabled_transitions(changed, inst))
    CHECK(c.kind != TransKind::kChange);
}

TEST_CASE("change guard: second discovery's request does not arm it") {
  Topology pre = Topology::from_edges(5, {{1, 2}, {2, 3}});
  Topology post = Topology::from_edges(5, {{1, 2}, {2, 3}, {1, 3}});
  ChangePair p{pre, post, 1, 3};
  // S1 injects (A, B) first: the arming request is A's, addressed to B.
  Instance inst = make_change_instance(ModelVariant::kV1,
                                       InstanceClass::kAddLink, p, 0, 1);
  GlobalState gs = initial_state(inst);
  // Hand-deliver a RREQ of the *second* scenario pair (A, C) to C via a
  // forwarding broadcast from B: the guard must stay down even though a
  // request reached some destination.
  Message other = rreq(0, 1, 3, 0, 1, 2, 1);
  GlobalState staged = gs;
  REQUIRE(enqueue_message(staged.node[2], other));
  std::vector<Transition> ts = enabled_transitions(staged, inst);
  REQUIRE(!ts.empty());
  REQUIRE(ts[0].kind == TransKind::kBroadcast);
  Transition t = ts[0];
  GlobalState after = apply_transition(staged, inst, t);
  bool delivered_to_c = false;
  for (NodeId r : t.receivers) delivered_to_c |= (r == 3);
  CHECK(delivered_to_c);
  CHECK(after.first_req_arrived == 0);
}

TEST_CASE("force-change: an armed change preempts every other step") {
  Topology pre = Topology::from_edges(5, {{1, 2}, {2, 3}});
  Topology post = Topology::from_edges(5, {{1, 2}, {2, 3}, {1, 3}});
  ChangePair p{pre, post, 1, 3};
  Instance inst = make_change_instance(ModelVariant::kV1,
                                       InstanceClass::kAddLink, p, 0, 2);
  inst.opts.force_change = true;

  GlobalState gs = initial_state(inst);
  std::vector<Transition> ts = enabled_transitions(gs, inst);
  REQUIRE(ts.size() == 1);
  REQUIRE(ts[0].kind == TransKind::kInject);
  Transition t = ts[0];
  GlobalState after = apply_transition(gs, inst, t);
  REQUIRE(after.first_req_arrived == 1);

  // Internal steps exist (A holds B's request addressed to itself ->
  // unicast; C... craft a guaranteed internal instead), yet the forced
  // change is the sole successor.
  GlobalState staged = after;
  Message dup = rreq(1, 1, 1, 0, 2, 2, 3);
  REQUIRE(enqueue_message(staged.node[2], dup));
  staged.node[2].rreq_mark_seen(2, 1);
  std::vector<Transition> forced = enabled_transitions(staged, inst);
  REQUIRE(forced.size() == 1);
  CHECK(forced[0].kind == TransKind::kChange);

  GlobalState changed = apply_transition(staged, inst, forced[0]);
  CHECK(changed.change_applied == 1);
  // Once applied, normal priority resumes (the duplicate discard is due).
  std::vector<Transition> resumed = enabled_transitions(changed, inst);
  REQUIRE(!resumed.empty());
  CHECK(resumed[0].kind == TransKind::kInternal);
}

TEST_CASE("check_invariants: guards and bound comparisons") {
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 2);
  GlobalState gs = initial_state(inst);

  // No routes anywhere: optimality holds vacuously, presence not checked
  // before Final.
  PropertyCheck pc = check_invariants(gs, inst, inst.bound);
  for (int prop = 0; prop < 3; ++prop)
    for (int pair = 0; pair < 2; ++pair) CHECK_FALSE(pc.violated[prop][pair]);

  // Tester Final with empty buffers and no route: property 1 fires for
  // both pairs (S2 pairs are (B,A) and (C,A)).
  gs.tester = TesterLoc::kFinal;
  pc = check_invariants(gs, inst, inst.bound);
  CHECK(pc.violated[0][0]);
  CHECK(pc.violated[0][1]);
  CHECK_FALSE(pc.violated[1][0]);
  CHECK_FALSE(pc.violated[2][0]);

  // A pending message suspends the completion guard.
  GlobalState busy = gs;
  REQUIRE(enqueue_message(busy.node[3], rreq(0, 1, 1, 0, 3, 2, 3)));
  pc = check_invariants(busy, inst, inst.bound);
  CHECK_FALSE(pc.violated[0][0]);
  CHECK_FALSE(pc.violated[0][1]);

  // Valid route at the exact bound: fine; one hop over: properties 2 and 3.
  gs.node[2].rt[1] = RouteEntry{1, 1, 1, 1};  // d(B,A)=1
  gs.node[3].rt[1] = RouteEntry{1, 1, 2, 2};  // d(C,A)=2
  pc = check_invariants(gs, inst, inst.bound);
  for (int prop = 0; prop < 3; ++prop)
    for (int pair = 0; pair < 2; ++pair) CHECK_FALSE(pc.violated[prop][pair]);

  gs.node[3].rt[1].hops = 3;
  pc = check_invariants(gs, inst, inst.bound);
  CHECK(pc.violated[1][1]);
  CHECK(pc.violated[2][1]);
  CHECK_FALSE(pc.violated[0][1]);  // a route exists, however long

  // Property 3 monitors every state, Final or not.
  gs.tester = TesterLoc::kSent1;
  pc = check_invariants(gs, inst, inst.bound);
  CHECK(pc.violated[2][1]);
  CHECK_FALSE(pc.violated[1][1]);

  // An invalidated over-bound route does not violate the optimality checks.
  gs.node[3].rt[1].valid = 0;
  pc = check_invariants(gs, inst, inst.bound);
  CHECK_FALSE(pc.violated[2][1]);
}

TEST_CASE("route discovery failure on the three-node line, scenario S2") {
  // Variant 1 on A-B-C with both B and C seeking A: C's reply is relayed
  // through B, which installs nothing for C and drops the reply, so C can
  // end without any route to A.
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 2);
  Explorer ex(inst);
  ExploreResult res = ex.run();
  REQUIRE_FALSE(res.inconclusive);
  CHECK(res.verdicts.v[0][0] == Verdict::kHolds);     // B does find A
  CHECK(res.verdicts.v[0][1] == Verdict::kViolated);  // C does not
  CHECK(res.verdicts.v[1][0] == Verdict::kHolds);
  CHECK(res.verdicts.v[1][1] == Verdict::kHolds);
  CHECK(res.verdicts.v[2][0] == Verdict::kHolds);
  CHECK(res.verdicts.v[2][1] == Verdict::kHolds);

  // The minimal counterexample is the ten-step failed-discovery pattern.
  std::vector<Transition> tr = ex.trace(0, 1);
  REQUIRE(tr.size() == 10);

  // Both originators issue their request broadcasts...
  CHECK(count_steps(tr, [](const Transition& t) {
          return t.kind == TransKind::kInject && t.has_emission;
        }) == 2);
  // ...each forwards the other's request...
  CHECK(count_steps(tr, [](const Transition& t) {
          return t.kind == TransKind::kBroadcast &&
                 t.emitted.type == MsgType::kRreq;
        }) == 2);
  // ...and each discards the copy of its own request coming back.
  CHECK(count_steps(tr, [](const Transition& t) {
          return t.kind == TransKind::kInternal &&
                 t.msg.type == MsgType::kRreq && t.msg.oip == t.actor;
        }) == 2);
  // A answers both requests with unicast replies to B.
  CHECK(count_steps(tr, [](const Transition& t) {
          return t.kind == TransKind::kUnicast && t.actor == 1 &&
                 t.emitted.type == MsgType::kRrep && t.recipient == 2;
        }) == 2);
  // B consumes the reply to its own request (installing its route) and
  // discards the reply meant for C: the defect under study.
  CHECK(count_steps(tr, [](const Transition& t) {
          return t.kind == TransKind::kInternal &&
                 t.msg.type == MsgType::kRrep && t.actor == 2 &&
                 t.msg.oip == 2;
        }) == 1);
  CHECK(count_steps(tr, [](const Transition& t) {
          return t.kind == TransKind::kInternal &&
                 t.msg.type == MsgType::kRrep && t.actor == 2 &&
                 t.msg.oip == 3;
        }) == 1);

  // Exact minimal run, pinned: injection at B; C relays B's request; B
  // drops the returning copy; injection at C; A answers B; B relays C's
  // request; B installs its own route; C drops the returning copy; A
  // answers C; B drops that reply unused.
  const TransKind kKinds[10] = {
      TransKind::kInject,   TransKind::kBroadcast, TransKind::kInternal,
      TransKind::kInject,   TransKind::kUnicast,   TransKind::kBroadcast,
      TransKind::kInternal, TransKind::kInternal,  TransKind::kUnicast,
      TransKind::kInternal};
  const NodeId kActors[10] = {2, 3, 2, 3, 1, 2, 2, 3, 1, 2};
  for (int i = 0; i < 10; ++i) {
    CHECK(tr[static_cast<std::size_t>(i)].kind == kKinds[i]);
    CHECK(tr[static_cast<std::size_t>(i)].actor == kActors[i]);
  }
  CHECK(tr[4].emitted.oip == 2);  // first reply answers B's discovery
  CHECK(tr[8].emitted.oip == 3);  // second reply answers C's
  CHECK(tr[9].msg.type == MsgType::kRrep);

  // Replaying the trace lands exactly on a violating completion state.
  std::vector<GlobalState> states = ex.replay(tr);
  REQUIRE(states.size() == 11);
  const GlobalState& last = states.back();
  CHECK(last.tester == TesterLoc::kFinal);
  for (NodeId i = 1; i <= 3; ++i) CHECK(last.node[i].msgbuf.empty());
  CHECK(last.node[3].rt[1].nhop == kNullNode);
  CHECK(last.node[2].rt[1].nhop == 1);

  // Every later variant repairs this instance.
  for (int v = 2; v <= 4; ++v) {
    Instance fix = make_static_instance(variant_from_int(v), line3(), 0, 2);
    ExploreResult r = explore(fix);
    REQUIRE_FALSE(r.inconclusive);
    CHECK(r.verdicts.all_hold());
  }
}

TEST_CASE("complete triangle, scenario S1: variant 1 satisfies everything") {
  Instance inst = make_static_instance(ModelVariant::kV1, triangle(), 0, 1);
  ExploreResult res = explore(inst);
  REQUIRE_FALSE(res.inconclusive);
  CHECK(res.verdicts.all_hold());

  ExploreResult ref = explore_unprioritized(inst, 200000);
  REQUIRE_FALSE(ref.inconclusive);
  CHECK(ref.verdicts.all_hold());
  // Priority shrinks the space, never below the verdicts.
  CHECK(res.states <= ref.states);
}

TEST_CASE("prioritized and reference verdicts agree on small instances") {
  std::vector<Topology> topos = {line3(), triangle(),
                                 Topology::from_edges(4, {{1, 2}, {2, 3},
                                                          {3, 4}, {4, 1}})};
  for (const Topology& t : topos) {
    for (int sc = 1; sc <= 4; ++sc) {
      for (int v : {1, 2}) {
        Instance inst =
            make_static_instance(variant_from_int(v), t, 0, sc);
        ExploreResult fast = explore(inst);
        ExploreResult ref = explore_unprioritized(inst, 400000);
        REQUIRE_FALSE(fast.inconclusive);
        REQUIRE_FALSE(ref.inconclusive);
        for (int prop = 0; prop < 3; ++prop)
          for (int pair = 0; pair < 2; ++pair)
            CHECK(fast.verdicts.v[prop][pair] == ref.verdicts.v[prop][pair]);
      }
    }
  }
}

TEST_CASE("verdict implication: optimality always implies it at completion") {
  for (int sc = 1; sc <= 4; ++sc) {
    for (int v = 1; v <= 4; ++v) {
      Instance inst =
          make_static_instance(variant_from_int(v), line3(), 0, sc);
      ExploreResult res = explore(inst);
      REQUIRE_FALSE(res.inconclusive);
      for (int pair = 0; pair < 2; ++pair)
        if (res.verdicts.v[2][pair] == Verdict::kHolds)
          CHECK(res.verdicts.v[1][pair] == Verdict::kHolds);
    }
  }
}

TEST_CASE("exploration is deterministic under shuffled expansion") {
  Instance base = make_static_instance(ModelVariant::kV1, line3(), 0, 2);
  ExploreResult first = explore(base);
  for (std::uint64_t seed : {1ull, 42ull, 20260819ull}) {
    Instance inst = base;
    inst.opts.shuffle_seed = seed;
    ExploreResult res = explore(inst);
    CHECK(res.states == first.states);
    CHECK_FALSE(res.inconclusive);
    for (int prop = 0; prop < 3; ++prop)
      for (int pair = 0; pair < 2; ++pair)
        CHECK(res.verdicts.v[prop][pair] == first.verdicts.v[prop][pair]);
  }
}

TEST_CASE("state limit: capped run is inconclusive with unknown verdicts") {
  Instance inst = make_static_instance(ModelVariant::kV1, line3(), 0, 2);
  inst.opts.state_limit = 5;
  ExploreResult res = explore(inst);
  CHECK(res.inconclusive);
  CHECK(res.reason == "state-limit");
  CHECK(res.states == 5);
  for (int prop = 0; prop < 3; ++prop)
    for (int pair = 0; pair < 2; ++pair)
      CHECK(res.verdicts.v[prop][pair] == Verdict::kUnknown);
  CHECK(res.verdicts.any_unknown());
  CHECK_FALSE(res.verdicts.all_hold());

  Explorer capped(inst);
  capped.run();
  CHECK(capped.trace(0, 1).empty());
}

TEST_CASE("broadcast frame invariant along explored prefixes") {
  // Walk a deterministic pseudo-random path; at every broadcast check that
  // non-participants are bit-identical before and after.
  Topology t = Topology::from_edges(4, {{1, 2}, {2, 3}, {3, 4}});
  Instance inst = make_static_instance(ModelVariant::kV2, t, 0, 3);
  std::mt19937 rng(7);
  for (int walk = 0; walk < 40; ++walk) {
    GlobalState gs = initial_state(inst);
    for (int step = 0; step < 60; ++step) {
      std::vector<Transition> ts = enabled_transitions(gs, inst);
      if (ts.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, ts.size() - 1);
      Transition tr = ts[pick(rng)];
      GlobalState next = apply_transition(gs, inst, tr);
      if (tr.kind == TransKind::kBroadcast) {
        for (NodeId i = 1; i <= gs.n; ++i) {
          bool participant = i == tr.actor;
          for (NodeId r : tr.receivers) participant |= (r == i);
          if (!participant) CHECK(next.node[i] == gs.node[i]);
        }
      }
      gs = next;
    }
  }
}

TEST_CASE("dynamic exploration: add-link and remove-link round trip") {
  Topology pre = Topology::from_edges(5, {{1, 2}, {2, 3}});
  Topology post = Topology::from_edges(5, {{1, 2}, {2, 3}, {1, 3}});
  ChangePair p{pre, post, 1, 3};

  for (int sc = 1; sc <= 4; ++sc) {
    Instance add = make_change_instance(ModelVariant::kV2,
                                        InstanceClass::kAddLink, p, 0, sc);
    ExploreResult ra = explore(add);
    REQUIRE_FALSE(ra.inconclusive);
    CHECK(ra.states > 0);

    Instance rem = make_change_instance(ModelVariant::kV2,
                                        InstanceClass::kRemoveLink, p, 0, sc);
    ExploreResult rr = explore(rem);
    REQUIRE_FALSE(rr.inconclusive);
    CHECK(rr.states > 0);
    for (int pair = 0; pair < 2; ++pair)
      if (rr.verdicts.v[2][pair] == Verdict::kHolds)
        CHECK(rr.verdicts.v[1][pair] == Verdict::kHolds);
  }

  // Forcing the change keeps the result conclusive and deterministic.
  Instance forced = make_change_instance(ModelVariant::kV1,
                                         InstanceClass::kRemoveLink, p, 0, 2);
  forced.opts.force_change = true;
  ExploreResult rf = explore(forced);
  REQUIRE_FALSE(rf.inconclusive);
  ExploreResult rf2 = explore(forced);
  CHECK(rf.states == rf2.states);
}
