#include "aodvmc/node.hpp"

#include <algorithm>
#include <cassert>

namespace aodvmc {

namespace {

// In-place update that also protects the null slot 0 and the node's own
// slot (a node never stores a route to itself).
bool update_route(NodeState& n, NodeId dip, Sqn dsn, std::uint8_t hops,
                  NodeId nhop) {
  if (dip == 0 || dip == n.ip) return false;
  auto [rt, updated] = rt_update(n.rt, dip, dsn, hops, nhop);
  n.rt = rt;
  return updated;
}

Message make_rrep(std::uint8_t hops, std::uint8_t rreqid, NodeId dip, Sqn dsn,
                  NodeId oip, NodeId sip) {
  Message m;
  m.type = MsgType::kRrep;
  m.hops = hops;
  m.rreqid = rreqid;
  m.dip = dip;
  m.dsn = dsn;
  m.oip = oip;
  m.sip = sip;
  return m;
}

LocalOutcome silent(NodeState n) {
  LocalOutcome out;
  out.node = std::move(n);
  out.kind = OutcomeKind::kSilent;
  return out;
}

LocalOutcome broadcast(NodeState n, Message m) {
  LocalOutcome out;
  out.node = std::move(n);
  out.kind = OutcomeKind::kBroadcast;
  out.msg = m;
  return out;
}

LocalOutcome unicast(NodeState n, NodeId to, Message m) {
  assert(to != kNullNode);
  LocalOutcome out;
  out.node = std::move(n);
  out.kind = OutcomeKind::kUnicast;
  out.recipient = to;
  out.msg = m;
  return out;
}

}  // namespace

std::pair<RoutingTable, bool> rt_update(const RoutingTable& rt, NodeId dip,
                                        Sqn dsn, std::uint8_t hops,
                                        NodeId nhop) {
  const RouteEntry& cur = rt[dip];
  bool replace = cur.nhop == kNullNode                      // (a) no route
                 || dsn == 0                                // (d) unknown
                 || dsn > cur.dsn                           // (b) fresher
                 || (dsn == cur.dsn &&
                     (hops < cur.hops || cur.valid == 0));  // (c) better
  if (!replace) return {rt, false};
  RoutingTable out = rt;
  RouteEntry& e = out[dip];
  e.dsn = (dsn == 0) ? cur.dsn : dsn;  // unknown keeps the stored number
  e.valid = 1;
  e.hops = hops;
  e.nhop = nhop;
  return {out, true};
}

std::pair<NodeState, Message> initiate_route_discovery(const NodeState& node,
                                                       NodeId dip) {
  NodeState n = node;
  n.sn = checked_inc(n.sn, "own sequence number");
  n.rreq_counter = checked_inc(n.rreq_counter, "route request counter");
  n.rreq_mark_seen(n.ip, n.rreq_counter);
  Message m;
  m.type = MsgType::kRreq;
  m.hops = 0;
  m.rreqid = n.rreq_counter;
  m.dip = dip;
  m.dsn = node.rt[dip].dsn;  // last known number, 0 when unknown
  m.oip = n.ip;
  m.osn = n.sn;
  m.sip = n.ip;
  return {n, m};
}

LocalOutcome process_rreq(const NodeState& node, const Message& msg,
                          ModelVariant v, bool v3_reply_only) {
  NodeState n = node;
  // The sender is a direct neighbor; learn it first (this matters when the
  // originator itself is the sender).
  update_route(n, msg.sip, 0, 1, msg.sip);

  bool duplicate = n.rreq_seen(msg.oip, msg.rreqid);
  if (duplicate) {
    // Variants 3/4 reprocess a duplicate that shortens the reverse route.
    bool improves = variant_int(v) >= 3 &&
                    msg.hops + 1 < static_cast<int>(n.rt[msg.oip].hops);
    if (!improves) return silent(std::move(n));
  }

  update_route(n, msg.oip, msg.osn,
               static_cast<std::uint8_t>(msg.hops + 1), msg.sip);
  n.rreq_mark_seen(msg.oip, msg.rreqid);

  if (n.ip == msg.dip) {
    // Destination: answer with the own sequence number, raised to the
    // requested one when necessary.
    n.sn = std::max(n.sn, msg.dsn);
    Message rep = make_rrep(0, msg.rreqid, msg.dip, n.sn, msg.oip, n.ip);
    NodeId rev = n.rt[msg.oip].nhop;
    return unicast(std::move(n), rev, rep);
  }

  const RouteEntry& rd = n.rt[msg.dip];
  if (rd.valid != 0 && rd.dsn != 0 && rd.dsn >= msg.dsn) {
    // Intermediate node with a fresh enough known route answers itself.
    Message rep =
        make_rrep(rd.hops, msg.rreqid, msg.dip, rd.dsn, msg.oip, n.ip);
    NodeId rev = n.rt[msg.oip].nhop;
    return unicast(std::move(n), rev, rep);
  }

  if (duplicate && v3_reply_only) return silent(std::move(n));

  Message fwd = msg;
  fwd.hops = static_cast<std::uint8_t>(msg.hops + 1);
  fwd.dsn = std::max(msg.dsn, rd.dsn);
  fwd.sip = n.ip;
  return broadcast(std::move(n), fwd);
}

LocalOutcome process_rrep(const NodeState& node, const Message& msg,
                          ModelVariant v) {
  NodeState n = node;
  // The forward decision is a guard over the table as the reply arrived:
  // when the reply comes straight from the destination, the sender refresh
  // below touches the same entry, and measuring afterwards would hide the
  // improvement. A reply that names this node as its destination installs
  // nothing (u stays false, matching the protected own slot).
  bool u = msg.dip != 0 && msg.dip != n.ip &&
           rt_update(node.rt, msg.dip, msg.dsn,
                     static_cast<std::uint8_t>(msg.hops + 1), msg.sip)
               .second;
  update_route(n, msg.sip, 0, 1, msg.sip);
  update_route(n, msg.dip, msg.dsn,
               static_cast<std::uint8_t>(msg.hops + 1), msg.sip);

  if (n.ip == msg.oip) return silent(std::move(n));  // discovery complete

  NodeId rev = n.rt[msg.oip].nhop;
  bool forward = u || variant_int(v) >= 2;
  if (!forward || rev == kNullNode) return silent(std::move(n));
  Message f = msg;
  f.hops = static_cast<std::uint8_t>(msg.hops + 1);
  f.sip = n.ip;
  return unicast(std::move(n), rev, f);
}

LocalOutcome process_rerr(const NodeState& node, const Message& msg) {
  NodeState n = node;
  Message err;
  err.type = MsgType::kRerr;
  err.sip = n.ip;
  // Collect in ascending destination order for canonical emissions.
  for (NodeId d = 1; d <= kMaxNodes; ++d) {
    for (const ErrDest& ed : msg.rerr) {
      if (ed.dip != d) continue;
      RouteEntry& e = n.rt[d];
      if (e.valid != 0 && e.nhop == msg.sip && e.dsn < ed.dsn) {
        e.valid = 0;  // nhop and hops are kept for later reference
        e.dsn = ed.dsn;
        err.rerr.push_back(ErrDest{d, ed.dsn});
      }
      break;
    }
  }
  if (err.rerr.empty()) return silent(std::move(n));
  return broadcast(std::move(n), err);
}

LocalOutcome process_pkt(const NodeState& node, const Message& msg) {
  NodeState n = node;
  if (n.ip == msg.dip) {
    LocalOutcome out;
    out.node = std::move(n);
    out.kind = OutcomeKind::kDeliver;
    out.delivered = msg.dip;
    return out;
  }
  const RouteEntry& e = n.rt[msg.dip];
  if (e.valid != 0 && e.nhop != kNullNode) {
    Message f;
    f.type = MsgType::kPkt;
    f.dip = msg.dip;
    f.oip = msg.oip;
    f.sip = n.ip;
    return unicast(std::move(n), e.nhop, f);
  }
  // No usable route: the packet is dropped and the breakage reported.
  Message err;
  err.type = MsgType::kRerr;
  err.sip = n.ip;
  err.rerr.push_back(ErrDest{msg.dip, e.dsn});
  return broadcast(std::move(n), err);
}

LocalOutcome process_message(const NodeState& node, const Message& msg,
                             ModelVariant v, bool v3_reply_only) {
  switch (msg.type) {
    case MsgType::kRreq:
      return process_rreq(node, msg, v, v3_reply_only);
    case MsgType::kRrep:
      return process_rrep(node, msg, v);
    case MsgType::kRerr:
      return process_rerr(node, msg);
    case MsgType::kPkt:
      return process_pkt(node, msg);
  }
  assert(false && "unknown message type");
  return silent(node);
}

LocalOutcome handle_newpkt(const NodeState& node, NodeId dip) {
  assert(dip != node.ip && dip != kNullNode);
  NodeState n = node;
  bool pending = n.queues[dip] > 0;
  n.queues[dip] = checked_inc(n.queues[dip], "data queue");
  const RouteEntry& e = n.rt[dip];
  bool routed = e.valid != 0 && e.nhop != kNullNode;
  if (routed || pending) return silent(std::move(n));
  // No route and no discovery already in flight for dip: start one.
  auto [n2, rreq] = initiate_route_discovery(n, dip);
  return broadcast(std::move(n2), rreq);
}

FixedVec<NodeId, kMaxNodes> sendable_destinations(const NodeState& node) {
  FixedVec<NodeId, kMaxNodes> out;
  for (NodeId d = 1; d <= kMaxNodes; ++d)
    if (node.queues[d] > 0 && node.rt[d].valid != 0 &&
        node.rt[d].nhop != kNullNode)
      out.push_back(d);
  return out;
}

LocalOutcome send_queued(const NodeState& node, NodeId dip) {
  assert(node.queues[dip] > 0 && node.rt[dip].valid != 0);
  NodeState n = node;
  n.queues[dip] -= 1;
  Message pkt;
  pkt.type = MsgType::kPkt;
  pkt.dip = dip;
  pkt.oip = n.ip;
  pkt.sip = n.ip;
  NodeId nhop = n.rt[dip].nhop;
  return unicast(std::move(n), nhop, pkt);
}

LocalOutcome on_unicast_failure(const NodeState& node, const Message& failed,
                                NodeId intended_nhop, ModelVariant v) {
  NodeState n = node;
  Message err;
  err.type = MsgType::kRerr;
  err.sip = n.ip;
  for (NodeId d = 1; d <= kMaxNodes; ++d) {
    RouteEntry& e = n.rt[d];
    if (e.valid != 0 && e.nhop == intended_nhop) {
      e.valid = 0;
      e.dsn = checked_inc(e.dsn, "destination sequence number");
      err.rerr.push_back(ErrDest{d, e.dsn});
    }
  }
  if (v == ModelVariant::kV4 && failed.type == MsgType::kRrep) {
    // The reply never made it: forget the request so a later copy of the
    // same discovery is answered instead of discarded.
    n.rreq_unmark(failed.oip, failed.rreqid);
  }
  if (err.rerr.empty()) return silent(std::move(n));
  return broadcast(std::move(n), err);
}

bool enqueue_message(NodeState& node, const Message& msg) {
  return node.msgbuf.push_back(msg);
}

}  // namespace aodvmc
