// The per-node AODV state machine: routing-table maintenance, message
// processing for each message type, route-discovery initiation, queued-data
// sending, and link-failure handling. All operations are pure functions
// from (state, input) to (state, outcome); the exploration layer decides
// when they fire and delivers their emissions.

#ifndef AODVMC_NODE_HPP_
#define AODVMC_NODE_HPP_

#include <utility>

#include "aodvmc/types.hpp"

namespace aodvmc {

// Routing-table update with the precedence rules:
//   replace the entry for dip iff
//     (a) no current route (nhop == 0), or
//     (b) incoming dsn > stored dsn, or
//     (c) incoming dsn == stored dsn and (hops < stored hops or entry
//         invalid), or
//     (d) incoming dsn == 0 ("unknown") — nhop/hops/valid are replaced but
//         the stored dsn is preserved.
// The stored dsn never decreases. Requires dip != 0, nhop != 0, hops >= 1.
std::pair<RoutingTable, bool> rt_update(const RoutingTable& rt, NodeId dip,
                                        Sqn dsn, std::uint8_t hops,
                                        NodeId nhop);

// Starts a route discovery: bumps sn and the request counter, marks the own
// request as seen, and returns the RREQ to broadcast (hops=0, dsn = stored
// dsn for dip, osn = the new sn). Requires dip != node.ip and no valid
// route to dip.
std::pair<NodeState, Message> initiate_route_discovery(const NodeState& node,
                                                       NodeId dip);

// Message handlers. Each consumes the given message logically (the caller
// pops it from the buffer head) and returns the node's successor state plus
// the emission, if any. `v3_reply_only` narrows variant-3/4 reprocessing of
// improving duplicates to the reply cases (no re-broadcast).
LocalOutcome process_rreq(const NodeState& node, const Message& msg,
                          ModelVariant v, bool v3_reply_only = false);
LocalOutcome process_rrep(const NodeState& node, const Message& msg,
                          ModelVariant v);
LocalOutcome process_rerr(const NodeState& node, const Message& msg);
LocalOutcome process_pkt(const NodeState& node, const Message& msg);

// Dispatch on msg.type (never sees NEWPKT — injection is handled below).
LocalOutcome process_message(const NodeState& node, const Message& msg,
                             ModelVariant v, bool v3_reply_only = false);

// A new locally-originated data packet for dip: the queue always grows; a
// route discovery starts only when there is no valid route and no earlier
// packet is already waiting on one (no duplicate RREQ for an in-flight
// discovery). Requires dip != node.ip.
LocalOutcome handle_newpkt(const NodeState& node, NodeId dip);

// Destinations with at least one queued packet and a valid route; each is a
// distinct send transition for the explorer.
FixedVec<NodeId, kMaxNodes> sendable_destinations(const NodeState& node);

// Dequeues one packet for dip and unicasts it to the stored next hop.
// Requires dip eligible per sendable_destinations.
LocalOutcome send_queued(const NodeState& node, NodeId dip);

// Link-breakage handling after a blocked unicast: every valid route via the
// unreachable next hop is invalidated with dsn incremented, and an RERR
// carrying the invalidated set is broadcast (Silent when the set is empty).
// Variant 4 additionally forgets (failed.oip, failed.rreqid) when the failed
// message was an RREP, so a later copy of that request is answered again.
LocalOutcome on_unicast_failure(const NodeState& node, const Message& failed,
                                NodeId intended_nhop, ModelVariant v);

// Appends msg to the FIFO message buffer. Returns false on overflow (the
// exploration layer turns that into a hard instance error).
[[nodiscard]] bool enqueue_message(NodeState& node, const Message& msg);

}  // namespace aodvmc

#endif  // AODVMC_NODE_HPP_
