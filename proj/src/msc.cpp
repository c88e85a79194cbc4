// Counterexample trace rendering: line-oriented JSON step records and a
// plain-text message sequence chart with one lifeline per node.

#include "aodvmc/msc.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

namespace aodvmc {

namespace {

char node_letter(NodeId i) { return static_cast<char>('A' + i - 1); }

const char* kind_name(TransKind k) {
  switch (k) {
    case TransKind::kInternal: return "internal";
    case TransKind::kBroadcast: return "broadcast";
    case TransKind::kUnicast: return "unicast";
    case TransKind::kUnicastFail: return "unicast-fail";
    case TransKind::kInject: return "inject";
    case TransKind::kChange: return "change";
  }
  return "?";
}

const char* msg_name(MsgType t) {
  switch (t) {
    case MsgType::kRreq: return "rreq";
    case MsgType::kRrep: return "rrep";
    case MsgType::kRerr: return "rerr";
    case MsgType::kPkt: return "pkt";
  }
  return "?";
}

std::string msg_json(const Message& m) {
  std::ostringstream os;
  os << "{\"type\":\"" << msg_name(m.type) << "\",\"hops\":" << int(m.hops)
     << ",\"rreqid\":" << int(m.rreqid) << ",\"dip\":" << int(m.dip)
     << ",\"dsn\":" << int(m.dsn) << ",\"oip\":" << int(m.oip)
     << ",\"osn\":" << int(m.osn) << ",\"sip\":" << int(m.sip);
  if (m.type == MsgType::kRerr) {
    os << ",\"rerr\":[";
    for (int i = 0; i < m.rerr.size(); ++i) {
      if (i) os << ',';
      os << '[' << int(m.rerr[i].dip) << ',' << int(m.rerr[i].dsn) << ']';
    }
    os << ']';
  }
  os << '}';
  return os.str();
}

// Human label on chart arrows, with the (oip, rreqid) discovery tag on
// request-discovery traffic.
std::string msg_label(const Message& m) {
  std::ostringstream os;
  switch (m.type) {
    case MsgType::kRreq:
      os << "RREQ (" << node_letter(m.oip) << "," << int(m.rreqid) << ") dip="
         << node_letter(m.dip) << " dsn=" << int(m.dsn)
         << " hops=" << int(m.hops);
      break;
    case MsgType::kRrep:
      os << "RREP dip=" << node_letter(m.dip) << " dsn=" << int(m.dsn)
         << " hops=" << int(m.hops) << " for " << node_letter(m.oip);
      break;
    case MsgType::kRerr: {
      os << "RERR {";
      for (int i = 0; i < m.rerr.size(); ++i) {
        if (i) os << ", ";
        os << node_letter(m.rerr[i].dip) << ":" << int(m.rerr[i].dsn);
      }
      os << "}";
      break;
    }
    case MsgType::kPkt:
      os << "PKT dip=" << node_letter(m.dip);
      break;
  }
  return os.str();
}

std::string edge_text(const Topology& t) {
  std::string s;
  for (auto [i, j] : t.edge_list()) {
    if (!s.empty()) s += ' ';
    s += node_letter(static_cast<NodeId>(i));
    s += '-';
    s += node_letter(static_cast<NodeId>(j));
  }
  return s.empty() ? "(none)" : s;
}

// Chart geometry: step number gutter, then one column per node.
constexpr int kGutter = 6;
constexpr int kColW = 11;

int col(NodeId i) { return kGutter + (i - 1) * kColW + kColW / 2; }

std::string base_line(int n) {
  std::string line(static_cast<std::size_t>(kGutter + n * kColW), ' ');
  for (NodeId i = 1; i <= n; ++i) line[col(i)] = '|';
  return line;
}

void draw_span(std::string& line, int a, int b, char fill) {
  for (int c = std::min(a, b) + 1; c < std::max(a, b); ++c) line[c] = fill;
}

void put_step_no(std::string& line, int step) {
  std::string num = std::to_string(step);
  if (num.size() + 2 > static_cast<std::size_t>(kGutter)) return;
  std::size_t start = static_cast<std::size_t>(kGutter) - 2 - num.size();
  for (std::size_t k = 0; k < num.size(); ++k) line[start + k] = num[k];
}

// True when the step left its actor's protocol state (everything but the
// consumed buffer entry) untouched.
bool no_state_change(const GlobalState& pre, const GlobalState& post,
                     NodeId actor) {
  NodeState a = pre.node[actor];
  NodeState b = post.node[actor];
  a.msgbuf = {};
  b.msgbuf = {};
  return a == b;
}

}  // namespace

std::string trace_to_jsonl(const Instance& inst,
                           const std::vector<Transition>& trace,
                           const std::vector<GlobalState>& states) {
  if (states.size() != trace.size() + 1) {
    throw std::invalid_argument("trace_to_jsonl: states must cover the trace");
  }
  const NodeId n = inst.start.n;
  std::ostringstream os;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Transition& t = trace[i];
    const GlobalState& after = states[i + 1];
    os << "{\"index\":" << (i + 1) << ",\"kind\":\"" << kind_name(t.kind)
       << "\",\"actor\":" << int(t.actor)
       << ",\"recipient\":" << int(t.recipient);
    if (t.kind == TransKind::kInject) {
      os << ",\"injection\":" << (int(t.inject_idx) + 1);
    }
    if (t.kind == TransKind::kUnicast || t.kind == TransKind::kUnicastFail) {
      os << ",\"from_queue\":" << (t.from_queue ? "true" : "false");
    }
    if (t.kind != TransKind::kInject && t.kind != TransKind::kChange) {
      os << ",\"msg\":" << msg_json(t.msg);
    }
    if (t.has_emission) os << ",\"emitted\":" << msg_json(t.emitted);
    os << ",\"receivers\":[";
    for (int k = 0; k < t.receivers.size(); ++k) {
      if (k) os << ',';
      os << int(t.receivers[k]);
    }
    os << "],\"rt\":{";
    for (NodeId ip = 1; ip <= n; ++ip) {
      if (ip > 1) os << ',';
      os << '"' << int(ip) << "\":[";
      bool first = true;
      for (NodeId dip = 1; dip <= n; ++dip) {
        const RouteEntry& e = after.node[ip].rt[dip];
        if (e.dsn == 0 && e.nhop == 0 && !e.valid && e.hops == 0) continue;
        if (!first) os << ',';
        first = false;
        os << '[' << int(dip) << ',' << int(e.dsn) << ',' << int(e.valid)
           << ',' << int(e.hops) << ',' << int(e.nhop) << ']';
      }
      os << ']';
    }
    os << "}}\n";
  }
  return os.str();
}

std::string render_msc(const Instance& inst,
                       const std::vector<Transition>& trace) {
  const int n = inst.start.n;
  std::ostringstream os;
  os << "instance: model=" << variant_int(inst.variant)
     << " class=" << class_name(inst.cls) << " topo=" << inst.topo_id
     << " scenario=" << inst.sc.id << "\n";
  os << "inject: #1 " << node_letter(inst.sc.inj[0].first) << "->"
     << node_letter(inst.sc.inj[0].second) << "  #2 "
     << node_letter(inst.sc.inj[1].first) << "->"
     << node_letter(inst.sc.inj[1].second) << "\n";
  os << "links: " << edge_text(inst.start);
  if (inst.is_dynamic()) {
    os << "  [" << (inst.change.kind == ChangeKind::kAddLink ? "adds"
                                                             : "removes")
       << " " << node_letter(inst.change.i) << "-"
       << node_letter(inst.change.j) << "]";
  }
  os << "\n\n";
  if (trace.empty()) return os.str();

  std::string head(static_cast<std::size_t>(kGutter + n * kColW), ' ');
  for (NodeId i = 1; i <= n; ++i) head[col(i)] = node_letter(i);
  os << head << "\n";

  const std::size_t annot_at = head.size() + 2;
  auto emit = [&](std::string line, const std::string& note) {
    while (line.size() < annot_at) line += ' ';
    os << line << note << "\n";
  };

  GlobalState gs = initial_state(inst);
  int step = 0;
  for (const Transition& tr : trace) {
    Transition t = tr;  // apply_transition refills the rendering fields
    GlobalState next = apply_transition(gs, inst, t);
    ++step;
    std::string line = base_line(n);
    put_step_no(line, step);
    std::string note;

    switch (t.kind) {
      case TransKind::kInternal: {
        line[col(t.actor)] = '#';
        note = std::string(1, node_letter(t.actor)) + " handles " +
               msg_label(t.msg);
        if (t.outcome.kind == OutcomeKind::kDeliver) {
          note += " - data delivered";
        }
        if (no_state_change(gs, next, t.actor)) note += " (no state change)";
        emit(line, note);
        break;
      }
      case TransKind::kBroadcast: {
        int a = col(t.actor);
        int lo = a, hi = a;
        for (int k = 0; k < t.receivers.size(); ++k) {
          lo = std::min(lo, col(t.receivers[k]));
          hi = std::max(hi, col(t.receivers[k]));
        }
        draw_span(line, lo, hi, '-');
        for (int k = 0; k < t.receivers.size(); ++k) {
          int c = col(t.receivers[k]);
          line[c] = c < a ? '<' : '>';
        }
        line[a] = '*';
        note = std::string(1, node_letter(t.actor)) + " handles " +
               msg_label(t.msg) + " => " + msg_label(t.emitted);
        if (t.receivers.size() == 0) note += " (no neighbors)";
        emit(line, note);
        break;
      }
      case TransKind::kUnicast: {
        int a = col(t.actor), b = col(t.recipient);
        draw_span(line, a, b, '-');
        line[b] = b < a ? '<' : '>';
        line[a] = '*';
        note = std::string(1, node_letter(t.actor)) +
               (t.from_queue ? " sends queued " : " handles ") +
               msg_label(t.from_queue ? t.emitted : t.msg);
        if (!t.from_queue) note += " => " + msg_label(t.emitted);
        emit(line, note);
        break;
      }
      case TransKind::kUnicastFail: {
        int a = col(t.actor), b = col(t.recipient);
        draw_span(line, a, b, '-');
        line[b] = 'X';
        line[a] = '*';
        note = std::string(1, node_letter(t.actor)) + " unicast to " +
               node_letter(t.recipient) + " fails: " +
               msg_label(t.from_queue ? t.emitted : t.msg);
        emit(line, note);
        if (t.has_emission) {
          std::string line2 = base_line(n);
          int lo = a, hi = a;
          for (int k = 0; k < t.receivers.size(); ++k) {
            lo = std::min(lo, col(t.receivers[k]));
            hi = std::max(hi, col(t.receivers[k]));
          }
          draw_span(line2, lo, hi, '-');
          for (int k = 0; k < t.receivers.size(); ++k) {
            int c = col(t.receivers[k]);
            line2[c] = c < a ? '<' : '>';
          }
          line2[a] = '*';
          emit(line2, "  +- " + msg_label(t.emitted));
        }
        break;
      }
      case TransKind::kInject: {
        line[col(t.actor)] = '!';
        note = "inject #" + std::to_string(int(t.inject_idx) + 1) + ": " +
               node_letter(t.actor) + std::string(" gets NEWPKT dest=") +
               node_letter(t.recipient);
        emit(line, note);
        if (t.has_emission) {
          std::string line2 = base_line(n);
          int a = col(t.actor);
          int lo = a, hi = a;
          for (int k = 0; k < t.receivers.size(); ++k) {
            lo = std::min(lo, col(t.receivers[k]));
            hi = std::max(hi, col(t.receivers[k]));
          }
          draw_span(line2, lo, hi, '-');
          for (int k = 0; k < t.receivers.size(); ++k) {
            int c = col(t.receivers[k]);
            line2[c] = c < a ? '<' : '>';
          }
          line2[a] = '*';
          emit(line2, "  +- " + msg_label(t.emitted));
        }
        break;
      }
      case TransKind::kChange: {
        int a = col(t.actor), b = col(t.recipient);
        draw_span(line, a, b,
                  inst.change.kind == ChangeKind::kAddLink ? '=' : '/');
        char mark = inst.change.kind == ChangeKind::kAddLink ? '+' : 'x';
        line[a] = mark;
        line[b] = mark;
        note = std::string("link ") + node_letter(t.actor) + "-" +
               node_letter(t.recipient) +
               (inst.change.kind == ChangeKind::kAddLink ? " added"
                                                         : " removed");
        emit(line, note);
        break;
      }
    }
    gs = next;
  }
  return os.str();
}

}  // namespace aodvmc
