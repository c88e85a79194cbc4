// Line-oriented JSON persistence for instance check results.  The writer
// emits a fixed field order by hand so files are byte-stable across runs;
// the reader parses with a real JSON parser and re-validates the shape.

#include "aodvmc/records.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace aodvmc {

namespace {

// Escapes a string for embedding in a JSON string literal.
std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Two glyphs per property: pair (1,3) then pair (2,3).
std::string pair_glyphs(const PropertyVerdicts& v, int property) {
  std::string s;
  s += verdict_char(v.v[property][0]);
  s += verdict_char(v.v[property][1]);
  return s;
}

void parse_pair_glyphs(const std::string& s, PropertyVerdicts& v,
                       int property) {
  if (s.size() != 2) {
    throw std::invalid_argument("record: verdict field must be two glyphs");
  }
  v.v[property][0] = verdict_from_char(s[0]);
  v.v[property][1] = verdict_from_char(s[1]);
}

}  // namespace

char verdict_char(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return 'H';
    case Verdict::kViolated: return 'V';
    case Verdict::kUnknown: return 'U';
  }
  return '?';
}

Verdict verdict_from_char(char c) {
  switch (c) {
    case 'H': return Verdict::kHolds;
    case 'V': return Verdict::kViolated;
    case 'U': return Verdict::kUnknown;
  }
  throw std::invalid_argument("record: bad verdict glyph");
}

InstanceRecord make_record(const Instance& inst, const ExploreResult& r) {
  InstanceRecord rec;
  rec.model = variant_int(inst.variant);
  rec.cls = inst.cls;
  rec.topo = inst.topo_id;
  rec.scenario = inst.sc.id;
  rec.verdicts = r.verdicts;
  rec.inconclusive = r.inconclusive;
  rec.reason = r.reason;
  rec.states = r.states;
  rec.ms = r.millis;
  return rec;
}

std::string record_to_json(const InstanceRecord& r) {
  std::ostringstream os;
  os << "{\"model\":" << r.model
     << ",\"class\":\"" << class_name(r.cls) << "\""
     << ",\"topo\":" << r.topo
     << ",\"scenario\":" << r.scenario
     << ",\"p1\":\"" << pair_glyphs(r.verdicts, 0) << "\""
     << ",\"p2\":\"" << pair_glyphs(r.verdicts, 1) << "\""
     << ",\"p3\":\"" << pair_glyphs(r.verdicts, 2) << "\""
     << ",\"inconclusive\":" << (r.inconclusive ? "true" : "false")
     << ",\"reason\":\"" << json_escape(r.reason) << "\""
     << ",\"states\":" << r.states
     << ",\"ms\":" << r.ms
     << ",\"trace\":\"" << json_escape(r.trace) << "\"}";
  return os.str();
}

InstanceRecord record_from_json(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  InstanceRecord r;
  r.model = j.at("model").get<int>();
  r.cls = class_from_name(j.at("class").get<std::string>());
  r.topo = j.at("topo").get<int>();
  r.scenario = j.at("scenario").get<int>();
  parse_pair_glyphs(j.at("p1").get<std::string>(), r.verdicts, 0);
  parse_pair_glyphs(j.at("p2").get<std::string>(), r.verdicts, 1);
  parse_pair_glyphs(j.at("p3").get<std::string>(), r.verdicts, 2);
  r.inconclusive = j.at("inconclusive").get<bool>();
  r.reason = j.at("reason").get<std::string>();
  r.states = j.at("states").get<std::uint32_t>();
  r.ms = j.at("ms").get<std::int64_t>();
  r.trace = j.at("trace").get<std::string>();
  if (r.model < 1 || r.model > 4 || r.scenario < 1 || r.scenario > 4) {
    throw std::invalid_argument("record: model/scenario out of range");
  }
  return r;
}

void write_records(std::ostream& os, const std::vector<InstanceRecord>& rs) {
  for (const auto& r : rs) os << record_to_json(r) << '\n';
}

std::vector<InstanceRecord> read_records(std::istream& is) {
  std::vector<InstanceRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(record_from_json(line));
  }
  return out;
}

}  // namespace aodvmc
