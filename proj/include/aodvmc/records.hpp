// Persistent experiment records: one line-oriented JSON record per checked
// instance, with byte-stable field order so result files are diffable and
// sweeps are resumable.

#ifndef AODVMC_RECORDS_HPP_
#define AODVMC_RECORDS_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aodvmc/explorer.hpp"

namespace aodvmc {

// Flat result of one instance check.
struct InstanceRecord {
  int model = 0;                       // variant 1..4
  InstanceClass cls = InstanceClass::kStatic;
  int topo = 0;                        // topology or pair id within class
  int scenario = 0;                    // 1..4
  PropertyVerdicts verdicts;
  bool inconclusive = false;
  std::string reason;                  // "" unless inconclusive
  std::uint32_t states = 0;
  std::int64_t ms = 0;
  std::string trace;                   // trace file path ("" when none)

  bool operator==(const InstanceRecord&) const = default;
};

InstanceRecord make_record(const Instance& inst, const ExploreResult& r);

// One-line JSON with fixed field order; parse accepts exactly that shape.
std::string record_to_json(const InstanceRecord& r);
InstanceRecord record_from_json(const std::string& line);

void write_records(std::ostream& os, const std::vector<InstanceRecord>& rs);
std::vector<InstanceRecord> read_records(std::istream& is);

// Verdict glyphs used in records: H(olds) / V(iolated) / U(nknown).
char verdict_char(Verdict v);
Verdict verdict_from_char(char c);

}  // namespace aodvmc

#endif  // AODVMC_RECORDS_HPP_
