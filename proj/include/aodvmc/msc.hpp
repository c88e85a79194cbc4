// Counterexample trace output: line-oriented JSON step records plus a
// human-readable message-sequence-chart rendering (one lifeline per node,
// numbered steps, arrows annotated with message type and discovery tags).

#ifndef AODVMC_MSC_HPP_
#define AODVMC_MSC_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "aodvmc/explorer.hpp"

namespace aodvmc {

// One JSON object per step: index, kind, actor, receivers, message fields,
// and a per-node routing-table digest of the state after the step.
std::string trace_to_jsonl(const Instance& inst,
                           const std::vector<Transition>& trace,
                           const std::vector<GlobalState>& states);

// The message sequence chart text.
std::string render_msc(const Instance& inst,
                       const std::vector<Transition>& trace);

}  // namespace aodvmc

#endif  // AODVMC_MSC_HPP_
