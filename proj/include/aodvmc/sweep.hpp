// The experiment sweep: runs every (variant, topology/pair, scenario) cell
// of a class grid, persists records resumably in deterministic order, and
// aggregates them into the per-class summary table (percentage of
// topologies with no counterexample, per property).

#ifndef AODVMC_SWEEP_HPP_
#define AODVMC_SWEEP_HPP_

#include <functional>
#include <string>
#include <vector>

#include "aodvmc/records.hpp"

namespace aodvmc {

struct SweepOptions {
  std::vector<int> models = {1, 2, 3, 4};
  std::vector<InstanceClass> classes = {InstanceClass::kStatic,
                                        InstanceClass::kAddLink,
                                        InstanceClass::kRemoveLink};
  int jobs = 0;  // 0 = AODVMC_JOBS env var, else hardware concurrency
  std::string out_dir = "results";
  std::uint32_t state_limit = 2'000'000;
  bool force_change = false;
  bool v3_reply_only = false;
  std::function<void(const std::string&)> progress;  // optional logging
};

// Path of the record file for one (class, model) grid.
std::string sweep_file_path(const std::string& out_dir, InstanceClass cls,
                            int model);

// Runs the requested grids. Existing records in the output files are kept
// (cells already present are not recomputed); files are rewritten in grid
// order, so a rerun over complete files is a byte-identical no-op. Returns
// the number of newly computed cells.
std::size_t run_sweep(const SweepOptions& opts);

// One summary-table row: percentages of topologies (pairs) whose four
// scenario instances all satisfy the column, to one decimal. With
// per_instance aggregation the denominator is instances instead and each
// (topology, scenario) cell is scored on its own.
struct SummaryRow {
  InstanceClass cls = InstanceClass::kStatic;
  int model = 0;
  bool complete = false;  // full grid present
  double p1 = 0, p2 = 0, p3 = 0, p12 = 0, all = 0;
  int denominator = 0;
  int inconclusive = 0;  // instances, not topologies
};

// Aggregates one class grid (records must all share cls/model; an
// incomplete grid yields complete == false and the row is marked).
SummaryRow aggregate(const std::vector<InstanceRecord>& records,
                     InstanceClass cls, int model,
                     bool per_instance = false);

std::vector<SummaryRow> load_and_aggregate(const std::string& out_dir,
                                           const std::vector<int>& models,
                                           const std::vector<InstanceClass>&
                                               classes,
                                           bool per_instance = false);

// Renders rows as an aligned text table ("table3" format) or CSV.
std::string render_summary_table(const std::vector<SummaryRow>& rows);
std::string render_summary_csv(const std::vector<SummaryRow>& rows);

// Grid geometry.
int class_size(InstanceClass cls);        // 444 or 1978
int grid_cells(InstanceClass cls);        // class size x 4 scenarios

}  // namespace aodvmc

#endif  // AODVMC_SWEEP_HPP_
