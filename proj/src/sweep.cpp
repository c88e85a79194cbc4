// Sweep driver: runs the (model, topology/pair, scenario) grids, persists
// one JSON record per cell resumably, and aggregates per-topology verdict
// conjunctions into the summary table.

#include "aodvmc/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "aodvmc/enumerate.hpp"
#include "aodvmc/explorer.hpp"

namespace aodvmc {

namespace {

const std::vector<Topology>& static_universe() {
  static const std::vector<Topology> topos = enumerate_static();
  return topos;
}

const std::vector<ChangePair>& pair_universe() {
  static const std::vector<ChangePair> pairs = enumerate_change_pairs();
  return pairs;
}

Instance cell_instance(InstanceClass cls, int model, int topo, int scenario,
                       const SweepOptions& opts) {
  ModelVariant v = variant_from_int(model);
  Instance inst;
  if (cls == InstanceClass::kStatic) {
    inst = make_static_instance(v, static_universe()[topo], topo, scenario);
  } else {
    inst = make_change_instance(v, cls, pair_universe()[topo], topo, scenario);
  }
  inst.opts.state_limit = opts.state_limit;
  inst.opts.force_change = opts.force_change;
  inst.opts.v3_reply_only = opts.v3_reply_only;
  return inst;
}

int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("AODVMC_JOBS")) {
    int j = std::atoi(env);
    if (j > 0) return j;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Canonical file body: present cells in grid order, one line each.
std::string render_grid(const std::vector<std::optional<InstanceRecord>>&
                            slots) {
  std::string body;
  for (const auto& slot : slots) {
    if (slot) {
      body += record_to_json(*slot);
      body += '\n';
    }
  }
  return body;
}

// Atomically replaces `path` with `body` (write temp file, then rename).
void write_file_atomic(const std::string& path, const std::string& body) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("sweep: cannot write " + tmp);
    os << body;
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// One (class, model) grid.  Returns the number of newly computed cells.
std::size_t run_grid(InstanceClass cls, int model, int jobs,
                     const SweepOptions& opts) {
  const int topos = class_size(cls);
  const std::string path = sweep_file_path(opts.out_dir, cls, model);
  std::vector<std::optional<InstanceRecord>> slots(
      static_cast<std::size_t>(topos) * 4);

  std::string existing;
  if (std::filesystem::exists(path)) {
    existing = read_file(path);
    std::istringstream is(existing);
    for (const InstanceRecord& r : read_records(is)) {
      if (r.cls != cls || r.model != model) {
        throw std::runtime_error("sweep: " + path +
                                 " holds records for a different grid");
      }
      if (r.topo < 0 || r.topo >= topos) {
        throw std::runtime_error("sweep: " + path + " topo id out of range");
      }
      std::size_t idx = static_cast<std::size_t>(r.topo) * 4 +
                        static_cast<std::size_t>(r.scenario - 1);
      if (slots[idx]) {
        throw std::runtime_error("sweep: " + path + " has duplicate cells");
      }
      slots[idx] = r;
    }
  }

  std::vector<std::size_t> missing;
  for (std::size_t idx = 0; idx < slots.size(); ++idx) {
    if (!slots[idx]) missing.push_back(idx);
  }

  if (missing.empty()) {
    // Complete grid: rewrite only if the on-disk bytes are not canonical.
    std::string body = render_grid(slots);
    if (body != existing) write_file_atomic(path, body);
    return 0;
  }

  std::atomic<std::size_t> cursor{0};
  std::atomic<std::size_t> done{0};
  std::mutex mu;  // guards slots, flushing, and progress output
  constexpr std::size_t kFlushEvery = 250;

  auto worker = [&] {
    for (;;) {
      std::size_t pick = cursor.fetch_add(1);
      if (pick >= missing.size()) return;
      std::size_t idx = missing[pick];
      int topo = static_cast<int>(idx / 4);
      int scenario = static_cast<int>(idx % 4) + 1;
      Instance inst = cell_instance(cls, model, topo, scenario, opts);
      ExploreResult r = explore(inst);
      InstanceRecord rec = make_record(inst, r);

      std::lock_guard<std::mutex> lock(mu);
      slots[idx] = rec;
      std::size_t finished = ++done;
      if (finished % kFlushEvery == 0) {
        write_file_atomic(path, render_grid(slots));
      }
      if (opts.progress) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s m%d: %zu/%zu new cells",
                      class_name(cls), model, finished,
                      missing.size());
        opts.progress(buf);
      }
    }
  };

  int nthreads = std::min<std::size_t>(jobs, missing.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  write_file_atomic(path, render_grid(slots));
  return missing.size();
}

}  // namespace

int class_size(InstanceClass cls) {
  if (cls == InstanceClass::kStatic) {
    return static_cast<int>(static_universe().size());
  }
  return static_cast<int>(pair_universe().size());
}

int grid_cells(InstanceClass cls) { return class_size(cls) * 4; }

std::string sweep_file_path(const std::string& out_dir, InstanceClass cls,
                            int model) {
  return out_dir + "/" + class_name(cls) + "-m" + std::to_string(model) +
         ".jsonl";
}

std::size_t run_sweep(const SweepOptions& opts) {
  std::filesystem::create_directories(opts.out_dir);
  // Fail on unwritable output before any exploration starts.
  {
    std::string probe = opts.out_dir + "/.write-probe.tmp";
    std::ofstream os(probe, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("sweep: cannot write to " +
                                      opts.out_dir);
    os.close();
    std::filesystem::remove(probe);
  }
  int jobs = resolve_jobs(opts.jobs);
  std::size_t computed = 0;
  for (InstanceClass cls : opts.classes) {
    for (int model : opts.models) {
      computed += run_grid(cls, model, jobs, opts);
    }
  }
  return computed;
}

SummaryRow aggregate(const std::vector<InstanceRecord>& records,
                     InstanceClass cls, int model, bool per_instance) {
  const int topos = class_size(cls);
  std::vector<std::array<const InstanceRecord*, 4>> grid(
      topos, {nullptr, nullptr, nullptr, nullptr});
  int present = 0;
  int inconclusive = 0;
  for (const InstanceRecord& r : records) {
    if (r.cls != cls || r.model != model) {
      throw std::invalid_argument("aggregate: record from a different grid");
    }
    if (r.topo < 0 || r.topo >= topos || r.scenario < 1 || r.scenario > 4) {
      throw std::invalid_argument("aggregate: cell out of range");
    }
    const InstanceRecord*& slot = grid[r.topo][r.scenario - 1];
    if (slot) throw std::invalid_argument("aggregate: duplicate cell");
    slot = &r;
    ++present;
    if (r.inconclusive) ++inconclusive;
  }

  // One instance holds a property when both injected pairs hold it; a
  // missing or inconclusive instance fails it. A topology passes when all
  // four of its scenario instances hold.
  auto record_passes = [](const InstanceRecord* rec, int property) {
    if (!rec) return false;
    for (int pair = 0; pair < 2; ++pair) {
      if (rec->verdicts.v[property][pair] != Verdict::kHolds) return false;
    }
    return true;
  };
  auto property_passes = [&](const std::array<const InstanceRecord*, 4>& row,
                             int property) {
    for (const InstanceRecord* rec : row) {
      if (!record_passes(rec, property)) return false;
    }
    return true;
  };

  int c1 = 0, c2 = 0, c3 = 0, c12 = 0, call = 0;
  if (per_instance) {
    for (const auto& row : grid) {
      for (const InstanceRecord* rec : row) {
        bool p1 = record_passes(rec, 0);
        bool p2 = record_passes(rec, 1);
        bool p3 = record_passes(rec, 2);
        c1 += p1;
        c2 += p2;
        c3 += p3;
        c12 += p1 && p2;
        call += p1 && p2 && p3;
      }
    }
  } else {
    for (const auto& row : grid) {
      bool p1 = property_passes(row, 0);
      bool p2 = property_passes(row, 1);
      bool p3 = property_passes(row, 2);
      c1 += p1;
      c2 += p2;
      c3 += p3;
      c12 += p1 && p2;
      call += p1 && p2 && p3;
    }
  }

  SummaryRow row;
  row.cls = cls;
  row.model = model;
  row.complete = present == topos * 4;
  row.denominator = per_instance ? topos * 4 : topos;
  row.inconclusive = inconclusive;
  double d = row.denominator;
  row.p1 = 100.0 * c1 / d;
  row.p2 = 100.0 * c2 / d;
  row.p3 = 100.0 * c3 / d;
  row.p12 = 100.0 * c12 / d;
  row.all = 100.0 * call / d;
  return row;
}

std::vector<SummaryRow> load_and_aggregate(const std::string& out_dir,
                                           const std::vector<int>& models,
                                           const std::vector<InstanceClass>&
                                               classes,
                                           bool per_instance) {
  std::vector<SummaryRow> rows;
  for (InstanceClass cls : classes) {
    for (int model : models) {
      std::vector<InstanceRecord> records;
      std::string path = sweep_file_path(out_dir, cls, model);
      if (std::filesystem::exists(path)) {
        std::ifstream is(path, std::ios::binary);
        records = read_records(is);
      }
      rows.push_back(aggregate(records, cls, model, per_instance));
    }
  }
  return rows;
}

std::string render_summary_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %5s %7s %7s %7s %7s %7s\n", "class",
                "model", "P1", "P2", "P3", "P1&2", "all");
  os << buf;
  os << "------------ ----- ------- ------- ------- ------- -------\n";
  bool any_incomplete = false;
  for (const SummaryRow& r : rows) {
    if (r.complete) {
      std::snprintf(buf, sizeof buf,
                    "%-12s %5d %7.1f %7.1f %7.1f %7.1f %7.1f\n",
                    class_name(r.cls), r.model, r.p1, r.p2, r.p3, r.p12,
                    r.all);
    } else {
      // Refuse to print percentages computed from a partial grid.
      std::snprintf(buf, sizeof buf, "%-12s %5d %7s %7s %7s %7s %7s *\n",
                    class_name(r.cls), r.model, "-", "-", "-", "-", "-");
      any_incomplete = true;
    }
    os << buf;
  }
  if (any_incomplete) {
    os << "* incomplete grid: run the sweep to fill in the missing cells\n";
  }
  return os.str();
}

std::string render_summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "class,model,p1,p2,p3,p12,all,denominator,inconclusive,complete\n";
  char buf[160];
  for (const SummaryRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.1f,%.1f,%.1f,%.1f,%.1f,%d,%d,%d\n",
                  class_name(r.cls), r.model, r.p1, r.p2, r.p3, r.p12,
                  r.all, r.denominator, r.inconclusive, r.complete ? 1 : 0);
    os << buf;
  }
  return os.str();
}

}  // namespace aodvmc
