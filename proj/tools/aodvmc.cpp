// Command-line front end: topology enumeration, single-instance checking
// with counterexample traces, resumable experiment sweeps, and summary
// reporting.  Exit codes: 0 = checked properties hold, 1 = counterexample,
// 2 = inconclusive, 3 = usage or I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aodvmc/enumerate.hpp"
#include "aodvmc/explorer.hpp"
#include "aodvmc/msc.hpp"
#include "aodvmc/records.hpp"
#include "aodvmc/sweep.hpp"

namespace {

using namespace aodvmc;

char node_letter(NodeId i) { return static_cast<char>('A' + i - 1); }

std::vector<InstanceClass> parse_classes(const std::vector<std::string>&
                                             names) {
  std::vector<InstanceClass> out;
  for (const std::string& name : names) {
    if (name == "all") {
      return {InstanceClass::kStatic, InstanceClass::kAddLink,
              InstanceClass::kRemoveLink};
    }
    // "add-link"/"remove-link" are accepted as spelled-out aliases.
    std::string key = name;
    if (key.size() > 5 && key.substr(key.size() - 5) == "-link") {
      key = key.substr(0, key.size() - 5);
    }
    out.push_back(class_from_name(key));
  }
  return out;
}

Instance build_instance(InstanceClass cls, int model, int topo,
                        int scenario) {
  ModelVariant v = variant_from_int(model);
  if (cls == InstanceClass::kStatic) {
    const auto topos = enumerate_static();
    if (topo < 0 || topo >= static_cast<int>(topos.size())) {
      throw std::invalid_argument("topology id out of range (0.." +
                                  std::to_string(topos.size() - 1) + ")");
    }
    return make_static_instance(v, topos[topo], topo, scenario);
  }
  const auto pairs = enumerate_change_pairs();
  if (topo < 0 || topo >= static_cast<int>(pairs.size())) {
    throw std::invalid_argument("pair id out of range (0.." +
                                std::to_string(pairs.size() - 1) + ")");
  }
  return make_change_instance(v, cls, pairs[topo], topo, scenario);
}

int run_enum(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto topos = enumerate_static();
  auto pairs = enumerate_change_pairs();

  auto write = [&](const std::string& name, auto&& fn) {
    std::string path = out_dir + "/" + name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    fn(os);
    std::cout << path << "\n";
  };
  write("static-topologies.jsonl",
        [&](std::ostream& os) { write_static_file(os, topos); });
  write("add-link-pairs.jsonl", [&](std::ostream& os) {
    write_pairs_file(os, pairs, InstanceClass::kAddLink);
  });
  write("remove-link-pairs.jsonl", [&](std::ostream& os) {
    write_pairs_file(os, pairs, InstanceClass::kRemoveLink);
  });
  std::cout << "static topologies: " << topos.size() << "\n"
            << "change pairs per class: " << pairs.size() << "\n";
  return 0;
}

int run_check(const Instance& inst, const std::string& trace_prefix) {
  Explorer ex(inst);
  const ExploreResult& r = ex.run();

  std::cout << "instance: model=" << variant_int(inst.variant)
            << " class=" << class_name(inst.cls) << " topo=" << inst.topo_id
            << " scenario=" << inst.sc.id << "\n";
  for (int prop = 0; prop < 3; ++prop) {
    std::cout << "P" << (prop + 1) << ":";
    for (int pair = 0; pair < 2; ++pair) {
      NodeId oip = inst.sc.inj[pair].first;
      NodeId dip = inst.sc.inj[pair].second;
      const char* text = "holds";
      if (r.verdicts.v[prop][pair] == Verdict::kViolated) text = "VIOLATED";
      if (r.verdicts.v[prop][pair] == Verdict::kUnknown) text = "unknown";
      std::cout << "  " << node_letter(oip) << "->" << node_letter(dip)
                << " " << text;
    }
    std::cout << "\n";
  }
  std::cout << "states=" << r.states << " time=" << r.millis << "ms\n";
  if (r.inconclusive) {
    std::cout << "inconclusive: " << r.reason << "\n";
    return 2;
  }

  if (!trace_prefix.empty()) {
    for (int prop = 0; prop < 3; ++prop) {
      for (int pair = 0; pair < 2; ++pair) {
        if (r.verdicts.v[prop][pair] != Verdict::kViolated) continue;
        std::vector<Transition> tr = ex.trace(prop, pair);
        std::vector<GlobalState> states = ex.replay(tr);
        std::string stem = trace_prefix + "-p" + std::to_string(prop + 1) +
                           "-" + node_letter(inst.sc.inj[pair].first) +
                           node_letter(inst.sc.inj[pair].second);
        {
          std::ofstream os(stem + ".trace.jsonl",
                           std::ios::binary | std::ios::trunc);
          if (!os) throw std::runtime_error("cannot write " + stem);
          os << trace_to_jsonl(inst, tr, states);
        }
        {
          std::ofstream os(stem + ".msc.txt",
                           std::ios::binary | std::ios::trunc);
          if (!os) throw std::runtime_error("cannot write " + stem);
          os << render_msc(inst, tr);
        }
        std::cout << "trace: " << stem << ".trace.jsonl " << stem
                  << ".msc.txt (" << tr.size() << " steps)\n";
      }
    }
  }
  return r.verdicts.any_violated() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exhaustive route-discovery checker for an AODV model"};
  app.require_subcommand(1);

  // enum
  auto* cmd_enum =
      app.add_subcommand("enum", "Write the topology/pair enumeration files");
  std::string enum_out = "results";
  cmd_enum->add_option("--out", enum_out, "Output directory");

  // check
  auto* cmd_check =
      app.add_subcommand("check", "Check one instance exhaustively");
  int ck_model = 1, ck_topo = 0, ck_scenario = 1;
  std::string ck_class = "static";
  std::string ck_trace;
  std::uint32_t ck_limit = 2'000'000;
  bool ck_force = false, ck_v3ro = false;
  std::uint64_t ck_seed = 0;
  cmd_check->add_option("--model", ck_model, "Protocol variant 1..4")
      ->check(CLI::Range(1, 4));
  cmd_check
      ->add_option("--class", ck_class, "static | add | remove")
      ->check(CLI::IsMember(
          {"static", "add", "remove", "add-link", "remove-link"}));
  cmd_check->add_option("--topo", ck_topo, "Topology or pair id");
  cmd_check->add_option("--scenario", ck_scenario, "Scenario 1..4")
      ->check(CLI::Range(1, 4));
  cmd_check->add_option("--trace", ck_trace,
                        "Write counterexample traces with this path prefix");
  cmd_check->add_option("--state-limit", ck_limit, "Explored-state cap");
  cmd_check->add_flag("--force-change", ck_force,
                      "Fire the topology change at the first opportunity");
  cmd_check->add_flag("--v3-reply-only", ck_v3ro,
                      "Narrow improved-duplicate handling to replies");
  cmd_check->add_option("--shuffle-seed", ck_seed,
                        "Permute expansion order (verdict-invariant)");

  // sweep
  auto* cmd_sweep =
      app.add_subcommand("sweep", "Run experiment grids, resumably");
  std::vector<int> sw_models = {1, 2, 3, 4};
  std::vector<std::string> sw_classes = {"all"};
  int sw_jobs = 0;
  std::string sw_out = "results";
  std::uint32_t sw_limit = 2'000'000;
  bool sw_force = false, sw_v3ro = false, sw_quiet = false;
  cmd_sweep->add_option("--models", sw_models, "Variants to run")
      ->check(CLI::Range(1, 4));
  cmd_sweep->add_option("--class", sw_classes,
                        "static | add | remove | all");
  cmd_sweep->add_option("--jobs", sw_jobs,
                        "Worker threads (0 = AODVMC_JOBS or hardware)");
  cmd_sweep->add_option("--out", sw_out, "Results directory");
  cmd_sweep->add_option("--state-limit", sw_limit, "Explored-state cap");
  cmd_sweep->add_flag("--force-change", sw_force,
                      "Fire topology changes at the first opportunity");
  cmd_sweep->add_flag("--v3-reply-only", sw_v3ro,
                      "Narrow improved-duplicate handling to replies");
  cmd_sweep->add_flag("--quiet", sw_quiet, "Suppress progress output");

  // report
  auto* cmd_report =
      app.add_subcommand("report", "Aggregate sweep results into a summary");
  std::string rp_format = "table3";
  std::string rp_out = "results";
  std::vector<int> rp_models = {1, 2, 3, 4};
  std::vector<std::string> rp_classes = {"all"};
  bool rp_per_instance = false;
  cmd_report->add_option("--format", rp_format, "table3 | csv")
      ->check(CLI::IsMember({"table3", "csv"}));
  cmd_report->add_option("--out", rp_out, "Results directory to read");
  cmd_report->add_option("--models", rp_models, "Variants to include")
      ->check(CLI::Range(1, 4));
  cmd_report->add_option("--class", rp_classes,
                         "static | add | remove | all");
  cmd_report->add_flag("--per-instance", rp_per_instance,
                       "Score each (topology, scenario) instance on its own "
                       "instead of requiring all four scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (cmd_enum->parsed()) return run_enum(enum_out);

    if (cmd_check->parsed()) {
      InstanceClass cls = parse_classes({ck_class}).at(0);
      Instance inst = build_instance(cls, ck_model, ck_topo, ck_scenario);
      inst.opts.state_limit = ck_limit;
      inst.opts.force_change = ck_force;
      inst.opts.v3_reply_only = ck_v3ro;
      inst.opts.shuffle_seed = ck_seed;
      return run_check(inst, ck_trace);
    }

    if (cmd_sweep->parsed()) {
      SweepOptions opts;
      opts.models = sw_models;
      opts.classes = parse_classes(sw_classes);
      opts.jobs = sw_jobs;
      opts.out_dir = sw_out;
      opts.state_limit = sw_limit;
      opts.force_change = sw_force;
      opts.v3_reply_only = sw_v3ro;
      if (!sw_quiet) {
        opts.progress = [](const std::string& line) {
          static std::size_t count = 0;
          if (++count % 200 == 0) std::cerr << line << "\n";
        };
      }
      std::size_t fresh = run_sweep(opts);
      std::cout << "computed " << fresh << " new cells in " << sw_out
                << "\n";
      return 0;
    }

    if (cmd_report->parsed()) {
      auto rows = load_and_aggregate(rp_out, rp_models,
                                     parse_classes(rp_classes),
                                     rp_per_instance);
      std::cout << (rp_format == "csv" ? render_summary_csv(rows)
                                       : render_summary_table(rows));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
