// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "metahive/options.h"
#include "metahive/sim/cluster.h"
#include "metahive/sim/fault.h"
#include "metahive/status.h"

namespace metahive::sim {

// Line-oriented scenario scripts drive the cluster. '#' starts a comment,
// blank lines are skipped, tokens are whitespace-separated (keys and values
// therefore cannot contain spaces). Commands:
//
//   NODE <name> <metahive|legacy>      add a node
//   ROUTE <prefix|*> <node>            set a routing rule (* = catch-all)
//   REASSIGN <prefix|*> <node>         alias of ROUTE, reads better later
//   LOAD <prefix> <count> <value_size> bulk-put prefix+00000000..count-1
//   PUT <key> <value>                  routed write
//   DEL <key>                          routed delete
//   GET <key>                          routed read (hit/miss counted)
//   SCAN <lo> <hi>                     fan-out scan, leakage-checked
//   FLUSH <node|*>                     flush one node or all
//   COMPACT <node|*>                   compact one node or all; see below
//   MIGRATE <from> <file_no|oldest> <to>  move one SST between nodes
//   INJECT <node> <value|meta_checksum|meta_coc> <p>
//                                      bit-flip faults over the node's SSTs
//   ASSERT ...                         see below
//
// COMPACT runs level compactions until the node's data sits in one level;
// if it already does, that level is pushed down once so every entry still
// passes through verification. Around a legacy node's COMPACT the runner
// takes a metadata census and accumulates the drop as metadata_purged.
// After any COMPACT, repair incidents are matched against pending injected
// faults by (cluster key, sequence); a detectable fault whose file was
// compacted but produced no incident is recorded as a failure.
//
// ASSERT forms:
//   ASSERT get <key> value <v>       routed read returns exactly v
//   ASSERT get <key> present         routed read finds the key
//   ASSERT get <key> missing         routed read reports not-found
//   ASSERT leakage <n>               metadata keys seen by clients so far
//   ASSERT detected all|<n>          matched injected faults
//   ASSERT census <node> metadata <n>  metadata entries in the node's SSTs
//   ASSERT verified <node> all       every live key on the node reads back
//                                    fully validated with metadata present
//   ASSERT scan_count <lo> <hi> <n>  fan-out scan returns exactly n items
//
// Assertion failures do not stop the script; they are recorded in the
// report. Malformed commands and engine errors stop it with an error.

struct NodeReport {
  std::string mode;
  uint64_t files = 0;
  uint64_t entries = 0;
  uint64_t metadata_entries = 0;
  uint64_t put_entries = 0;
  uint64_t tombstones = 0;
  uint64_t data_bytes = 0;
};

struct ScenarioReport {
  uint64_t commands = 0;
  uint64_t puts = 0;
  uint64_t dels = 0;
  uint64_t gets = 0;
  uint64_t get_hits = 0;
  uint64_t get_misses = 0;
  uint64_t scans = 0;
  uint64_t scanned_items = 0;
  uint64_t loads = 0;          // keys written by LOAD
  uint64_t flushes = 0;
  uint64_t compactions = 0;    // level compactions executed
  uint64_t migrations = 0;
  uint64_t leaked_metadata_keys = 0;
  uint64_t faults_injected = 0;
  uint64_t faults_detectable = 0;
  uint64_t faults_undetectable = 0;  // meta_coc flips, invisible by design
  uint64_t faults_detected = 0;
  uint64_t metadata_purged = 0;   // census drop across legacy compactions
  uint64_t repair_validated = 0;
  uint64_t repair_regenerated = 0;
  uint64_t repair_recovered = 0;
  uint64_t repair_quarantined = 0;
  uint64_t repair_metadata_created = 0;
  uint64_t repair_orphans_dropped = 0;
  uint64_t assertions = 0;
  std::vector<std::string> failures;  // failed assertions, missed faults
  std::map<std::string, NodeReport> nodes;

  bool ok() const { return failures.empty(); }
};

// Deterministic renderings: same report, same bytes.
std::string ScenarioReportJson(const ScenarioReport& report);
std::string ScenarioReportText(const ScenarioReport& report);

// Canned three-node heterogeneous scenario (one metadata-aware node, two
// plain ones): hidden siblings, migration both ways, automatic cleanup,
// adoption, fault injection and detection.
extern const char kHetero3Scenario[];

// Looks up a canned scenario by name ("hetero3"), or empty for unknown.
std::string_view FindCannedScenario(std::string_view name);

class ScenarioRunner {
 public:
  // root_dir hosts the node engines; seed drives fault injection draws.
  ScenarioRunner(std::string root_dir, uint64_t seed, Options base = {});

  // Runs the whole script. Errors carry the 1-based line number.
  Result<ScenarioReport> Run(std::string_view script);

 private:
  Status RunCommand(const std::vector<std::string>& tokens);
  Status RunAssert(const std::vector<std::string>& tokens);
  Status RunCompact(const std::string& node_name);
  Status RunInject(const std::string& node_name, FaultField field, double p);
  Result<uint64_t> ParseFileNo(SimNode* node, const std::string& token);
  Status FillNodeReports();

  std::string root_;
  std::mt19937_64 rng_;
  Options base_;
  std::unique_ptr<Cluster> cluster_;
  ScenarioReport report_;
  // Injected faults not yet consumed by a compaction, keyed by node name
  // and the file they live in. Migration re-keys them.
  std::map<std::string, std::map<uint64_t, std::vector<FaultRecord>>> pending_;
};

}  // namespace metahive::sim
