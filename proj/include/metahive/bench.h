// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metahive/hash.h"
#include "metahive/options.h"
#include "metahive/status.h"
#include "metahive/workload.h"

namespace metahive {

// Three ways to run the same workload:
//   legacy    plain engine, no integrity anywhere
//   metahive  engine-managed checksum siblings; reads stay plain because
//             verification rides on compaction, not on the read path
//   embed     client-side baseline: a 24-byte payload appended to every
//             value, verified and stripped by the client on every read
enum class BenchMode { kLegacy = 0, kMetaHive = 1, kEmbed = 2 };

const char* BenchModeName(BenchMode mode);
Status ParseBenchMode(std::string_view name, BenchMode* mode);

// Appends the embed payload: value || [orig_seq=0][H(key)^H(value)][coc].
std::string EmbedWrap(std::string_view key, std::string_view value,
                      const HashFunction& hash);

// Verifies and strips the embed payload. False on short input or checksum
// mismatch; *value holds the stripped payload-free bytes on success.
bool EmbedUnwrap(std::string_view key, std::string_view stored,
                 const HashFunction& hash, std::string* value);

// Order statistics over one op class. The top count/100 samples are dropped
// as scheduler outliers before every statistic, including the mean.
struct LatencySummary {
  uint64_t count = 0;    // raw samples collected
  uint64_t dropped = 0;  // outliers trimmed (count / 100)
  uint64_t median_ns = 0;
  uint64_t p99_ns = 0;
  double mean_ns = 0;
};

// Sorts ascending, drops the top count/100, then takes
// median = kept[(m-1)/2] and p99 = kept[99*(m-1)/100] over the m kept.
LatencySummary Summarize(std::vector<uint64_t> samples_ns);

struct BenchConfig {
  std::string dir;  // engine directory; caller creates and cleans up
  BenchMode mode = BenchMode::kMetaHive;
  WorkloadConfig workload;
  uint64_t ops = 10000;
  // Load every key, flush, and compact before the timed phase so reads hit
  // settled SSTs rather than racing the initial fill.
  bool preload = true;
  // Optional binary latency log: one record per timed op,
  // [op u8 (0 get / 1 put)][latency ns u64 LE].
  std::string latency_log;
  Options engine;  // mode and hash come from the bench mode / engine dir
};

struct BenchReport {
  BenchMode mode = BenchMode::kMetaHive;
  uint64_t ops = 0;
  uint64_t gets = 0;
  uint64_t puts = 0;
  uint64_t get_misses = 0;       // NotFound reads (counted, still timed)
  uint64_t verify_failures = 0;  // embed mode: payload mismatches on read
  LatencySummary get_ns;
  LatencySummary put_ns;
  uint64_t wall_ns = 0;
  uint64_t data_bytes = 0;  // sum of data-area bytes over live SSTs at end
  uint64_t file_count = 0;
};

// Runs the workload against a fresh engine in cfg.dir. Timing wraps the
// full client-visible op: for embed reads that includes verify-and-strip.
Result<BenchReport> RunBench(const BenchConfig& cfg);

// Renders the report as sorted key=value lines, one per line.
std::string FormatBenchReport(const BenchReport& report);

// Storage cost of the checksum siblings, measured directly: the same KV set
// is flushed once through a legacy engine and once through a metahive
// engine (two subdirectories of work_dir), and the SST data areas are
// compared. predicted_metadata_bytes sums MetadataEntrySize over the Puts
// and must equal the measured difference exactly.
struct OverheadProbe {
  uint64_t put_entries = 0;
  uint64_t predicted_metadata_bytes = 0;
  uint64_t legacy_data_bytes = 0;
  uint64_t metahive_data_bytes = 0;

  uint64_t measured_metadata_bytes() const {
    return metahive_data_bytes - legacy_data_bytes;
  }
};

Result<OverheadProbe> ProbeStorageOverhead(
    const std::string& work_dir,
    const std::vector<std::pair<std::string, std::string>>& kvs,
    Options base);

}  // namespace metahive
