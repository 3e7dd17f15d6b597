// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/bench.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <sstream>

#include "metahive/coding.h"
#include "metahive/engine.h"
#include "metahive/env.h"
#include "metahive/metadata.h"
#include "metahive/table_reader.h"

namespace metahive {

namespace {

using Clock = std::chrono::steady_clock;

uint64_t ElapsedNs(Clock::time_point start, Clock::time_point end) {
  return static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(end - start)
          .count());
}

// Sum of the data-area sizes (everything before the index block) over the
// engine's live SSTs.
Status SumDataBytes(Engine& engine, uint64_t* data_bytes,
                    uint64_t* file_count) {
  *data_bytes = 0;
  *file_count = 0;
  for (const Engine::LiveFile& file : engine.ListLiveFiles()) {
    auto reader = TableReader::Open(file.path);
    if (!reader.ok()) return reader.status();
    *data_bytes += (*reader)->footer().index_offset;
    *file_count += 1;
  }
  return Status::OK();
}

}  // namespace

const char* BenchModeName(BenchMode mode) {
  switch (mode) {
    case BenchMode::kLegacy:
      return "legacy";
    case BenchMode::kMetaHive:
      return "metahive";
    case BenchMode::kEmbed:
      return "embed";
  }
  return "unknown";
}

Status ParseBenchMode(std::string_view name, BenchMode* mode) {
  if (name == "legacy") {
    *mode = BenchMode::kLegacy;
  } else if (name == "metahive") {
    *mode = BenchMode::kMetaHive;
  } else if (name == "embed") {
    *mode = BenchMode::kEmbed;
  } else {
    return Status::InvalidArgument("unknown bench mode: " +
                                   std::string(name));
  }
  return Status::OK();
}

std::string EmbedWrap(std::string_view key, std::string_view value,
                      const HashFunction& hash) {
  // The client has no sequence number or entry type, so the payload binds
  // key and value only; orig_seq stays zero.
  uint64_t checksum = hash.evaluate(key) ^ hash.evaluate(value);
  MetadataPayload payload = BuildMetadataPayload(0, checksum, hash);
  std::string stored(value);
  EncodeMetadataPayload(payload, &stored);
  return stored;
}

bool EmbedUnwrap(std::string_view key, std::string_view stored,
                 const HashFunction& hash, std::string* value) {
  if (stored.size() < kMetadataPayloadSize) return false;
  std::string_view body = stored.substr(0, stored.size() - kMetadataPayloadSize);
  std::string_view tail = stored.substr(stored.size() - kMetadataPayloadSize);
  MetadataPayload payload;
  if (!ParseMetadataPayload(tail, &payload)) return false;
  uint64_t expect = hash.evaluate(key) ^ hash.evaluate(body);
  if (payload.checksum != expect) return false;
  value->assign(body);
  return true;
}

LatencySummary Summarize(std::vector<uint64_t> samples_ns) {
  LatencySummary out;
  out.count = samples_ns.size();
  if (samples_ns.empty()) return out;
  std::sort(samples_ns.begin(), samples_ns.end());
  out.dropped = samples_ns.size() / 100;
  size_t m = samples_ns.size() - out.dropped;  // >= 1 whenever count >= 1
  out.median_ns = samples_ns[(m - 1) / 2];
  out.p99_ns = samples_ns[(99 * (m - 1)) / 100];
  double sum = 0;
  for (size_t i = 0; i < m; i++) sum += static_cast<double>(samples_ns[i]);
  out.mean_ns = sum / static_cast<double>(m);
  return out;
}

Result<BenchReport> RunBench(const BenchConfig& cfg) {
  Status ws = ValidateWorkloadConfig(cfg.workload);
  if (!ws.ok()) return ws;
  if (cfg.dir.empty()) {
    return Status::InvalidArgument("bench dir must not be empty");
  }

  Options opts = cfg.engine;
  opts.mode = cfg.mode == BenchMode::kMetaHive ? EngineMode::kMetaHive
                                               : EngineMode::kLegacy;
  auto open = Engine::Open(cfg.dir, opts);
  if (!open.ok()) return open.status();
  Engine& engine = **open;
  const HashFunction& hash = engine.hash();
  const bool embed = cfg.mode == BenchMode::kEmbed;

  BenchReport report;
  report.mode = cfg.mode;
  report.ops = cfg.ops;

  if (cfg.preload) {
    for (uint64_t id = 0; id < cfg.workload.key_count; id++) {
      std::string key = WorkloadKey(id, cfg.workload.key_size);
      std::string value =
          WorkloadValue(id, cfg.workload.value_size, cfg.workload.seed);
      if (embed) value = EmbedWrap(key, value, hash);
      Status s = engine.Put(key, value).status();
      if (!s.ok()) return s;
    }
    Status s = engine.Flush();
    if (!s.ok()) return s;
    auto compacted = engine.CompactAll();
    if (!compacted.ok()) return compacted.status();
  }

  WorkloadGenerator gen(cfg.workload);
  std::vector<uint64_t> get_ns;
  std::vector<uint64_t> put_ns;
  get_ns.reserve(cfg.ops);
  put_ns.reserve(cfg.ops);
  std::string log;
  if (!cfg.latency_log.empty()) log.reserve(cfg.ops * 9);

  Clock::time_point wall_start = Clock::now();
  for (uint64_t i = 0; i < cfg.ops; i++) {
    WorkloadOp op = gen.Next();
    uint64_t ns = 0;
    if (op.type == OpType::kGet) {
      Clock::time_point t0 = Clock::now();
      auto read = engine.Get(op.key);
      bool verified = true;
      std::string client_value;
      if (read.ok() && embed) {
        verified = EmbedUnwrap(op.key, *read, hash, &client_value);
      }
      ns = ElapsedNs(t0, Clock::now());
      if (!read.ok()) {
        if (read.status().code() != Status::Code::kNotFound) {
          return read.status();
        }
        report.get_misses++;
      } else if (!verified) {
        report.verify_failures++;
      }
      report.gets++;
      get_ns.push_back(ns);
    } else {
      std::string value =
          embed ? EmbedWrap(op.key, op.value, hash) : std::move(op.value);
      Clock::time_point t0 = Clock::now();
      auto wrote = engine.Put(op.key, value);
      ns = ElapsedNs(t0, Clock::now());
      if (!wrote.ok()) return wrote.status();
      report.puts++;
      put_ns.push_back(ns);
    }
    if (!cfg.latency_log.empty()) {
      log.push_back(op.type == OpType::kGet ? '\x00' : '\x01');
      PutFixed64(&log, ns);
    }
  }
  report.wall_ns = ElapsedNs(wall_start, Clock::now());

  Status stats = SumDataBytes(engine, &report.data_bytes, &report.file_count);
  if (!stats.ok()) return stats;
  report.get_ns = Summarize(std::move(get_ns));
  report.put_ns = Summarize(std::move(put_ns));

  if (!cfg.latency_log.empty()) {
    Status ls = WriteFileAtomic(cfg.latency_log, log);
    if (!ls.ok()) return ls;
  }
  Status cs = engine.Close();
  if (!cs.ok()) return cs;
  return report;
}

std::string FormatBenchReport(const BenchReport& report) {
  std::map<std::string, std::string> rows;
  rows["mode"] = BenchModeName(report.mode);
  rows["ops"] = std::to_string(report.ops);
  rows["gets"] = std::to_string(report.gets);
  rows["puts"] = std::to_string(report.puts);
  rows["get_misses"] = std::to_string(report.get_misses);
  rows["verify_failures"] = std::to_string(report.verify_failures);
  rows["get_median_ns"] = std::to_string(report.get_ns.median_ns);
  rows["get_p99_ns"] = std::to_string(report.get_ns.p99_ns);
  rows["get_mean_ns"] = std::to_string(report.get_ns.mean_ns);
  rows["put_median_ns"] = std::to_string(report.put_ns.median_ns);
  rows["put_p99_ns"] = std::to_string(report.put_ns.p99_ns);
  rows["put_mean_ns"] = std::to_string(report.put_ns.mean_ns);
  rows["wall_ns"] = std::to_string(report.wall_ns);
  rows["data_bytes"] = std::to_string(report.data_bytes);
  rows["file_count"] = std::to_string(report.file_count);
  std::ostringstream out;
  for (const auto& [key, value] : rows) out << key << "=" << value << "\n";
  return out.str();
}

Result<OverheadProbe> ProbeStorageOverhead(
    const std::string& work_dir,
    const std::vector<std::pair<std::string, std::string>>& kvs,
    Options base) {
  Status ds = CreateDirIfMissing(work_dir);
  if (!ds.ok()) return ds;

  OverheadProbe probe;
  probe.put_entries = kvs.size();
  for (const auto& [key, value] : kvs) {
    probe.predicted_metadata_bytes += MetadataEntrySize(key.size());
  }

  struct Leg {
    EngineMode mode;
    const char* subdir;
    uint64_t* data_bytes;
  };
  Leg legs[2] = {
      {EngineMode::kLegacy, "legacy", &probe.legacy_data_bytes},
      {EngineMode::kMetaHive, "metahive", &probe.metahive_data_bytes},
  };
  for (const Leg& leg : legs) {
    Options opts = base;
    opts.mode = leg.mode;
    auto open = Engine::Open(work_dir + "/" + leg.subdir, opts);
    if (!open.ok()) return open.status();
    Engine& engine = **open;
    for (const auto& [key, value] : kvs) {
      Status s = engine.Put(key, value).status();
      if (!s.ok()) return s;
    }
    Status s = engine.Flush();
    if (!s.ok()) return s;
    uint64_t files = 0;
    s = SumDataBytes(engine, leg.data_bytes, &files);
    if (!s.ok()) return s;
    s = engine.Close();
    if (!s.ok()) return s;
  }
  return probe;
}

}  // namespace metahive
