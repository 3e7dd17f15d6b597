// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>

#include "metahive/integrity.h"
#include "metahive/status.h"

namespace metahive {

enum class EngineMode {
  kMetaHive,  // metadata injection at flush, repair during compaction
  kLegacy,    // metadata-unaware: plain flush, plain compaction
};

const char* EngineModeName(EngineMode mode);

struct Options {
  EngineMode mode = EngineMode::kMetaHive;
  uint32_t block_size_target = 4 * 1024;
  size_t memtable_budget = 4 * 1024 * 1024;
  int l0_trigger = 4;
  int level_ratio = 10;
  int max_retries = 3;
  bool wal = true;
  bool sync_wal = false;
  int hash_id = 1;
  // When set, flush and compaction run on a background thread; writes only
  // block when a sealed memtable is still being flushed. When clear, both
  // run inline in the writing thread.
  bool background_jobs = false;
  RepairConfig::Disposition on_persistent =
      RepairConfig::Disposition::kQuarantine;
  uint64_t max_output_file_bytes = 8 * 1024 * 1024;

  Status Validate() const;
};

// Plain-text key=value config, one pair per line, '#' comments. Unknown
// keys are errors. Keys: mode, block_size_target, memtable_budget,
// l0_trigger, level_ratio, max_retries, wal, sync_wal, hash_id,
// background_jobs, on_persistent, max_output_file_bytes.
Status ApplyConfigLine(std::string_view key, std::string_view value,
                       Options* opts);
Status LoadConfigFile(const std::string& path, Options* opts);

}  // namespace metahive
