// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/options.h"

#include <charconv>

#include "metahive/env.h"
#include "metahive/hash.h"

namespace metahive {

const char* EngineModeName(EngineMode mode) {
  return mode == EngineMode::kMetaHive ? "metahive" : "legacy";
}

Status Options::Validate() const {
  if (block_size_target < 64) {
    return Status::InvalidArgument("block_size_target too small");
  }
  if (memtable_budget < 1024) {
    return Status::InvalidArgument("memtable_budget too small");
  }
  if (l0_trigger < 1) return Status::InvalidArgument("l0_trigger must be >= 1");
  if (level_ratio < 2) return Status::InvalidArgument("level_ratio too small");
  if (max_retries < 0) {
    return Status::InvalidArgument("max_retries must be >= 0");
  }
  if (FindHashFunction(hash_id) == nullptr) {
    return Status::InvalidArgument("unknown hash_id");
  }
  if (max_output_file_bytes < block_size_target) {
    return Status::InvalidArgument("max_output_file_bytes below block size");
  }
  return Status::OK();
}

namespace {

bool ParseUint(std::string_view v, uint64_t* out) {
  if (v.empty()) return false;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), *out);
  return ec == std::errc() && ptr == v.data() + v.size();
}

bool ParseBool(std::string_view v, bool* out) {
  if (v == "on" || v == "true" || v == "1") {
    *out = true;
    return true;
  }
  if (v == "off" || v == "false" || v == "0") {
    *out = false;
    return true;
  }
  return false;
}

}  // namespace

Status ApplyConfigLine(std::string_view key, std::string_view value,
                       Options* opts) {
  uint64_t n = 0;
  bool b = false;
  if (key == "mode") {
    if (value == "metahive") {
      opts->mode = EngineMode::kMetaHive;
    } else if (value == "legacy") {
      opts->mode = EngineMode::kLegacy;
    } else {
      return Status::InvalidArgument("mode must be metahive or legacy");
    }
  } else if (key == "block_size_target") {
    if (!ParseUint(value, &n)) return Status::InvalidArgument("bad number");
    opts->block_size_target = static_cast<uint32_t>(n);
  } else if (key == "memtable_budget") {
    if (!ParseUint(value, &n)) return Status::InvalidArgument("bad number");
    opts->memtable_budget = n;
  } else if (key == "l0_trigger") {
    if (!ParseUint(value, &n)) return Status::InvalidArgument("bad number");
    opts->l0_trigger = static_cast<int>(n);
  } else if (key == "level_ratio") {
    if (!ParseUint(value, &n)) return Status::InvalidArgument("bad number");
    opts->level_ratio = static_cast<int>(n);
  } else if (key == "max_retries") {
    if (!ParseUint(value, &n)) return Status::InvalidArgument("bad number");
    opts->max_retries = static_cast<int>(n);
  } else if (key == "wal") {
    if (!ParseBool(value, &b)) return Status::InvalidArgument("bad bool");
    opts->wal = b;
  } else if (key == "sync_wal") {
    if (!ParseBool(value, &b)) return Status::InvalidArgument("bad bool");
    opts->sync_wal = b;
  } else if (key == "hash_id") {
    if (!ParseUint(value, &n)) return Status::InvalidArgument("bad number");
    opts->hash_id = static_cast<int>(n);
  } else if (key == "background_jobs") {
    if (!ParseBool(value, &b)) return Status::InvalidArgument("bad bool");
    opts->background_jobs = b;
  } else if (key == "on_persistent") {
    if (value == "quarantine") {
      opts->on_persistent = RepairConfig::Disposition::kQuarantine;
    } else if (value == "abort") {
      opts->on_persistent = RepairConfig::Disposition::kAbort;
    } else {
      return Status::InvalidArgument("on_persistent: quarantine or abort");
    }
  } else if (key == "max_output_file_bytes") {
    if (!ParseUint(value, &n)) return Status::InvalidArgument("bad number");
    opts->max_output_file_bytes = n;
  } else {
    return Status::InvalidArgument("unknown config key: " + std::string(key));
  }
  return Status::OK();
}

Status LoadConfigFile(const std::string& path, Options* opts) {
  std::string data;
  Status s = ReadFileToString(path, &data);
  if (!s.ok()) return s;
  size_t line_no = 0;
  std::string_view rest = data;
  while (!rest.empty()) {
    size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = (nl == std::string_view::npos) ? std::string_view()
                                          : rest.substr(nl + 1);
    line_no++;
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                             line.back() == '\r')) {
      line.remove_suffix(1);
    }
    if (line.empty() || line.front() == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      return Status::InvalidArgument("config line " + std::to_string(line_no) +
                                     ": expected key=value");
    }
    s = ApplyConfigLine(line.substr(0, eq), line.substr(eq + 1), opts);
    if (!s.ok()) {
      return Status::InvalidArgument("config line " + std::to_string(line_no) +
                                     ": " + s.message());
    }
  }
  return Status::OK();
}

}  // namespace metahive
