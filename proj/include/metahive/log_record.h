// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "metahive/status.h"

namespace metahive {

// Shared framing for the WAL, the manifest, and the quarantine log:
//   u32 payload length | u32 CRC32(payload) | payload
// Records never span frames; large payloads get large frames.

inline constexpr size_t kLogFrameHeaderSize = 8;
inline constexpr uint32_t kMaxLogRecordSize = 128u << 20;

uint32_t Crc32(std::string_view data);

void AppendLogRecord(std::string* dst, std::string_view payload);

enum class LogTail {
  kClean,          // every byte consumed by valid frames
  kTruncatedTail,  // a partial frame at the end (torn write)
  kBadRecord,      // CRC mismatch or implausible length
};

// Parses frames from the front of data, appending payloads to *records until
// the first defect. *valid_prefix is the byte length of the parsed frames.
// Callers decide whether a non-clean tail is recoverable (WAL: truncate and
// continue) or fatal (manifest: corruption).
LogTail ReadLogRecords(std::string_view data, std::vector<std::string>* records,
                       size_t* valid_prefix);

}  // namespace metahive
