// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/log_record.h"

#include <zlib.h>

#include "metahive/coding.h"

namespace metahive {

uint32_t Crc32(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()),
              static_cast<uInt>(data.size()));
  return static_cast<uint32_t>(crc);
}

void AppendLogRecord(std::string* dst, std::string_view payload) {
  PutFixed32(dst, static_cast<uint32_t>(payload.size()));
  PutFixed32(dst, Crc32(payload));
  dst->append(payload.data(), payload.size());
}

LogTail ReadLogRecords(std::string_view data, std::vector<std::string>* records,
                       size_t* valid_prefix) {
  size_t consumed = 0;
  while (consumed < data.size()) {
    std::string_view rest = data.substr(consumed);
    if (rest.size() < kLogFrameHeaderSize) {
      *valid_prefix = consumed;
      return LogTail::kTruncatedTail;
    }
    uint32_t length = DecodeFixed32(rest.data());
    uint32_t expected_crc = DecodeFixed32(rest.data() + 4);
    if (length > kMaxLogRecordSize) {
      *valid_prefix = consumed;
      return LogTail::kBadRecord;
    }
    if (rest.size() < kLogFrameHeaderSize + length) {
      *valid_prefix = consumed;
      return LogTail::kTruncatedTail;
    }
    std::string_view payload = rest.substr(kLogFrameHeaderSize, length);
    if (Crc32(payload) != expected_crc) {
      *valid_prefix = consumed;
      return LogTail::kBadRecord;
    }
    records->emplace_back(payload);
    consumed += kLogFrameHeaderSize + length;
  }
  *valid_prefix = consumed;
  return LogTail::kClean;
}

}  // namespace metahive
