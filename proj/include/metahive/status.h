// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>

namespace metahive {

// Outcome of an operation. Ok statuses carry no message; everything else
// carries a code and a human-readable detail string.
class Status {
 public:
  enum class Code {
    kOk = 0,
    kNotFound,
    kInvalidKey,
    kInvalidArgument,
    kFormatError,
    kCorruption,
    kIOError,
    kRejectFile,
    kFlushError,
    kCompactionError,
    kClosed,
  };

  Status() : code_(Code::kOk) {}

  static Status OK() { return Status(); }
  static Status NotFound(std::string msg = "not found") {
    return Status(Code::kNotFound, std::move(msg));
  }
  static Status InvalidKey(std::string msg) {
    return Status(Code::kInvalidKey, std::move(msg));
  }
  static Status InvalidArgument(std::string msg) {
    return Status(Code::kInvalidArgument, std::move(msg));
  }
  static Status FormatError(std::string msg) {
    return Status(Code::kFormatError, std::move(msg));
  }
  static Status Corruption(std::string msg) {
    return Status(Code::kCorruption, std::move(msg));
  }
  static Status IOError(std::string msg) {
    return Status(Code::kIOError, std::move(msg));
  }
  static Status RejectFile(std::string msg) {
    return Status(Code::kRejectFile, std::move(msg));
  }
  static Status FlushError(std::string msg) {
    return Status(Code::kFlushError, std::move(msg));
  }
  static Status CompactionError(std::string msg) {
    return Status(Code::kCompactionError, std::move(msg));
  }
  static Status Closed() { return Status(Code::kClosed, "engine closed"); }

  bool ok() const { return code_ == Code::kOk; }
  bool IsNotFound() const { return code_ == Code::kNotFound; }
  Code code() const { return code_; }
  const std::string& message() const { return message_; }

  std::string ToString() const {
    if (ok()) return "OK";
    return std::string(CodeName(code_)) + ": " + message_;
  }

  static const char* CodeName(Code c) {
    switch (c) {
      case Code::kOk: return "OK";
      case Code::kNotFound: return "NotFound";
      case Code::kInvalidKey: return "InvalidKey";
      case Code::kInvalidArgument: return "InvalidArgument";
      case Code::kFormatError: return "FormatError";
      case Code::kCorruption: return "Corruption";
      case Code::kIOError: return "IOError";
      case Code::kRejectFile: return "RejectFile";
      case Code::kFlushError: return "FlushError";
      case Code::kCompactionError: return "CompactionError";
      case Code::kClosed: return "Closed";
    }
    return "Unknown";
  }

  // Prefer the named factories; this form exists for code that re-wraps an
  // existing status with added context while preserving its code.
  Status(Code code, std::string msg) : code_(code), message_(std::move(msg)) {}

 private:
  Code code_;
  std::string message_;
};

// A Status plus a value on success.
template <typename T>
class Result {
 public:
  Result(T value) : status_(Status::OK()), value_(std::move(value)) {}
  Result(Status status) : status_(std::move(status)) {}

  bool ok() const { return status_.ok(); }
  const Status& status() const { return status_; }

  T& value() { return *value_; }
  const T& value() const { return *value_; }
  T* operator->() { return &*value_; }
  const T* operator->() const { return &*value_; }
  T& operator*() { return *value_; }
  const T& operator*() const { return *value_; }

 private:
  Status status_;
  std::optional<T> value_;
};

}  // namespace metahive
