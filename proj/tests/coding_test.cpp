// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/coding.h"

#include <gtest/gtest.h>

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>

namespace metahive {
namespace {

TEST(Coding, Fixed32GoldenBytes) {
  std::string s;
  PutFixed32(&s, 0x04030201u);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(static_cast<unsigned char>(s[0]), 0x01);
  EXPECT_EQ(static_cast<unsigned char>(s[1]), 0x02);
  EXPECT_EQ(static_cast<unsigned char>(s[2]), 0x03);
  EXPECT_EQ(static_cast<unsigned char>(s[3]), 0x04);
  EXPECT_EQ(DecodeFixed32(s.data()), 0x04030201u);
}

TEST(Coding, Fixed64GoldenBytes) {
  std::string s;
  PutFixed64(&s, 0x0807060504030201ull);
  ASSERT_EQ(s.size(), 8u);
  for (int i = 0; i < 8; i++) {
    EXPECT_EQ(static_cast<unsigned char>(s[i]), i + 1);
  }
  EXPECT_EQ(DecodeFixed64(s.data()), 0x0807060504030201ull);
}

TEST(Coding, FixedRoundTripRandom) {
  std::mt19937_64 rng(20260816);
  for (int i = 0; i < 1000; i++) {
    uint64_t v64 = rng();
    uint32_t v32 = static_cast<uint32_t>(rng());
    std::string s;
    PutFixed64(&s, v64);
    PutFixed32(&s, v32);
    EXPECT_EQ(DecodeFixed64(s.data()), v64);
    EXPECT_EQ(DecodeFixed32(s.data() + 8), v32);
  }
}

TEST(Coding, VarintGoldenEncodings) {
  struct Case {
    uint64_t value;
    std::string bytes;
  };
  const Case cases[] = {
      {0, std::string("\x00", 1)},
      {1, "\x01"},
      {127, "\x7f"},
      {128, std::string("\x80\x01", 2)},
      {300, std::string("\xac\x02", 2)},
      {16383, "\xff\x7f"},
      {16384, std::string("\x80\x80\x01", 3)},
      {std::numeric_limits<uint64_t>::max(),
       "\xff\xff\xff\xff\xff\xff\xff\xff\xff\x01"},
  };
  for (const Case& c : cases) {
    std::string s;
    PutVarint64(&s, c.value);
    EXPECT_EQ(s, c.bytes) << c.value;
    EXPECT_EQ(VarintLength(c.value), c.bytes.size());
    std::string_view in(s);
    uint64_t decoded = 0;
    ASSERT_TRUE(GetVarint64(&in, &decoded));
    EXPECT_EQ(decoded, c.value);
    EXPECT_TRUE(in.empty());
  }
}

TEST(Coding, Varint32RejectsOversizedValue) {
  std::string s;
  PutVarint64(&s, (1ull << 32));
  std::string_view in(s);
  uint32_t v = 0;
  EXPECT_FALSE(GetVarint32(&in, &v));
}

TEST(Coding, VarintTruncationFails) {
  std::string s;
  PutVarint64(&s, 1u << 20);
  for (size_t cut = 0; cut < s.size(); cut++) {
    std::string_view in(s.data(), cut);
    uint64_t v;
    EXPECT_FALSE(GetVarint64(&in, &v)) << "prefix length " << cut;
  }
}

TEST(Coding, VarintRoundTripRandom) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5000; i++) {
    int bits = static_cast<int>(rng() % 64) + 1;
    uint64_t v = rng() >> (64 - bits);
    std::string s;
    PutVarint64(&s, v);
    EXPECT_EQ(s.size(), VarintLength(v));
    std::string_view in(s);
    uint64_t decoded = 0;
    ASSERT_TRUE(GetVarint64(&in, &decoded));
    EXPECT_EQ(decoded, v);
  }
}

TEST(Coding, VarintsConcatenateCleanly) {
  std::string s;
  for (uint32_t v = 0; v < 600; v += 7) PutVarint32(&s, v);
  std::string_view in(s);
  for (uint32_t v = 0; v < 600; v += 7) {
    uint32_t decoded = 0;
    ASSERT_TRUE(GetVarint32(&in, &decoded));
    EXPECT_EQ(decoded, v);
  }
  EXPECT_TRUE(in.empty());
}

TEST(Coding, LengthPrefixedRoundTrip) {
  std::string s;
  PutLengthPrefixed(&s, "");
  PutLengthPrefixed(&s, "abc");
  std::string big(300, 'x');
  PutLengthPrefixed(&s, big);

  std::string_view in(s);
  std::string_view out;
  ASSERT_TRUE(GetLengthPrefixed(&in, &out));
  EXPECT_EQ(out, "");
  ASSERT_TRUE(GetLengthPrefixed(&in, &out));
  EXPECT_EQ(out, "abc");
  ASSERT_TRUE(GetLengthPrefixed(&in, &out));
  EXPECT_EQ(out, big);
  EXPECT_TRUE(in.empty());
}

TEST(Coding, LengthPrefixedTruncatedBodyFails) {
  std::string s;
  PutLengthPrefixed(&s, "hello");
  s.resize(s.size() - 1);
  std::string_view in(s);
  std::string_view out;
  EXPECT_FALSE(GetLengthPrefixed(&in, &out));
}

}  // namespace
}  // namespace metahive
