/*
Copyright 2026 The pbit-pimc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <cmath>
#include <set>

#include "pbit/rng.hpp"

using namespace pbit;

namespace {

// Straight transcription of the published xoshiro128+ step.
struct RefXoshiro {
  std::uint32_t s[4];
  static std::uint32_t rotl(std::uint32_t x, int k) { return (x << k) | (x >> (32 - k)); }
  std::uint32_t next() {
    const std::uint32_t result = s[0] + s[3];
    const std::uint32_t t = s[1] << 9;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 11);
    return result;
  }
};

}  // namespace

TEST_SUITE("rng") {
  TEST_CASE("xoshiro128+ matches the reference step") {
    Xoshiro128Plus g({1, 2, 3, 4});
    RefXoshiro ref{{1, 2, 3, 4}};
    CHECK(g.next() == 5u);
    ref.next();
    for (int k = 0; k < 1000; ++k) CHECK(g.next() == ref.next());
  }

  TEST_CASE("lfsr16 is maximal length") {
    Lfsr16 g(1);
    std::uint32_t period = 0;
    do {
      g.next();
      ++period;
    } while (g.state() != 1 && period < 70000);
    CHECK(period == 65535);
  }

  TEST_CASE("lfsr32 has no short cycle") {
    Lfsr32 g(1);
    bool returned = false;
    for (int k = 0; k < 5000000 && !returned; ++k) {
      g.next();
      returned = g.state() == 1;
    }
    CHECK_FALSE(returned);
    CHECK(Lfsr32(0).state() != 0);
  }

  TEST_CASE("uniforms are 24-bit and centered") {
    for (RngKind kind : {RngKind::xoshiro128plus, RngKind::lfsr32, RngKind::mt_reference}) {
      auto st = split(kind, 42, 7);
      double sum = 0.0;
      const int n = 200000;
      for (int k = 0; k < n; ++k) {
        const auto bits = st.next_bits24();
        REQUIRE(bits < kUniformRange);
        sum += bits * kUniformScale;
      }
      CAPTURE(to_string(kind));
      CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
    }
  }

  TEST_CASE("streams are reproducible and distinct") {
    auto a = split(RngKind::xoshiro128plus, 1, stream_id(0, 0));
    auto b = split(RngKind::xoshiro128plus, 1, stream_id(0, 0));
    auto c = split(RngKind::xoshiro128plus, 1, stream_id(0, 1));
    auto d = split(RngKind::xoshiro128plus, 1, stream_id(1, 0));
    int same_c = 0, same_d = 0;
    for (int k = 0; k < 100; ++k) {
      const auto va = a.next_bits24();
      CHECK(va == b.next_bits24());
      same_c += va == c.next_bits24();
      same_d += va == d.next_bits24();
    }
    CHECK(same_c < 3);
    CHECK(same_d < 3);
    CHECK(stream_id(3, 5) == ((std::uint64_t{3} << 32) | 5));
  }

  TEST_CASE("bank draws come from per-p-bit streams") {
    RngBank bank(RngKind::xoshiro128plus, 9, 2, 16);
    for (std::size_t i : {0u, 5u, 15u}) {
      auto ref = split(RngKind::xoshiro128plus, 9, stream_id(2, i));
      for (int k = 0; k < 10; ++k) CHECK(bank.bits24(i) == ref.next_bits24());
    }
    CHECK(parse_rng_kind("lfsr16") == RngKind::lfsr16);
    CHECK_THROWS(parse_rng_kind("rdrand"));
  }
}
