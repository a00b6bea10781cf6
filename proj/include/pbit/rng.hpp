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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

namespace pbit {

enum class RngKind : std::uint8_t { xoshiro128plus, lfsr16, lfsr32, mt_reference };

std::string_view to_string(RngKind kind);
RngKind parse_rng_kind(std::string_view name);

/// Every generator hands out 24-bit words; the uniform variate is word * 2^-24.
inline constexpr int kUniformBits = 24;
inline constexpr std::uint32_t kUniformRange = std::uint32_t{1} << kUniformBits;
inline constexpr double kUniformScale = 1.0 / kUniformRange;

/// Galois feedback masks of documented maximal-length polynomials:
/// x^16 + x^14 + x^13 + x^11 + 1 and x^32 + x^22 + x^2 + x + 1.
inline constexpr std::uint16_t kLfsr16Taps = 0xB400u;
inline constexpr std::uint32_t kLfsr32Taps = 0x80200003u;

std::uint64_t splitmix64(std::uint64_t& state);

class Xoshiro128Plus {
 public:
  explicit Xoshiro128Plus(std::array<std::uint32_t, 4> state) : s_(state) {}

  std::uint32_t next() noexcept {
    const std::uint32_t result = s_[0] + s_[3];
    const std::uint32_t t = s_[1] << 9;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = (s_[3] << 11) | (s_[3] >> 21);
    return result;
  }
  std::uint32_t bits24() noexcept { return next() >> 8; }
  const std::array<std::uint32_t, 4>& state() const noexcept { return s_; }

 private:
  std::array<std::uint32_t, 4> s_;
};

/// 16-bit Galois LFSR advanced one bit per draw; the whole register is the output word.
class Lfsr16 {
 public:
  explicit Lfsr16(std::uint16_t state) : s_(state == 0 ? 1 : state) {}

  std::uint16_t next() noexcept {
    const bool lsb = s_ & 1u;
    s_ = static_cast<std::uint16_t>(s_ >> 1);
    if (lsb) s_ ^= kLfsr16Taps;
    return s_;
  }
  std::uint32_t bits24() noexcept { return std::uint32_t{next()} << 8; }
  std::uint16_t state() const noexcept { return s_; }

 private:
  std::uint16_t s_;
};

/// 32-bit Galois LFSR advanced one bit per draw; output is the top 24 bits of the register.
class Lfsr32 {
 public:
  explicit Lfsr32(std::uint32_t state) : s_(state == 0 ? 1 : state) {}

  std::uint32_t next() noexcept {
    const bool lsb = s_ & 1u;
    s_ >>= 1;
    if (lsb) s_ ^= kLfsr32Taps;
    return s_;
  }
  std::uint32_t bits24() noexcept { return next() >> 8; }
  std::uint32_t state() const noexcept { return s_; }

 private:
  std::uint32_t s_;
};

/// 32-bit Mersenne twister, the high-quality software reference.
class Mt19937Reference {
 public:
  explicit Mt19937Reference(std::uint32_t seed) : engine_(seed) {}

  std::uint32_t next() { return static_cast<std::uint32_t>(engine_()); }
  std::uint32_t bits24() { return next() >> 8; }

 private:
  std::mt19937 engine_;
};

/// One reproducible random stream.
class RngStream {
 public:
  using Generator = std::variant<Xoshiro128Plus, Lfsr16, Lfsr32, Mt19937Reference>;

  RngStream(RngKind kind, std::uint64_t stream_id, Generator generator)
      : kind_(kind), stream_id_(stream_id), gen_(std::move(generator)) {}

  RngKind kind() const noexcept { return kind_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  const Generator& generator() const noexcept { return gen_; }

  std::uint32_t next_bits24() {
    return std::visit([](auto& g) { return g.bits24(); }, gen_);
  }
  /// Uniform variate in [0, 1).
  double next_uniform() { return next_bits24() * kUniformScale; }

 private:
  RngKind kind_;
  std::uint64_t stream_id_;
  Generator gen_;
};

/// Stream for (seed, stream_id): both are hashed through splitmix64 before
/// seeding, so neighboring ids start from unrelated states.
RngStream split(RngKind kind, std::uint64_t seed, std::uint64_t stream_id);

template <class G>
G make_generator(std::uint64_t seed, std::uint64_t stream_id);
template <>
Xoshiro128Plus make_generator<Xoshiro128Plus>(std::uint64_t seed, std::uint64_t stream_id);
template <>
Lfsr16 make_generator<Lfsr16>(std::uint64_t seed, std::uint64_t stream_id);
template <>
Lfsr32 make_generator<Lfsr32>(std::uint64_t seed, std::uint64_t stream_id);
template <>
Mt19937Reference make_generator<Mt19937Reference>(std::uint64_t seed, std::uint64_t stream_id);

/// Random source for one run of the engines: one stream per p-bit for the
/// hardware-style generators, a single shared stream for the Mersenne-twister
/// reference (one software generator per run).
class RngBank {
 public:
  RngBank(RngKind kind, std::uint64_t seed, std::uint64_t run, std::size_t pbits);

  RngKind kind() const noexcept { return kind_; }

  std::uint32_t bits24(std::size_t pbit) {
    return std::visit([pbit](auto& streams) { return draw(streams, pbit); }, streams_);
  }
  double uniform(std::size_t pbit) { return bits24(pbit) * kUniformScale; }

  /// Visits the typed stream storage; used by the hot loops.
  template <class F>
  decltype(auto) visit(F&& f) {
    return std::visit(std::forward<F>(f), streams_);
  }

  /// Per-run auxiliary stream (phase shuffles, attempt clocks that are not per p-bit).
  Xoshiro128Plus& auxiliary() noexcept { return aux_; }

  struct Shared {
    Mt19937Reference gen;
  };

  template <class G>
  static std::uint32_t draw(std::vector<G>& streams, std::size_t pbit) {
    return streams[pbit].bits24();
  }
  static std::uint32_t draw(Shared& shared, std::size_t) { return shared.gen.bits24(); }

 private:
  RngKind kind_;
  std::variant<std::vector<Xoshiro128Plus>, std::vector<Lfsr16>, std::vector<Lfsr32>, Shared> streams_;
  Xoshiro128Plus aux_;
};

/// Stream id of p-bit `pbit` in run `run`.
inline std::uint64_t stream_id(std::uint64_t run, std::uint64_t pbit) { return (run << 32) | pbit; }

}  // namespace pbit
