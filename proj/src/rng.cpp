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

#include "pbit/rng.hpp"

#include <stdexcept>
#include <string>

namespace pbit {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream_id) {
  return mix64(seed + mix64(stream_id + 0x632BE59BD9B4E019ull));
}

constexpr std::uint64_t kAuxiliaryPbit = 0xFFFFFFFFull;
constexpr std::uint64_t kSharedPbit = 0xFFFFFFFEull;

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  return mix64(state);
}

template <>
Xoshiro128Plus make_generator<Xoshiro128Plus>(std::uint64_t seed, std::uint64_t id) {
  std::uint64_t key = stream_key(seed, id);
  std::array<std::uint32_t, 4> s{};
  do {
    const std::uint64_t a = splitmix64(key);
    const std::uint64_t b = splitmix64(key);
    s = {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
         static_cast<std::uint32_t>(b >> 32)};
  } while (s[0] == 0 && s[1] == 0 && s[2] == 0 && s[3] == 0);
  return Xoshiro128Plus(s);
}

template <>
Lfsr16 make_generator<Lfsr16>(std::uint64_t seed, std::uint64_t id) {
  std::uint64_t key = stream_key(seed, id);
  std::uint16_t s = 0;
  while (s == 0) s = static_cast<std::uint16_t>(splitmix64(key) >> 48);
  return Lfsr16(s);
}

template <>
Lfsr32 make_generator<Lfsr32>(std::uint64_t seed, std::uint64_t id) {
  std::uint64_t key = stream_key(seed, id);
  std::uint32_t s = 0;
  while (s == 0) s = static_cast<std::uint32_t>(splitmix64(key) >> 32);
  return Lfsr32(s);
}

template <>
Mt19937Reference make_generator<Mt19937Reference>(std::uint64_t seed, std::uint64_t id) {
  std::uint64_t key = stream_key(seed, id);
  return Mt19937Reference(static_cast<std::uint32_t>(splitmix64(key) >> 32));
}

RngStream split(RngKind kind, std::uint64_t seed, std::uint64_t id) {
  switch (kind) {
    case RngKind::xoshiro128plus: return {kind, id, make_generator<Xoshiro128Plus>(seed, id)};
    case RngKind::lfsr16: return {kind, id, make_generator<Lfsr16>(seed, id)};
    case RngKind::lfsr32: return {kind, id, make_generator<Lfsr32>(seed, id)};
    case RngKind::mt_reference: return {kind, id, make_generator<Mt19937Reference>(seed, id)};
  }
  throw std::invalid_argument("split: unknown generator kind");
}

namespace {

template <class G>
std::vector<G> make_streams(std::uint64_t seed, std::uint64_t run, std::size_t pbits) {
  std::vector<G> out;
  out.reserve(pbits);
  for (std::size_t i = 0; i < pbits; ++i) out.push_back(make_generator<G>(seed, stream_id(run, i)));
  return out;
}

}  // namespace

RngBank::RngBank(RngKind kind, std::uint64_t seed, std::uint64_t run, std::size_t pbits)
    : kind_(kind),
      streams_(std::vector<Xoshiro128Plus>{}),
      aux_(make_generator<Xoshiro128Plus>(seed, stream_id(run, kAuxiliaryPbit))) {
  if (pbits >= kSharedPbit) throw std::invalid_argument("RngBank: too many p-bits");
  switch (kind) {
    case RngKind::xoshiro128plus: streams_ = make_streams<Xoshiro128Plus>(seed, run, pbits); break;
    case RngKind::lfsr16: streams_ = make_streams<Lfsr16>(seed, run, pbits); break;
    case RngKind::lfsr32: streams_ = make_streams<Lfsr32>(seed, run, pbits); break;
    case RngKind::mt_reference:
      streams_ = Shared{make_generator<Mt19937Reference>(seed, stream_id(run, kSharedPbit))};
      break;
  }
}

std::string_view to_string(RngKind kind) {
  switch (kind) {
    case RngKind::xoshiro128plus: return "xoshiro128plus";
    case RngKind::lfsr16: return "lfsr16";
    case RngKind::lfsr32: return "lfsr32";
    case RngKind::mt_reference: return "mt_reference";
  }
  return "?";
}

RngKind parse_rng_kind(std::string_view name) {
  if (name == "xoshiro128plus" || name == "xoshiro128+") return RngKind::xoshiro128plus;
  if (name == "lfsr16") return RngKind::lfsr16;
  if (name == "lfsr32") return RngKind::lfsr32;
  if (name == "mt_reference" || name == "mt19937") return RngKind::mt_reference;
  throw std::invalid_argument("unknown generator kind '" + std::string(name) +
                              "' (expected xoshiro128plus, lfsr16, lfsr32 or mt_reference)");
}

}  // namespace pbit
