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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace pbit {

/// A single Ising/p-bit value, always -1 or +1.
using Spin = std::int8_t;

/// A +/-1 state vector. Construction validates every entry.
class SpinConfig {
 public:
  SpinConfig() = default;

  SpinConfig(std::size_t size, Spin fill) : values_(size, fill) { check(); }

  explicit SpinConfig(std::vector<Spin> values) : values_(std::move(values)) { check(); }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  Spin operator[](std::size_t i) const { return values_[i]; }

  void flip(std::size_t i) { values_[i] = static_cast<Spin>(-values_[i]); }
  void set(std::size_t i, Spin value) {
    if (value != 1 && value != -1) throw std::invalid_argument("SpinConfig: value must be +1 or -1");
    values_[i] = value;
  }

  std::span<const Spin> view() const noexcept { return values_; }
  // Mutable access for engines; callers must keep entries in {-1, +1}.
  std::span<Spin> mutable_view() noexcept { return values_; }
  const std::vector<Spin>& values() const noexcept { return values_; }

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  void check() const {
    for (Spin s : values_) {
      if (s != 1 && s != -1) throw std::invalid_argument("SpinConfig: entries must be +1 or -1");
    }
  }

  std::vector<Spin> values_;
};

}  // namespace pbit
