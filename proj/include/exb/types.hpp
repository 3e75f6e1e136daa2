/*
 * Copyright 2026 The exbsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file types.hpp
 * @brief Basic value types shared by every fabric component.
 */

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace exb {

/// One 32-bit package moved across the crossbar.
using Word = std::uint32_t;
using Cycle = std::uint64_t;
using PortIndex = std::size_t;
/// Bit p set means port p. Widths above 32 ports are not supported.
using PortMask = std::uint32_t;
using Burst = std::vector<Word>;

inline constexpr std::size_t kMaxPorts = 32;
inline constexpr std::size_t kBurstWords = 8;
inline constexpr PortIndex kHostPort = 0;

constexpr PortMask port_bit(PortIndex p) { return PortMask{1} << p; }

constexpr PortMask all_ports(std::size_t n) {
  return n >= 32 ? ~PortMask{0} : (PortMask{1} << n) - 1;
}

/// Destination selector with one bit per slave port.
class OneHotAddress {
 public:
  constexpr OneHotAddress() = default;
  constexpr explicit OneHotAddress(PortMask bits) : bits_(bits) {}

  static constexpr OneHotAddress to_port(PortIndex p) { return OneHotAddress(port_bit(p)); }

  constexpr PortMask bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_unicast() const { return std::popcount(bits_) == 1; }

  /// Port index of a unicast address.
  constexpr std::optional<PortIndex> port() const {
    if (!is_unicast()) return std::nullopt;
    return static_cast<PortIndex>(std::countr_zero(bits_));
  }

  friend constexpr bool operator==(OneHotAddress, OneHotAddress) = default;

 private:
  PortMask bits_ = 0;
};

}  // namespace exb
