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
 * @file regfile.hpp
 * @brief Configuration/status register file shared by the resource manager and the fabric.
 *
 * Address map for the default four-port fabric (byte addresses, one 32-bit word each):
 *
 *   0x00        FPGA device ID
 *   0x04..0x0C  destination address of PR regions 1..3 (one-hot)
 *   0x10        reset lines, bit p holds region p and crossbar port p in reset
 *   0x14..0x20  allowed destinations of master ports 0..3
 *   0x24..0x30  package quotas at slave ports 0..3, byte lane m = quota of master m
 *   0x34..0x40  destination address of application IDs 0..3 (one-hot)
 *   0x44        last error status of regions, byte lane r = region r (lane 0 unused)
 *   0x48        last error status of application IDs, byte lane a = application a
 *   0x4C        ICAP status
 *
 * Fabrics wider than four ports append an extension block at 0x50: allowed masks of ports
 * 4..N-1, destinations of regions 4..N-1, the remaining quota words (slave-major, four
 * masters per word) and finally the status lanes of regions 4..N-1.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exb/types.hpp"

namespace exb {

using RegAddr = std::uint32_t;

/// Outcome of one master-interface transaction, stored in 8-bit status lanes.
enum class ErrorCode : std::uint8_t {
  Success = 0,
  AckTimeout = 1,
  InvalidAddress = 2,
  GrantTimeout = 3,
};

std::string_view to_string(ErrorCode code);

enum class IcapStatus : std::uint8_t { Idle = 0, Busy = 1, Done = 2, Error = 3 };

class RegfileError : public std::runtime_error {
 public:
  enum class Kind { OutOfRange, StatusWriteDenied };
  RegfileError(Kind kind, RegAddr addr);
  Kind kind() const { return kind_; }
  RegAddr addr() const { return addr_; }

 private:
  Kind kind_;
  RegAddr addr_;
};

namespace regmap {
inline constexpr RegAddr kDeviceId = 0x00;
inline constexpr RegAddr kReset = 0x10;
inline constexpr RegAddr kAllowedBase = 0x14;
inline constexpr RegAddr kQuotaBase = 0x24;
inline constexpr RegAddr kAppDestBase = 0x34;
inline constexpr RegAddr kRegionStatus = 0x44;
inline constexpr RegAddr kAppStatus = 0x48;
inline constexpr RegAddr kIcapStatus = 0x4C;
inline constexpr RegAddr kExtensionBase = 0x50;
inline constexpr std::size_t kBaseWords = 20;
inline constexpr unsigned kAppCount = 4;
}  // namespace regmap

inline constexpr Word kDefaultDeviceId = 0x00001500;

/// Word address plus the bit offset of an 8-bit lane inside it.
struct LaneRef {
  RegAddr addr;
  unsigned shift;
};

class RegisterFile {
 public:
  explicit RegisterFile(std::size_t port_count = 4, Word device_id = kDefaultDeviceId);

  std::size_t port_count() const { return port_count_; }
  std::size_t word_count() const { return words_.size(); }
  /// One past the highest valid byte address.
  RegAddr end_addr() const { return static_cast<RegAddr>(words_.size() * 4); }

  Word read(RegAddr addr) const;
  /// Host-path write. Status registers are owned by the fabric.
  void write(RegAddr addr, Word value);
  bool is_status(RegAddr addr) const;

  /// Restores the power-on state: everything zero except the device ID.
  void clear();

  // Address helpers, valid for every port count.
  RegAddr allowed_addr(PortIndex master) const;
  RegAddr region_destination_addr(PortIndex region) const;
  RegAddr app_destination_addr(unsigned app) const;
  LaneRef quota_lane(PortIndex slave, PortIndex master) const;
  LaneRef region_status_lane(PortIndex region) const;
  LaneRef app_status_lane(unsigned app) const;

  // Typed views used by the fabric.
  PortMask reset_lines() const { return words_[regmap::kReset / 4]; }
  bool in_reset(PortIndex port) const { return (reset_lines() >> port) & 1u; }
  PortMask allowed(PortIndex master) const;
  unsigned quota(PortIndex slave, PortIndex master) const;
  OneHotAddress region_destination(PortIndex region) const;
  OneHotAddress app_destination(unsigned app) const;
  ErrorCode region_status(PortIndex region) const;
  ErrorCode app_status(unsigned app) const;
  IcapStatus icap_status() const;

  // Fabric-side status path.
  void report_region_status(PortIndex region, ErrorCode code);
  void report_app_status(unsigned app, ErrorCode code);
  void set_icap_status(IcapStatus status);

  // Read-modify-write helpers on the host path.
  void write_lane(LaneRef lane, std::uint8_t value);
  void set_quota(PortIndex slave, PortIndex master, std::uint8_t packages);

 private:
  std::size_t index_of(RegAddr addr) const;
  void check_port(PortIndex p) const;
  std::uint8_t lane(LaneRef ref) const;
  void store_lane(LaneRef ref, std::uint8_t value);

  std::size_t port_count_;
  Word device_id_;
  std::vector<Word> words_;
  std::vector<bool> status_word_;
};

}  // namespace exb
