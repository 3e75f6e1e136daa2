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

#include "exb/regfile.hpp"

#include <algorithm>
#include <cstdio>

namespace exb {

namespace {

std::string describe(RegfileError::Kind kind, RegAddr addr) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s at 0x%X",
                kind == RegfileError::Kind::OutOfRange ? "register address out of range"
                                                       : "host write to status register denied",
                addr);
  return buf;
}

std::size_t extension_ports(std::size_t n) { return n > 4 ? n - 4 : 0; }
std::size_t quota_groups(std::size_t n) { return (n + 3) / 4; }
std::size_t extension_quota_words(std::size_t n) { return n * quota_groups(n) - std::min<std::size_t>(n, 4); }

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Success: return "Success";
    case ErrorCode::AckTimeout: return "AckTimeout";
    case ErrorCode::InvalidAddress: return "InvalidAddress";
    case ErrorCode::GrantTimeout: return "GrantTimeout";
  }
  return "?";
}

RegfileError::RegfileError(Kind kind, RegAddr addr)
    : std::runtime_error(describe(kind, addr)), kind_(kind), addr_(addr) {}

RegisterFile::RegisterFile(std::size_t port_count, Word device_id)
    : port_count_(port_count), device_id_(device_id) {
  if (port_count < 2 || port_count > kMaxPorts)
    throw std::invalid_argument("register file port count must be in 2..32");
  const std::size_t ext = extension_ports(port_count);
  const std::size_t total =
      regmap::kBaseWords + 2 * ext + extension_quota_words(port_count) + (ext + 3) / 4;
  words_.assign(total, 0);
  status_word_.assign(total, false);
  status_word_[regmap::kRegionStatus / 4] = true;
  status_word_[regmap::kAppStatus / 4] = true;
  status_word_[regmap::kIcapStatus / 4] = true;
  for (std::size_t i = total - (ext + 3) / 4; i < total; ++i) status_word_[i] = true;
  clear();
}

void RegisterFile::clear() {
  std::fill(words_.begin(), words_.end(), 0);
  words_[0] = device_id_;
}

std::size_t RegisterFile::index_of(RegAddr addr) const {
  if (addr % 4 != 0 || addr >= end_addr()) throw RegfileError(RegfileError::Kind::OutOfRange, addr);
  return addr / 4;
}

Word RegisterFile::read(RegAddr addr) const { return words_[index_of(addr)]; }

bool RegisterFile::is_status(RegAddr addr) const { return status_word_[index_of(addr)]; }

void RegisterFile::write(RegAddr addr, Word value) {
  const std::size_t i = index_of(addr);
  if (status_word_[i]) throw RegfileError(RegfileError::Kind::StatusWriteDenied, addr);
  words_[i] = value;
}

void RegisterFile::check_port(PortIndex p) const {
  if (p >= port_count_) throw std::out_of_range("port index " + std::to_string(p) + " out of range");
}

RegAddr RegisterFile::allowed_addr(PortIndex master) const {
  check_port(master);
  if (master < 4) return regmap::kAllowedBase + 4 * static_cast<RegAddr>(master);
  return regmap::kExtensionBase + 4 * static_cast<RegAddr>(master - 4);
}

RegAddr RegisterFile::region_destination_addr(PortIndex region) const {
  check_port(region);
  // Port 0 is the host bridge; its destinations come from the application-ID registers.
  if (region == 0) throw std::out_of_range("port 0 has no region destination register");
  if (region < 4) return 4 * static_cast<RegAddr>(region);
  const std::size_t ext = extension_ports(port_count_);
  return regmap::kExtensionBase + static_cast<RegAddr>(4 * ext + 4 * (region - 4));
}

RegAddr RegisterFile::app_destination_addr(unsigned app) const {
  if (app >= regmap::kAppCount) throw std::out_of_range("application ID out of range");
  return regmap::kAppDestBase + 4 * app;
}

LaneRef RegisterFile::quota_lane(PortIndex slave, PortIndex master) const {
  check_port(slave);
  check_port(master);
  const std::size_t group = master / 4;
  const unsigned shift = static_cast<unsigned>(8 * (master % 4));
  if (slave < 4 && group == 0) return {regmap::kQuotaBase + 4 * static_cast<RegAddr>(slave), shift};
  const std::size_t ext = extension_ports(port_count_);
  const std::size_t groups = quota_groups(port_count_);
  const std::size_t k =
      slave < 4 ? slave * (groups - 1) + (group - 1) : 4 * (groups - 1) + (slave - 4) * groups + group;
  return {regmap::kExtensionBase + static_cast<RegAddr>(4 * (2 * ext + k)), shift};
}

LaneRef RegisterFile::region_status_lane(PortIndex region) const {
  check_port(region);
  if (region == 0) throw std::out_of_range("port 0 reports through application status lanes");
  if (region < 4) return {regmap::kRegionStatus, static_cast<unsigned>(8 * region)};
  const std::size_t ext = extension_ports(port_count_);
  const std::size_t k = 2 * ext + extension_quota_words(port_count_) + (region - 4) / 4;
  return {regmap::kExtensionBase + static_cast<RegAddr>(4 * k), static_cast<unsigned>(8 * ((region - 4) % 4))};
}

LaneRef RegisterFile::app_status_lane(unsigned app) const {
  if (app >= regmap::kAppCount) throw std::out_of_range("application ID out of range");
  return {regmap::kAppStatus, 8 * app};
}

std::uint8_t RegisterFile::lane(LaneRef ref) const {
  return static_cast<std::uint8_t>(words_[index_of(ref.addr)] >> ref.shift);
}

void RegisterFile::store_lane(LaneRef ref, std::uint8_t value) {
  Word& w = words_[index_of(ref.addr)];
  w = (w & ~(Word{0xFF} << ref.shift)) | (Word{value} << ref.shift);
}

PortMask RegisterFile::allowed(PortIndex master) const { return words_[allowed_addr(master) / 4]; }

unsigned RegisterFile::quota(PortIndex slave, PortIndex master) const {
  return lane(quota_lane(slave, master));
}

OneHotAddress RegisterFile::region_destination(PortIndex region) const {
  return OneHotAddress(words_[region_destination_addr(region) / 4]);
}

OneHotAddress RegisterFile::app_destination(unsigned app) const {
  return OneHotAddress(words_[app_destination_addr(app) / 4]);
}

ErrorCode RegisterFile::region_status(PortIndex region) const {
  return static_cast<ErrorCode>(lane(region_status_lane(region)) & 0x3);
}

ErrorCode RegisterFile::app_status(unsigned app) const {
  return static_cast<ErrorCode>(lane(app_status_lane(app)) & 0x3);
}

IcapStatus RegisterFile::icap_status() const {
  return static_cast<IcapStatus>(words_[regmap::kIcapStatus / 4] & 0x3);
}

void RegisterFile::report_region_status(PortIndex region, ErrorCode code) {
  store_lane(region_status_lane(region), static_cast<std::uint8_t>(code));
}

void RegisterFile::report_app_status(unsigned app, ErrorCode code) {
  store_lane(app_status_lane(app), static_cast<std::uint8_t>(code));
}

void RegisterFile::set_icap_status(IcapStatus status) {
  words_[regmap::kIcapStatus / 4] = static_cast<Word>(status);
}

void RegisterFile::write_lane(LaneRef ref, std::uint8_t value) {
  if (is_status(ref.addr)) throw RegfileError(RegfileError::Kind::StatusWriteDenied, ref.addr);
  store_lane(ref, value);
}

void RegisterFile::set_quota(PortIndex slave, PortIndex master, std::uint8_t packages) {
  write_lane(quota_lane(slave, master), packages);
}

}  // namespace exb
