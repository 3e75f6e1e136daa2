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
 * @file arbiter.hpp
 * @brief Weighted round-robin arbiter of one crossbar slave port.
 *
 * Selection uses a thermometer mask that clears every index up to the previous grant; the
 * first set bit of the masked request vector wins, and the raw vector is the fallback. The
 * two "first set bit" searches are the two leading-zero counters of the hardware arbiter
 * applied to the bit-reversed request vector.
 *
 * Turns are counted in packages: a new grant loads the grantee's quota from the register
 * file into a down-counter that every ack decrements. The turn ends when the counter is
 * exhausted or the grantee withdraws its request.
 *
 * Every control decision is taken on the request vector and counter value registered in the
 * previous cycle, which gives the fixed schedule
 *
 *   request first visible in c        -> decide in c+1, c+2 -> granted from c+3
 *   last ack of a turn in c           -> release in c+2 -> decide in c+3, c+4 -> next grant c+5
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "exb/types.hpp"

namespace exb {

/// Next requester in cyclic order after `prev_grant`; lowest requester when there is none.
std::optional<PortIndex> select(PortMask requests, std::optional<PortIndex> prev_grant);

enum class ArbiterPhase : std::uint8_t { Idle, Deciding1, Deciding2, Granted, Release };

std::string_view to_string(ArbiterPhase p);

struct ArbiterState {
  ArbiterPhase phase = ArbiterPhase::Idle;
  std::optional<PortIndex> prev_grant;
  /// Valid while Deciding2 or Granted.
  PortIndex grant_bits = 0;
  unsigned remaining_packages = 0;
  /// Registered view of the previous cycle.
  PortMask seen_requests = 0;
  unsigned seen_remaining = 0;

  bool granted() const { return phase == ArbiterPhase::Granted; }
  bool deciding() const { return phase == ArbiterPhase::Deciding1 || phase == ArbiterPhase::Deciding2; }
};

struct ArbiterEvents {
  std::optional<PortIndex> granted;
  std::optional<PortIndex> released;
  bool quota_exhausted = false;
};

class Arbiter {
 public:
  using QuotaLookup = std::function<unsigned(PortIndex master)>;

  /// Enter the cycle. Returns the decisions taken this cycle.
  ArbiterEvents begin_cycle(const QuotaLookup& quota);

  /// Master whose strobes reach the slave this cycle.
  std::optional<PortIndex> grant_to() const;
  bool slave_enable() const { return grant_to().has_value(); }

  /// An ack from the slave to the grantee in the current cycle.
  void on_ack();

  /// Leave the cycle, registering the eligible request vector seen during it.
  void end_cycle(PortMask eligible_requests);

  void reset();

  const ArbiterState& state() const { return state_; }

 private:
  ArbiterState state_;
  unsigned start_remaining_ = 0;
};

}  // namespace exb
