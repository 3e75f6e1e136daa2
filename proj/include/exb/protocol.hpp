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
 * @file protocol.hpp
 * @brief Pipelined WISHBONE master and slave interface state machines.
 *
 * Both machines are written as pure step functions over explicit state so that the
 * simulation kernel and the exhaustive protocol checker drive exactly the same logic.
 *
 * Master timeline for an uncontended eight-word burst whose request is latched in cycle r:
 *
 *   r        Idle -> Requesting        request latched from the module
 *   r+1      Requesting -> AwaitGrant  address presented to the master port and validated
 *   r+2,r+3  AwaitGrant                slave-port arbiter decides
 *   r+4..11  Sending                   one word per cycle, acked in the same cycle
 *   r+12     Complete                  error status registered, bus released
 *
 * The watchdog timers start with the request and are never rearmed: grant_timer counts every
 * cycle spent waiting for a grant, ack_timer every cycle spent stalled or waiting for acks.
 */

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>

#include "exb/regfile.hpp"
#include "exb/types.hpp"

namespace exb {

struct MasterConfig {
  Cycle grant_timeout = 64;
  Cycle ack_timeout = 64;
};

enum class MasterState : std::uint8_t { Idle, Requesting, AwaitGrant, Sending, Stalled, AwaitAcks, Complete };

std::string_view to_string(MasterState s);

/// What a module hands to its master interface.
struct ModuleRequest {
  Burst burst;
  OneHotAddress destination;
};

struct MasterIfState {
  MasterState state = MasterState::Idle;
  Burst burst;
  OneHotAddress destination;
  std::size_t words_sent = 0;
  std::size_t acks_received = 0;
  Cycle grant_timer = 0;
  Cycle ack_timer = 0;
  /// Outcome reported when the Complete state is reached.
  ErrorCode result = ErrorCode::Success;

  bool busy() const { return state != MasterState::Idle; }
  friend bool operator==(const MasterIfState&, const MasterIfState&) = default;
};

struct MasterInputs {
  bool grant = false;
  bool error_in = false;
  bool stall = false;
  bool ack = false;
  /// Words of the burst already present at the source; streaming sources lag behind.
  std::size_t words_available = std::numeric_limits<std::size_t>::max();
};

struct MasterOutputs {
  bool cyc = false;
  bool stb = false;
  Word data = 0;
  std::size_t word_index = 0;
  OneHotAddress addr;
  bool latched = false;
  bool issued = false;
  bool accepted = false;
  std::optional<ErrorCode> completed;
};

struct MasterStep {
  MasterIfState state;
  MasterOutputs out;
};

/// Bus signals for the current cycle. Depends only on state, grant and source availability,
/// so the kernel can route the strobe before the slave answers.
MasterOutputs master_drive(const MasterIfState& s, bool grant,
                           std::size_t words_available = std::numeric_limits<std::size_t>::max());

/// Advances the master by one cycle. `in.stall`/`in.ack` are the slave's answer to the
/// strobe produced by master_drive() for the same cycle.
MasterStep master_step(const MasterIfState& s, const MasterInputs& in,
                       const std::optional<ModuleRequest>& request, const MasterConfig& cfg);

enum class SlaveState : std::uint8_t { Idle, Accepting, Stalling };

struct SlaveIfState {
  SlaveState state = SlaveState::Idle;
  std::array<Word, kBurstWords> buffer{};
  /// Bit i set when buffer slot i holds unread data. Slots fill in order.
  std::uint8_t valid = 0;
  bool stall_asserted = false;

  std::size_t stored() const { return static_cast<std::size_t>(std::popcount(valid)); }
  bool full() const { return valid == 0xFF; }
  friend bool operator==(const SlaveIfState&, const SlaveIfState&) = default;
};

struct SlaveInputs {
  bool cyc = false;
  bool stb = false;
  Word data = 0;
};

struct SlaveOutputs {
  bool ack = false;
  bool stall = false;
  bool buffer_full = false;
  std::optional<std::size_t> stored_slot;
};

struct SlaveStep {
  SlaveIfState state;
  SlaveOutputs out;
};

/// Advances the slave by one cycle. `data_read` is the module's read strobe; it frees every
/// slot before this cycle's strobe is considered.
SlaveStep slave_step(const SlaveIfState& s, const SlaveInputs& in, bool data_read);

}  // namespace exb
