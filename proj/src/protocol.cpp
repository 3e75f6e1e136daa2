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

#include "exb/protocol.hpp"

#include <stdexcept>

namespace exb {

std::string_view to_string(MasterState s) {
  switch (s) {
    case MasterState::Idle: return "Idle";
    case MasterState::Requesting: return "Requesting";
    case MasterState::AwaitGrant: return "AwaitGrant";
    case MasterState::Sending: return "Sending";
    case MasterState::Stalled: return "Stalled";
    case MasterState::AwaitAcks: return "AwaitAcks";
    case MasterState::Complete: return "Complete";
  }
  return "?";
}

namespace {

bool transferring(MasterState s) {
  return s == MasterState::AwaitGrant || s == MasterState::Sending || s == MasterState::Stalled;
}

void finish(MasterIfState& n, ErrorCode code) {
  n.state = MasterState::Complete;
  n.result = code;
}

}  // namespace

MasterOutputs master_drive(const MasterIfState& s, bool grant, std::size_t words_available) {
  MasterOutputs out;
  out.cyc = s.state != MasterState::Idle && s.state != MasterState::Complete;
  out.addr = s.destination;
  if (transferring(s.state) && grant && s.words_sent < s.burst.size() && s.words_sent < words_available) {
    out.stb = true;
    out.word_index = s.words_sent;
    out.data = s.burst[s.words_sent];
  }
  return out;
}

MasterStep master_step(const MasterIfState& s, const MasterInputs& in,
                       const std::optional<ModuleRequest>& request, const MasterConfig& cfg) {
  MasterStep step{s, master_drive(s, in.grant, in.words_available)};
  MasterIfState& n = step.state;
  MasterOutputs& out = step.out;

  switch (s.state) {
    case MasterState::Idle:
      if (request) {
        if (request->burst.empty()) throw std::invalid_argument("master request with empty burst");
        n = MasterIfState{};
        n.state = MasterState::Requesting;
        n.burst = request->burst;
        n.destination = request->destination;
        out.latched = true;
      }
      break;

    case MasterState::Requesting:
      out.issued = true;
      if (in.error_in)
        finish(n, ErrorCode::InvalidAddress);
      else
        n.state = MasterState::AwaitGrant;
      break;

    case MasterState::AwaitGrant:
    case MasterState::Sending:
    case MasterState::Stalled:
      if (out.stb) {
        if (in.stall) {
          n.state = MasterState::Stalled;
          ++n.ack_timer;
        } else {
          ++n.words_sent;
          out.accepted = true;
          n.state = MasterState::Sending;
        }
      } else if (!in.grant) {
        n.state = MasterState::AwaitGrant;
        ++n.grant_timer;
      } else {
        // Granted, but the source has not produced the next word yet.
        n.state = MasterState::Sending;
      }
      if (in.ack && n.acks_received < n.words_sent) ++n.acks_received;
      if (n.words_sent == n.burst.size()) {
        if (n.acks_received == n.burst.size())
          finish(n, ErrorCode::Success);
        else
          n.state = MasterState::AwaitAcks;
      } else if (n.grant_timer >= cfg.grant_timeout) {
        finish(n, ErrorCode::GrantTimeout);
      } else if (n.ack_timer >= cfg.ack_timeout) {
        finish(n, ErrorCode::AckTimeout);
      }
      break;

    case MasterState::AwaitAcks:
      if (in.ack && n.acks_received < n.words_sent) ++n.acks_received;
      if (n.acks_received == n.burst.size()) {
        finish(n, ErrorCode::Success);
      } else if (++n.ack_timer >= cfg.ack_timeout) {
        finish(n, ErrorCode::AckTimeout);
      }
      break;

    case MasterState::Complete:
      out.completed = s.result;
      n = MasterIfState{};
      break;
  }
  return step;
}

SlaveStep slave_step(const SlaveIfState& s, const SlaveInputs& in, bool data_read) {
  SlaveStep step{s, {}};
  SlaveIfState& n = step.state;
  SlaveOutputs& out = step.out;

  if (data_read) n.valid = 0;
  n.stall_asserted = false;

  if (!in.cyc) {
    n.state = SlaveState::Idle;
  } else if (in.stb) {
    if (!n.full()) {
      const std::size_t slot = n.stored();
      n.buffer[slot] = in.data;
      n.valid |= static_cast<std::uint8_t>(1u << slot);
      n.state = SlaveState::Accepting;
      out.ack = true;
      out.stored_slot = slot;
    } else {
      n.state = SlaveState::Stalling;
      n.stall_asserted = true;
      out.stall = true;
    }
  } else {
    n.state = SlaveState::Accepting;
  }
  out.buffer_full = n.full() || (n.valid != 0 && !in.cyc);
  return step;
}

}  // namespace exb
