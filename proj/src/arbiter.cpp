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

#include "exb/arbiter.hpp"

#include <bit>

namespace exb {

std::optional<PortIndex> select(PortMask requests, std::optional<PortIndex> prev_grant) {
  if (requests == 0) return std::nullopt;
  PortMask masked = 0;
  if (prev_grant && *prev_grant + 1 < 32) masked = requests & ~((PortMask{2} << *prev_grant) - 1);
  const PortMask pick = masked != 0 ? masked : requests;
  return static_cast<PortIndex>(std::countr_zero(pick));
}

std::string_view to_string(ArbiterPhase p) {
  switch (p) {
    case ArbiterPhase::Idle: return "Idle";
    case ArbiterPhase::Deciding1: return "Deciding1";
    case ArbiterPhase::Deciding2: return "Deciding2";
    case ArbiterPhase::Granted: return "Granted";
    case ArbiterPhase::Release: return "Release";
  }
  return "?";
}

ArbiterEvents Arbiter::begin_cycle(const QuotaLookup& quota) {
  ArbiterEvents ev;
  ArbiterState& s = state_;
  switch (s.phase) {
    case ArbiterPhase::Idle:
    case ArbiterPhase::Release:
      s.phase = s.seen_requests != 0 ? ArbiterPhase::Deciding1 : ArbiterPhase::Idle;
      break;

    case ArbiterPhase::Deciding1:
      if (auto pick = select(s.seen_requests, s.prev_grant)) {
        s.grant_bits = *pick;
        s.phase = ArbiterPhase::Deciding2;
      } else {
        s.phase = ArbiterPhase::Idle;
      }
      break;

    case ArbiterPhase::Deciding2:
      // Quotas are re-read at every new grant decision.
      s.remaining_packages = quota(s.grant_bits);
      if (s.remaining_packages == 0) {
        s.phase = ArbiterPhase::Idle;
      } else {
        s.phase = ArbiterPhase::Granted;
        ev.granted = s.grant_bits;
      }
      break;

    case ArbiterPhase::Granted: {
      const bool exhausted = s.seen_remaining == 0;
      const bool withdrawn = ((s.seen_requests >> s.grant_bits) & 1u) == 0;
      const bool others = (s.seen_requests & ~port_bit(s.grant_bits)) != 0;
      // An idle grantee keeps the port parked while nobody else asks and packages remain.
      if (exhausted || (withdrawn && others)) {
        s.phase = ArbiterPhase::Release;
        s.prev_grant = s.grant_bits;
        s.remaining_packages = 0;
        ev.released = s.grant_bits;
        ev.quota_exhausted = exhausted;
      }
      break;
    }
  }
  start_remaining_ = s.remaining_packages;
  return ev;
}

std::optional<PortIndex> Arbiter::grant_to() const {
  if (state_.phase == ArbiterPhase::Granted && state_.remaining_packages > 0) return state_.grant_bits;
  return std::nullopt;
}

void Arbiter::on_ack() {
  if (state_.phase == ArbiterPhase::Granted && state_.remaining_packages > 0) --state_.remaining_packages;
}

void Arbiter::end_cycle(PortMask eligible_requests) {
  state_.seen_requests = eligible_requests;
  state_.seen_remaining = start_remaining_;
}

void Arbiter::reset() {
  state_ = ArbiterState{};
  start_remaining_ = 0;
}

}  // namespace exb
