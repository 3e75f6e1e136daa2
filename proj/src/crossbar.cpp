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

#include "exb/crossbar.hpp"

namespace exb {

std::optional<PortIndex> validate(OneHotAddress destination, PortMask allowed_mask, std::size_t port_count) {
  if (!destination.is_unicast()) return std::nullopt;
  const PortMask hit = destination.bits() & allowed_mask & all_ports(port_count);
  if (hit == 0) return std::nullopt;
  return destination.port();
}

Crossbar::Crossbar(std::size_t port_count) : masters_(port_count), slaves_(port_count) {}

std::vector<ResetChange> Crossbar::sync_resets(const RegisterFile& regs) {
  std::vector<ResetChange> changes;
  for (PortIndex p = 0; p < port_count(); ++p) {
    const bool held = regs.in_reset(p);
    if (held == masters_[p].in_reset) continue;
    masters_[p].in_reset = held;
    slaves_[p].in_reset = held;
    if (held) {
      masters_[p].target.reset();
      slaves_[p].arbiter.reset();
    }
    changes.push_back({p, held});
  }
  return changes;
}

std::vector<ArbiterEvents> Crossbar::begin_cycle(const RegisterFile& regs) {
  std::vector<ArbiterEvents> events(port_count());
  for (PortIndex s = 0; s < port_count(); ++s) {
    if (slaves_[s].in_reset) continue;
    events[s] = slaves_[s].arbiter.begin_cycle([&](PortIndex m) { return regs.quota(s, m); });
  }
  return events;
}

std::optional<PortIndex> Crossbar::issue(PortIndex master, OneHotAddress destination, const RegisterFile& regs) {
  auto target = validate(destination, regs.allowed(master), port_count());
  masters_[master].target = target;
  return target;
}

bool Crossbar::grant(PortIndex master) const {
  const auto& target = masters_[master].target;
  if (!target) return false;
  return slaves_[*target].arbiter.grant_to() == master;
}

bool Crossbar::dead_link(PortIndex master) const {
  const auto& target = masters_[master].target;
  return target && slaves_[*target].in_reset;
}

void Crossbar::end_cycle(std::span<const bool> cyc, const RegisterFile& regs) {
  std::vector<PortMask> requests(port_count(), 0);
  for (PortIndex m = 0; m < port_count(); ++m) {
    if (!cyc[m] || masters_[m].in_reset) {
      masters_[m].target.reset();
      continue;
    }
    const auto& target = masters_[m].target;
    if (!target || slaves_[*target].in_reset) continue;
    // Zero-quota masters never reach the arbiter.
    if (regs.quota(*target, m) == 0) continue;
    requests[*target] |= port_bit(m);
  }
  for (PortIndex s = 0; s < port_count(); ++s) {
    if (!slaves_[s].in_reset) slaves_[s].arbiter.end_cycle(requests[s]);
  }
}

}  // namespace exb
