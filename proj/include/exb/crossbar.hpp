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
 * @file crossbar.hpp
 * @brief N x N crossbar: isolating master ports, arbitrating slave ports, and the routing
 *        of granted master/slave pairs.
 */

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "exb/arbiter.hpp"
#include "exb/regfile.hpp"
#include "exb/types.hpp"

namespace exb {

/// Master-port isolation check. Forwards to the addressed slave when the one-hot
/// destination survives the AND with the allowed mask; otherwise the request is rejected and
/// never reaches a slave port.
std::optional<PortIndex> validate(OneHotAddress destination, PortMask allowed_mask, std::size_t port_count);

struct MasterPort {
  /// Slave port the current request was forwarded to.
  std::optional<PortIndex> target;
  bool in_reset = false;
};

struct SlavePort {
  Arbiter arbiter;
  bool in_reset = false;

  std::optional<PortIndex> connected_master() const { return arbiter.grant_to(); }
};

struct ResetChange {
  PortIndex port;
  bool asserted;
};

class Crossbar {
 public:
  explicit Crossbar(std::size_t port_count);

  std::size_t port_count() const { return masters_.size(); }

  /// Samples the reset lines. Ports entering reset lose their request and arbiter state.
  std::vector<ResetChange> sync_resets(const RegisterFile& regs);

  /// Runs every slave-port arbiter's decision for this cycle, indexed by slave port.
  std::vector<ArbiterEvents> begin_cycle(const RegisterFile& regs);

  /// A master interface presents its address. Returns the forwarded slave, or nullopt after
  /// raising the error line.
  std::optional<PortIndex> issue(PortIndex master, OneHotAddress destination, const RegisterFile& regs);

  /// Grant line seen by the master interface this cycle.
  bool grant(PortIndex master) const;

  /// True when the master's forwarded target is now held in reset. A master caught mid-burst
  /// by the reset sees a permanent stall from it.
  bool dead_link(PortIndex master) const;

  void ack(PortIndex slave) { slaves_[slave].arbiter.on_ack(); }

  /// Registers this cycle's request lines for the arbiters. `cyc[m]` is master m's bus
  /// request; a master whose line is low loses its forwarded target.
  void end_cycle(std::span<const bool> cyc, const RegisterFile& regs);

  const MasterPort& master(PortIndex p) const { return masters_[p]; }
  const SlavePort& slave(PortIndex p) const { return slaves_[p]; }

 private:
  std::vector<MasterPort> masters_;
  std::vector<SlavePort> slaves_;
};

}  // namespace exb
