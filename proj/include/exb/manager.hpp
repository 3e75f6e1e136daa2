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
 * @file manager.hpp
 * @brief Elastic resource manager: region inventory, chain placement and rewiring.
 *
 * An application's chain is split into a fabric prefix and a host suffix. The manager hands
 * out free PR regions to the first stages, programs the register file (destinations, allowed
 * masks, quotas) while the regions are held in reset for their reconfiguration, and moves the
 * next host stage onto the fabric whenever a region frees up.
 */

#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "exb/compute.hpp"
#include "exb/regfile.hpp"
#include "exb/scenario.hpp"
#include "exb/types.hpp"

namespace exb {

enum class RegionState : std::uint8_t { Free, Reconfiguring, Allocated, Static };

std::string_view to_string(RegionState s);

struct Region {
  RegionState state = RegionState::Free;
  std::optional<std::size_t> app;
  std::optional<std::size_t> stage;
  std::optional<ModuleSpec> module;
  /// End of the reconfiguration while Reconfiguring.
  Cycle ready_at = 0;
};

struct ManagerConfig {
  Cycle reconfig_cycles = 10'000;
};

enum class ManagerActionKind : std::uint8_t { ReconfigStart, ReconfigDone, Released, Rewired };

struct ManagerAction {
  ManagerActionKind kind;
  PortIndex port;
  std::optional<ModuleSpec> module;
  std::optional<std::size_t> app;
};

class Manager {
 public:
  Manager(std::size_t port_count, ManagerConfig cfg = {});

  /// Takes a region out of the manager's hands (fixed module or another tenant).
  void set_static(PortIndex region, std::optional<ModuleSpec> module = std::nullopt);

  /// Registers an application; returns its handle.
  std::size_t add_app(const AppDescriptor& app);

  /// Gives free regions to the leading stages of the chain. Stages that find no region stay
  /// on the host.
  std::vector<ManagerAction> place(std::size_t app, Cycle now, RegisterFile& regs);

  /// Moves the first host stage of `app` onto the free region `region`.
  std::vector<ManagerAction> expand(std::size_t app, PortIndex region, Cycle now, RegisterFile& regs);

  /// Returns a region to the pool and offers it to the longest-waiting application.
  std::vector<ManagerAction> free_region(PortIndex region, Cycle now, RegisterFile& regs);

  /// Frees every region of a finished application.
  std::vector<ManagerAction> release_app(std::size_t app, Cycle now, RegisterFile& regs);

  /// Completes reconfigurations that end at `now`.
  std::vector<ManagerAction> tick(Cycle now, RegisterFile& regs);

  /// True once every region placed for the app has finished reconfiguring.
  bool ready(std::size_t app) const;
  bool busy() const;
  std::optional<Cycle> next_ready() const;

  const Region& region(PortIndex p) const { return regions_[p]; }
  std::size_t port_count() const { return regions_.size(); }
  const AppDescriptor& app(std::size_t a) const { return apps_[a].desc; }
  std::size_t app_count() const { return apps_.size(); }
  /// Region of every stage; nullopt for stages on the host.
  const std::vector<std::optional<PortIndex>>& placement(std::size_t app) const { return apps_[app].placement; }
  std::size_t fabric_stages(std::size_t app) const;
  /// (app, stage) owning the region.
  std::optional<std::pair<std::size_t, std::size_t>> owner(PortIndex region) const;
  const std::deque<std::size_t>& waiting() const { return waiting_; }

 private:
  struct AppState {
    AppDescriptor desc;
    std::vector<std::optional<PortIndex>> placement;
    bool released = false;
  };

  std::optional<PortIndex> first_free() const;
  Cycle schedule_icap(Cycle now);
  void begin_reconfig(PortIndex region, std::size_t app, std::size_t stage, Cycle now, RegisterFile& regs,
                      std::vector<ManagerAction>& actions);
  void wire_stage(std::size_t app, std::size_t stage, RegisterFile& regs) const;
  void clear_region(PortIndex region, RegisterFile& regs) const;
  std::vector<ManagerAction> offer(PortIndex region, Cycle now, RegisterFile& regs);

  ManagerConfig cfg_;
  std::vector<Region> regions_;
  std::vector<AppState> apps_;
  std::deque<std::size_t> waiting_;
  Cycle icap_free_at_ = 0;
};

}  // namespace exb
