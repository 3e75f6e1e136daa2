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
 * @file scenario.hpp
 * @brief Everything that determines a run, plus the sectioned text format it is read from.
 *
 * Text format: `[section]` headers, `key = value` lines, `#` comments. The [events] section
 * holds `<cycle> <verb> <args...>` lines instead. See scenarios/ for worked examples.
 */

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exb/bridge.hpp"
#include "exb/compute.hpp"
#include "exb/protocol.hpp"
#include "exb/regfile.hpp"
#include "exb/types.hpp"

namespace exb {

struct AppDescriptor {
  unsigned app_id = 0;
  /// Module chain, first stage first.
  std::vector<ModuleSpec> chain;
  std::size_t channel = 0;
  std::vector<Burst> data;
  /// Idle host cycles after each burst on the channel.
  Cycle gap = 0;
  /// Expected outputs; when empty the chain applied in software is the reference.
  std::vector<Burst> expected;
  unsigned quota = kBurstWords;
  Cycle arrive = 0;
};

enum class EventKind : std::uint8_t { Poke, Submit, Fire, Free };

struct ScenarioEvent {
  Cycle cycle = 0;
  EventKind kind = EventKind::Poke;
  RegAddr addr = 0;
  Word value = 0;
  PortIndex port = 0;
  std::size_t channel = 0;
  Cycle gap = 0;
  Burst words;
  /// Source line, 0 for generated events.
  std::size_t line = 0;
};

struct Scenario {
  std::string name = "scenario";
  std::size_t port_count = 4;
  double clock_hz = 250e6;
  MasterConfig timeouts;
  BridgeConfig bridge;
  std::uint64_t seed = 1;
  Cycle max_cycles = 100'000'000;
  Cycle reconfig_cycles = 10'000;
  /// PCIe cost of one host/fabric boundary crossing, charged outside the fabric clock.
  Cycle host_transfer_cycles = 0;
  /// Per-burst cost of running a stage on the host.
  std::map<ModuleKind, Cycle> host_costs;
  /// Modules present from cycle 0; the resource manager does not touch these regions.
  std::map<PortIndex, ModuleSpec> modules;
  /// Regions occupied by other tenants until a `free` event.
  std::vector<PortIndex> static_regions;
  /// Host writes applied before cycle 0, in order.
  std::vector<std::pair<RegAddr, Word>> regs;
  std::vector<AppDescriptor> apps;
  std::vector<ScenarioEvent> events;
  bool record_trace = true;
  /// Finished applications hand their regions back to the manager.
  bool auto_release = true;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// Field-level problems, empty when the scenario can run.
std::vector<std::string> check_scenario(const Scenario& sc);

/// Throws ScenarioError listing every problem found.
void validate_scenario(const Scenario& sc);

/// `overrides` are `section.key=value` strings applied on top of the text.
Scenario parse_scenario(std::string_view text, const std::vector<std::string>& overrides = {});
Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

/// Deterministic payload: word 0 = app ID, words 1..7 below 2^24.
std::vector<Burst> generate_bursts(unsigned app_id, std::size_t count, std::uint64_t seed);

/// Output of `chain[from..]` applied to one burst.
Burst apply_chain(const std::vector<ModuleSpec>& chain, std::size_t from, Burst burst);

/// Host cycles to run `chain[from..]` on one burst.
Cycle host_cost(const Scenario& sc, const std::vector<ModuleSpec>& chain, std::size_t from);

}  // namespace exb
