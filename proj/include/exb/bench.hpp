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
 * @file bench.hpp
 * @brief Programmatic experiment suites: worst-case latency, bridge latency, dynamic
 * bandwidth and elasticity, plus a thread-parallel batch runner.
 */

#pragma once

#include <map>
#include <string>
#include <vector>

#include "exb/scenario.hpp"
#include "exb/system.hpp"

namespace exb::bench {

/// `masters` modules on ports 1..M, all fired at cycle 0 towards port 0.
Scenario contention_scenario(std::size_t masters, unsigned quota = kBurstWords, std::size_t burst = kBurstWords);

/// Completion latency of the last of `masters` simultaneous 8-word requests.
Cycle worst_case_latency(std::size_t masters);

inline Cycle worst_case_formula(std::size_t masters) { return 13 + 12 * (masters - 1); }

struct LatencyRow {
  std::size_t masters;
  Cycle measured;
  Cycle expected;
};
std::vector<LatencyRow> bench_latency(std::size_t max_masters);

/// One 8-word host burst through the bridge into the module on port 1.
Scenario bridge_scenario(TriggerMode trigger);
Cycle bridge_delivery_latency(TriggerMode trigger);

struct HostCostPreset {
  std::string name;
  std::map<ModuleKind, Cycle> costs;
  Cycle transfer = 0;
};
HostCostPreset default_preset();
/// Host costs fitted so that case 1 takes about 1.55x as long as case 3.
HostCostPreset calibrated_preset();

inline constexpr std::size_t kElasticityBursts = 16 * 1024 / (kBurstWords * 4);

/// Multiplier -> encoder -> decoder on a four-port fabric where only `fabric_regions` regions are
/// free, so the first `fabric_regions` stages land on the fabric.
Scenario pipeline_scenario(std::size_t fabric_regions, unsigned quota, const HostCostPreset& preset,
                           std::size_t bursts = kElasticityBursts);

struct PipelineRow {
  std::size_t fabric_stages = 0;
  unsigned quota = 0;
  Cycle fabric_cycles = 0;
  Cycle host_cycles = 0;
  Cycle transfer_cycles = 0;
  Cycle total_cycles = 0;
  double total_ms = 0;
  std::size_t mismatches = 0;
  bool complete = false;
};
PipelineRow run_pipeline(const Scenario& sc);

std::vector<PipelineRow> bench_elasticity(const HostCostPreset& preset, std::size_t bursts = kElasticityBursts);

struct BandwidthRow {
  std::size_t fabric_stages = 0;
  Cycle cycles_q16 = 0;
  Cycle cycles_q128 = 0;
  double improvement_pct = 0;
};
std::vector<BandwidthRow> bench_bandwidth(std::size_t bursts = kElasticityBursts);

/// Runs independent scenarios on `threads` workers. Results keep the input order.
std::vector<RunResult> run_batch(const std::vector<Scenario>& scenarios, unsigned threads = 0);

}  // namespace exb::bench
