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

#include "exb/bench.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

namespace exb::bench {

namespace {

void set_reg(Scenario& sc, RegAddr addr, Word value) {
  for (auto& [a, v] : sc.regs)
    if (a == addr) {
      v = value;
      return;
    }
  sc.regs.emplace_back(addr, value);
}

Word get_reg(const Scenario& sc, RegAddr addr) {
  for (const auto& [a, v] : sc.regs)
    if (a == addr) return v;
  return 0;
}

void set_quota(Scenario& sc, const RegisterFile& map, PortIndex slave, PortIndex master, unsigned q) {
  const LaneRef lane = map.quota_lane(slave, master);
  const Word w = get_reg(sc, lane.addr) & ~(Word{0xFF} << lane.shift);
  set_reg(sc, lane.addr, w | (Word{q & 0xFFu} << lane.shift));
}

}  // namespace

Scenario contention_scenario(std::size_t masters, unsigned quota, std::size_t burst) {
  if (masters == 0) throw std::invalid_argument("at least one master is required");
  Scenario sc;
  sc.name = "contention-" + std::to_string(masters);
  sc.port_count = masters + 1;
  // Each earlier master holds the slave for 12 cycles; the watchdog must outlast the queue.
  sc.timeouts.grant_timeout = std::max<Cycle>(sc.timeouts.grant_timeout, 12 * masters + 64);
  const RegisterFile map(sc.port_count);
  for (PortIndex p = 1; p <= masters; ++p) {
    sc.modules[p] = ModuleSpec{};
    set_reg(sc, map.region_destination_addr(p), port_bit(kHostPort));
    set_reg(sc, map.allowed_addr(p), port_bit(kHostPort));
    set_quota(sc, map, kHostPort, p, quota);
    ScenarioEvent ev;
    ev.kind = EventKind::Fire;
    ev.port = p;
    ev.words.assign(burst, 0);
    ev.words[0] = static_cast<Word>(p & 3u);
    for (std::size_t i = 1; i < burst; ++i) ev.words[i] = static_cast<Word>(p * 100 + i);
    sc.events.push_back(ev);
  }
  return sc;
}

Cycle worst_case_latency(std::size_t masters) {
  const RunResult r = run(contention_scenario(masters));
  Cycle worst = 0;
  for (const auto& q : r.stats.requests) {
    if (!q.completion_latency() || q.code != ErrorCode::Success)
      throw std::runtime_error("contention request did not complete successfully");
    worst = std::max(worst, *q.completion_latency());
  }
  return worst;
}

std::vector<LatencyRow> bench_latency(std::size_t max_masters) {
  if (max_masters == 0) throw std::invalid_argument("max_masters must be at least 1");
  std::vector<Scenario> scs;
  for (std::size_t m = 1; m <= max_masters; ++m) scs.push_back(contention_scenario(m));
  const auto results = run_batch(scs);
  std::vector<LatencyRow> rows;
  for (std::size_t m = 1; m <= max_masters; ++m) {
    Cycle worst = 0;
    for (const auto& q : results[m - 1].stats.requests) worst = std::max(worst, q.completion_latency().value_or(0));
    rows.push_back({m, worst, worst_case_formula(m)});
  }
  return rows;
}

Scenario bridge_scenario(TriggerMode trigger) {
  Scenario sc;
  sc.name = trigger == TriggerMode::HalfFull ? "bridge-half-full" : "bridge-full";
  sc.bridge.trigger = trigger;
  sc.modules[1] = ModuleSpec{};
  const RegisterFile map(sc.port_count);
  set_reg(sc, map.app_destination_addr(0), port_bit(1));
  set_reg(sc, map.allowed_addr(kHostPort), port_bit(1));
  set_quota(sc, map, 1, kHostPort, kBurstWords);
  set_reg(sc, map.region_destination_addr(1), port_bit(kHostPort));
  set_reg(sc, map.allowed_addr(1), port_bit(kHostPort));
  set_quota(sc, map, kHostPort, 1, kBurstWords);
  ScenarioEvent ev;
  ev.kind = EventKind::Submit;
  ev.words = {0, 1, 2, 3, 4, 5, 6, 7};
  sc.events.push_back(ev);
  return sc;
}

Cycle bridge_delivery_latency(TriggerMode trigger) {
  const RunResult r = run(bridge_scenario(trigger));
  if (r.bursts.empty() || !r.bursts.front().delivery_latency())
    throw std::runtime_error("bridge burst was not delivered");
  return *r.bursts.front().delivery_latency();
}

HostCostPreset default_preset() {
  return {"default",
          {{ModuleKind::Multiplier, 256}, {ModuleKind::HammingEncoder, 256}, {ModuleKind::HammingDecoder, 256}},
          4096};
}

HostCostPreset calibrated_preset() {
  return {"calibrated",
          {{ModuleKind::Multiplier, 1472}, {ModuleKind::HammingEncoder, 1472}, {ModuleKind::HammingDecoder, 1472}},
          1'354'000};
}

Scenario pipeline_scenario(std::size_t fabric_regions, unsigned quota, const HostCostPreset& preset,
                           std::size_t bursts) {
  if (fabric_regions > 3) throw std::invalid_argument("a four-port fabric has three regions");
  Scenario sc;
  sc.name = "pipeline-" + std::to_string(fabric_regions) + "-q" + std::to_string(quota);
  sc.record_trace = false;
  sc.host_costs = preset.costs;
  sc.host_transfer_cycles = preset.transfer;
  for (PortIndex p = fabric_regions + 1; p < sc.port_count; ++p) sc.static_regions.push_back(p);
  AppDescriptor app;
  app.app_id = 0;
  app.chain = {ModuleSpec{ModuleKind::Multiplier}, ModuleSpec{ModuleKind::HammingEncoder},
               ModuleSpec{ModuleKind::HammingDecoder}};
  app.data = generate_bursts(0, bursts, sc.seed);
  app.quota = quota;
  sc.apps.push_back(app);
  return sc;
}

PipelineRow run_pipeline(const Scenario& sc) {
  const RunResult r = run(sc);
  const AppReport& rep = r.stats.apps.front();
  PipelineRow row;
  row.fabric_stages = rep.fabric_stages_at_start;
  row.quota = sc.apps.front().quota;
  row.fabric_cycles = rep.fabric_cycles;
  row.host_cycles = rep.host_cycles;
  row.transfer_cycles = rep.transfer_cycles;
  row.total_cycles = rep.total_cycles();
  row.total_ms = r.stats.to_ms(row.total_cycles);
  row.mismatches = rep.mismatches;
  row.complete = rep.complete() && rep.failed == 0;
  return row;
}

std::vector<PipelineRow> bench_elasticity(const HostCostPreset& preset, std::size_t bursts) {
  std::vector<PipelineRow> rows;
  for (std::size_t k = 1; k <= 3; ++k) rows.push_back(run_pipeline(pipeline_scenario(k, kBurstWords, preset, bursts)));
  return rows;
}

std::vector<BandwidthRow> bench_bandwidth(std::size_t bursts) {
  std::vector<Scenario> scs;
  for (std::size_t k = 1; k <= 3; ++k)
    for (unsigned q : {16u, 128u}) scs.push_back(pipeline_scenario(k, q, default_preset(), bursts));
  const auto results = run_batch(scs);
  std::vector<BandwidthRow> rows;
  for (std::size_t k = 1; k <= 3; ++k) {
    BandwidthRow row;
    row.fabric_stages = k;
    row.cycles_q16 = results[2 * (k - 1)].stats.apps.front().fabric_cycles;
    row.cycles_q128 = results[2 * (k - 1) + 1].stats.apps.front().fabric_cycles;
    row.improvement_pct = row.cycles_q16 == 0 ? 0.0
                                              : 100.0 * (static_cast<double>(row.cycles_q16) - static_cast<double>(row.cycles_q128)) /
                                                    static_cast<double>(row.cycles_q16);
    rows.push_back(row);
  }
  return rows;
}

std::vector<RunResult> run_batch(const std::vector<Scenario>& scenarios, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, scenarios.size())));
  std::vector<std::optional<RunResult>> slots(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < scenarios.size();) {
      try {
        slots[i] = run(scenarios[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::vector<RunResult> out;
  out.reserve(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace exb::bench
