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


#include <gtest/gtest.h>

#include <sstream>

#include "exb/bench.hpp"
#include "exb/system.hpp"

#ifndef EXB_SCENARIO_DIR
#define EXB_SCENARIO_DIR "scenarios"
#endif

namespace exb {
namespace {

std::size_t count(const std::vector<TraceRecord>& t, Component c, TraceEvent e) {
  std::size_t n = 0;
  for (const auto& r : t) n += r.component == c && r.event == e;
  return n;
}

TEST(System, UncontendedBurst) {
  const RunResult r = run(bench::contention_scenario(1));
  ASSERT_EQ(r.stats.requests.size(), 1u);
  const RequestStat& q = r.stats.requests[0];
  EXPECT_EQ(q.request, 1u);
  EXPECT_EQ(q.time_to_grant(), Cycle{4});
  EXPECT_EQ(q.completion_latency(), Cycle{13});
  EXPECT_EQ(q.code, ErrorCode::Success);
}

TEST(System, ThreeContendersHandOverEveryTwelveCycles) {
  const RunResult r = run(bench::contention_scenario(3));
  ASSERT_EQ(r.stats.requests.size(), 3u);
  std::vector<Cycle> done;
  for (const auto& q : r.stats.requests) done.push_back(*q.completion_latency());
  std::sort(done.begin(), done.end());
  EXPECT_EQ(done, (std::vector<Cycle>{13, 25, 37}));
  EXPECT_EQ(stats_from_trace(r.trace.records()), r.stats.requests);
}

TEST(System, WorstCaseIsLinear) {
  for (std::size_t m = 1; m <= 8; ++m) EXPECT_EQ(bench::worst_case_latency(m), 13 + 12 * (m - 1));
}

TEST(System, BridgeLatency) {
  EXPECT_EQ(bench::bridge_delivery_latency(TriggerMode::HalfFull), 15u);
  EXPECT_EQ(bench::bridge_delivery_latency(TriggerMode::Full), 19u);
}

TEST(System, RejectedRequestStaysAtTheMasterPort) {
  Scenario sc;
  sc.modules[1] = ModuleSpec{ModuleKind::HostStub};
  const RegisterFile map;
  sc.regs.emplace_back(map.region_destination_addr(1), port_bit(2));
  sc.regs.emplace_back(map.allowed_addr(1), port_bit(0));
  ScenarioEvent ev;
  ev.kind = EventKind::Fire;
  ev.port = 1;
  ev.words = {1, 2, 3};
  sc.events.push_back(ev);
  const RunResult r = run(sc);
  EXPECT_EQ(r.regs.region_status(1), ErrorCode::InvalidAddress);
  EXPECT_EQ(count(r.trace.records(), Component::MasterPort, TraceEvent::Reject), 1u);
  EXPECT_EQ(count(r.trace.records(), Component::SlaveIf, TraceEvent::Ack), 0u);
  EXPECT_EQ(count(r.trace.records(), Component::Arbiter, TraceEvent::Grant), 0u);
}

TEST(System, ResetMidBurstEndsInAckTimeout) {
  Scenario sc = bench::contention_scenario(1, 8, 8);
  sc.timeouts.ack_timeout = 6;
  ScenarioEvent ev;
  ev.cycle = 7;
  ev.kind = EventKind::Poke;
  ev.addr = regmap::kReset;
  ev.value = port_bit(0);
  sc.events.push_back(ev);
  const RunResult r = run(sc);
  ASSERT_EQ(r.stats.requests.size(), 1u);
  EXPECT_EQ(r.stats.requests[0].code, ErrorCode::AckTimeout);
  const std::size_t acks = count(r.trace.records(), Component::SlaveIf, TraceEvent::Ack);
  EXPECT_GT(acks, 0u);
  EXPECT_LT(acks, 8u);
}

TEST(System, GrantTimeoutUnderContention) {
  Scenario sc = bench::contention_scenario(4);
  sc.timeouts.grant_timeout = 20;
  const RunResult r = run(sc);
  std::size_t timeouts = 0;
  for (const auto& q : r.stats.requests) timeouts += q.code == ErrorCode::GrantTimeout;
  EXPECT_GT(timeouts, 0u);
}

TEST(System, PokeAppearsInTrace) {
  Scenario sc;
  ScenarioEvent ev;
  ev.cycle = 3;
  ev.kind = EventKind::Poke;
  ev.addr = 0x24;
  ev.value = 0x08;
  sc.events.push_back(ev);
  const RunResult r = run(sc);
  ASSERT_EQ(r.trace.records().size(), 1u);
  EXPECT_EQ(to_csv(r.trace.records()[0]), "3,regfile,Poke,36,,,0x00000008,");
  EXPECT_EQ(r.regs.read(0x24), 0x08u);
}

TEST(System, IdleStretchesAreSkipped) {
  Scenario sc = bench::contention_scenario(1);
  sc.events[0].cycle = 50'000'000;
  const RunResult r = run(sc);
  EXPECT_EQ(r.stats.requests.at(0).request, 50'000'001u);
}

TEST(System, CycleLimit) {
  Scenario sc = bench::contention_scenario(1);
  sc.max_cycles = 5;
  EXPECT_THROW(run(sc), CycleLimitExceeded);
}

TEST(System, TraceHashDoesNotDependOnStorage) {
  Scenario sc = bench::contention_scenario(3);
  const RunResult stored = run(sc);
  sc.record_trace = false;
  const RunResult hashed = run(sc);
  EXPECT_TRUE(hashed.trace.records().empty());
  EXPECT_EQ(hashed.trace.size(), stored.trace.size());
  EXPECT_EQ(hashed.trace.hash(), stored.trace.hash());
  std::ostringstream csv;
  stored.trace.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, kTraceCsvHeader.size()), kTraceCsvHeader);
}

TEST(System, BatchMatchesSequential) {
  std::vector<Scenario> batch = {bench::contention_scenario(2), bench::bridge_scenario(TriggerMode::HalfFull),
                                 bench::contention_scenario(5)};
  const auto results = bench::run_batch(batch, 3);
  for (std::size_t i = 0; i < batch.size(); ++i) EXPECT_EQ(results[i].trace.hash(), run(batch[i]).trace.hash());
}

TEST(System, BundledScenariosRunClean) {
  for (const char* name : {"uncontended", "contention3", "bridge", "isolation", "elastic", "two_tenants"}) {
    const RunResult r = run(load_scenario(std::string(EXB_SCENARIO_DIR) + "/" + name + ".scn"));
    for (const auto& app : r.stats.apps) {
      EXPECT_TRUE(app.complete()) << name << " app " << app.app_id;
      EXPECT_EQ(app.mismatches, 0u) << name;
      EXPECT_EQ(app.failed, 0u) << name;
    }
  }
}

TEST(System, ElasticAppGrowsOntoFreedRegions) {
  const RunResult r = run(load_scenario(std::string(EXB_SCENARIO_DIR) + "/elastic.scn"));
  ASSERT_EQ(r.stats.apps.size(), 1u);
  EXPECT_EQ(r.stats.apps[0].fabric_stages_at_start, 1u);
  EXPECT_EQ(r.stats.apps[0].fabric_stages_at_end, 3u);
}

TEST(System, PipelineComputesTheChain) {
  const auto row = bench::run_pipeline(bench::pipeline_scenario(3, 16, bench::default_preset(), 32));
  EXPECT_TRUE(row.complete);
  EXPECT_EQ(row.mismatches, 0u);
  EXPECT_EQ(row.fabric_stages, 3u);
}

TEST(System, HigherQuotaIsFaster) {
  for (const auto& row : bench::bench_bandwidth(128)) {
    EXPECT_LT(row.cycles_q128, row.cycles_q16);
    EXPECT_GT(row.improvement_pct, 0.0);
  }
}

}  // namespace
}  // namespace exb
