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

#include "exb/scenario.hpp"

namespace exb {
namespace {

constexpr const char* kText = R"(
# comment
[sim]
name = demo
clock_hz = 100e6
grant_timeout = 99
trigger = full
seed = 42

[ports]
count = 4
static = 3

[modules]
1 = multiplier constant=7 cycles=2

[regs]
0x04 = 0x1   # trailing comment

[apps]
0.chain = mul constant=5, enc
0.bursts = 4
0.quota = 16
0.arrive = 20

[host_costs]
multiplier = 10
transfer = 100

[events]
5 poke 0x24 0x0800
6 fire 1 0x1 1 2 3 4 5 6 7
7 submit 2 0x0 1 2 gap=3
)";

TEST(Scenario, ParsesEverySection) {
  const Scenario sc = parse_scenario(kText);
  EXPECT_EQ(sc.name, "demo");
  EXPECT_DOUBLE_EQ(sc.clock_hz, 100e6);
  EXPECT_EQ(sc.timeouts.grant_timeout, 99u);
  EXPECT_EQ(sc.bridge.trigger, TriggerMode::Full);
  EXPECT_EQ(sc.seed, 42u);
  EXPECT_EQ(sc.static_regions, std::vector<PortIndex>{3});
  ASSERT_EQ(sc.modules.count(1), 1u);
  EXPECT_EQ(sc.modules.at(1), (ModuleSpec{ModuleKind::Multiplier, 7, 2}));
  ASSERT_EQ(sc.regs.size(), 1u);
  EXPECT_EQ(sc.regs[0], std::make_pair(RegAddr{4}, Word{1}));
  ASSERT_EQ(sc.apps.size(), 1u);
  const AppDescriptor& app = sc.apps[0];
  EXPECT_EQ(app.chain.size(), 2u);
  EXPECT_EQ(app.chain[0].constant, 5u);
  EXPECT_EQ(app.chain[1].kind, ModuleKind::HammingEncoder);
  EXPECT_EQ(app.data.size(), 4u);
  EXPECT_EQ(app.quota, 16u);
  EXPECT_EQ(app.arrive, 20u);
  EXPECT_EQ(sc.host_costs.at(ModuleKind::Multiplier), 10u);
  EXPECT_EQ(sc.host_transfer_cycles, 100u);
  ASSERT_EQ(sc.events.size(), 3u);
  EXPECT_EQ(sc.events[0].kind, EventKind::Poke);
  EXPECT_EQ(sc.events[0].addr, 0x24u);
  EXPECT_EQ(sc.events[1].kind, EventKind::Fire);
  EXPECT_EQ(sc.events[1].words.size(), 8u);
  EXPECT_EQ(sc.events[2].kind, EventKind::Submit);
  EXPECT_EQ(sc.events[2].channel, 2u);
  EXPECT_EQ(sc.events[2].gap, 3u);
}

TEST(Scenario, OverridesWin) {
  const Scenario sc = parse_scenario(kText, {"sim.trigger=half_full", "sim.grant_timeout=7"});
  EXPECT_EQ(sc.bridge.trigger, TriggerMode::HalfFull);
  EXPECT_EQ(sc.timeouts.grant_timeout, 7u);
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  try {
    parse_scenario("[sim]\nname = x\nbogus = 1\n");
    FAIL() << "unknown key accepted";
  } catch (const ScenarioError& e) {
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_NE(e.diagnostics().front().find("3"), std::string::npos);
  }
  EXPECT_THROW(parse_scenario("[nope]\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("[modules]\n9 = multiplier\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("[events]\n0 explode\n"), ScenarioError);
}

TEST(Scenario, CheckFindsFieldProblems) {
  Scenario sc;
  sc.port_count = 1;
  EXPECT_FALSE(check_scenario(sc).empty());
  sc = Scenario{};
  sc.modules[0] = ModuleSpec{};
  EXPECT_FALSE(check_scenario(sc).empty());
  EXPECT_TRUE(check_scenario(Scenario{}).empty());
}

TEST(GenerateBursts, DeterministicAndTagged) {
  const auto a = generate_bursts(2, 16, 9);
  EXPECT_EQ(a, generate_bursts(2, 16, 9));
  EXPECT_NE(a, generate_bursts(2, 16, 10));
  for (const Burst& b : a) {
    ASSERT_EQ(b.size(), kBurstWords);
    EXPECT_EQ(b[0], 2u);
    for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LT(b[i], 1u << 24);
  }
}

TEST(ApplyChain, ComposesStages) {
  const std::vector<ModuleSpec> chain = {{ModuleKind::Multiplier, 3},
                                         {ModuleKind::HammingEncoder},
                                         {ModuleKind::HammingDecoder}};
  const Burst in{1, 0x123456, 2, 3, 4, 5, 6, 7};
  const Burst out = apply_chain(chain, 0, in);
  EXPECT_EQ(out[0], 1u);
  EXPECT_EQ(out[1], 0x369D02u);
  EXPECT_EQ(apply_chain(chain, 1, in)[1], 0x123456u);
  EXPECT_EQ(apply_chain(chain, 3, in), in);
}

}  // namespace
}  // namespace exb
