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

#include "exb/manager.hpp"

namespace exb {
namespace {

AppDescriptor three_stage(unsigned id = 1) {
  AppDescriptor a;
  a.app_id = id;
  a.chain = {{ModuleKind::Multiplier, 3}, {ModuleKind::HammingEncoder}, {ModuleKind::HammingDecoder}};
  a.quota = 8;
  return a;
}

TEST(Manager, HostPortIsNeverARegion) {
  Manager m(4);
  EXPECT_EQ(m.region(0).state, RegionState::Static);
  for (PortIndex p = 1; p < 4; ++p) EXPECT_EQ(m.region(p).state, RegionState::Free);
}

TEST(Manager, PlacesWholeChainAndWiresIt) {
  RegisterFile regs;
  Manager m(4, {100});
  const auto app = m.add_app(three_stage());
  const auto actions = m.place(app, 0, regs);
  ASSERT_EQ(actions.size(), 3u);
  EXPECT_EQ(m.fabric_stages(app), 3u);
  EXPECT_TRUE(m.waiting().empty());
  EXPECT_EQ(regs.reset_lines(), 0b1110u);
  EXPECT_EQ(regs.icap_status(), IcapStatus::Busy);
  // Chain: host -> 1 -> 2 -> 3 -> host.
  EXPECT_EQ(regs.app_destination(1).port(), PortIndex{1});
  EXPECT_EQ(regs.region_destination(1).port(), PortIndex{2});
  EXPECT_EQ(regs.region_destination(2).port(), PortIndex{3});
  EXPECT_EQ(regs.region_destination(3).port(), PortIndex{0});
  EXPECT_EQ(regs.allowed(1), 0b0101u);
  EXPECT_EQ(regs.allowed(0) & 0b0010u, 0b0010u);
  EXPECT_EQ(regs.quota(2, 1), 8u);
  EXPECT_EQ(regs.quota(1, 0), 8u);
}

TEST(Manager, ReconfigurationsAreSerialized) {
  RegisterFile regs;
  Manager m(4, {100});
  const auto app = m.add_app(three_stage());
  m.place(app, 10, regs);
  EXPECT_EQ(m.region(1).ready_at, 110u);
  EXPECT_EQ(m.region(2).ready_at, 210u);
  EXPECT_EQ(m.region(3).ready_at, 310u);
  EXPECT_EQ(m.next_ready(), Cycle{110});
  EXPECT_FALSE(m.ready(app));
  EXPECT_EQ(m.tick(110, regs).size(), 1u);
  EXPECT_EQ(regs.reset_lines(), 0b1100u);
  m.tick(310, regs);
  EXPECT_TRUE(m.ready(app));
  EXPECT_FALSE(m.busy());
  EXPECT_EQ(regs.icap_status(), IcapStatus::Done);
  EXPECT_EQ(regs.reset_lines(), 0u);
}

TEST(Manager, PartialPlacementWaitsAndExpands) {
  RegisterFile regs;
  Manager m(4, {50});
  m.set_static(2);
  m.set_static(3);
  const auto app = m.add_app(three_stage());
  m.place(app, 0, regs);
  EXPECT_EQ(m.fabric_stages(app), 1u);
  ASSERT_EQ(m.waiting().size(), 1u);
  EXPECT_EQ(regs.region_destination(1).port(), PortIndex{0});
  m.tick(50, regs);

  const auto actions = m.free_region(3, 100, regs);
  ASSERT_GE(actions.size(), 2u);
  EXPECT_EQ(actions[0].kind, ManagerActionKind::Released);
  EXPECT_EQ(actions[1].kind, ManagerActionKind::ReconfigStart);
  EXPECT_EQ(m.fabric_stages(app), 2u);
  // Stage 0 keeps sending to the host until the new region is ready.
  EXPECT_EQ(regs.region_destination(1).port(), PortIndex{0});
  m.tick(150, regs);
  EXPECT_EQ(regs.region_destination(1).port(), PortIndex{3});
  EXPECT_EQ(regs.region_destination(3).port(), PortIndex{0});
  EXPECT_EQ(m.owner(3), std::make_pair(app, std::size_t{1}));
}

TEST(Manager, FreeRefusesLiveRegions) {
  RegisterFile regs;
  Manager m(4, {10});
  const auto app = m.add_app(three_stage());
  m.place(app, 0, regs);
  EXPECT_TRUE(m.free_region(1, 0, regs).empty());
  m.tick(30, regs);
  EXPECT_TRUE(m.free_region(1, 30, regs).empty());
  EXPECT_TRUE(m.free_region(0, 30, regs).empty());
}

TEST(Manager, ReleaseClearsWiring) {
  RegisterFile regs;
  Manager m(4, {10});
  const auto app = m.add_app(three_stage());
  m.place(app, 0, regs);
  m.tick(30, regs);
  const auto actions = m.release_app(app, 40, regs);
  EXPECT_EQ(actions.size(), 3u);
  for (PortIndex p = 1; p < 4; ++p) {
    EXPECT_EQ(m.region(p).state, RegionState::Free);
    EXPECT_EQ(regs.allowed(p), 0u);
    EXPECT_TRUE(regs.region_destination(p).empty());
  }
  EXPECT_TRUE(regs.app_destination(1).empty());
  EXPECT_EQ(regs.allowed(0), 0u);
  EXPECT_TRUE(m.release_app(app, 41, regs).empty());
}

TEST(Manager, FreedRegionGoesToOldestWaitingApp) {
  RegisterFile regs;
  Manager m(4, {10});
  m.set_static(3);
  const auto a = m.add_app(three_stage(1));
  const auto b = m.add_app(three_stage(2));
  m.place(a, 0, regs);
  EXPECT_EQ(m.fabric_stages(a), 2u);
  m.place(b, 0, regs);
  EXPECT_EQ(m.fabric_stages(b), 0u);
  m.free_region(3, 100, regs);
  EXPECT_EQ(m.fabric_stages(a), 3u);
  EXPECT_EQ(m.fabric_stages(b), 0u);
}

}  // namespace
}  // namespace exb
