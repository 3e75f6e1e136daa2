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

#include <map>

#include "exb/arbiter.hpp"
#include "oracles.hpp"

namespace exb {
namespace {

TEST(Select, MatchesCyclicOrderOracle) {
  for (std::size_t n : {2u, 4u, 5u, 8u}) {
    for (PortMask req = 0; req < (PortMask{1} << n); ++req) {
      EXPECT_EQ(select(req, std::nullopt), oracle::next_in_cyclic_order(req, std::nullopt, n));
      for (PortIndex p = 0; p < n; ++p) EXPECT_EQ(select(req, p), oracle::next_in_cyclic_order(req, p, n));
    }
  }
}

TEST(Select, Examples) {
  EXPECT_EQ(select(0b1010, std::nullopt), PortIndex{1});
  EXPECT_EQ(select(0b1010, PortIndex{1}), PortIndex{3});
  EXPECT_EQ(select(0b1010, PortIndex{3}), PortIndex{1});
  EXPECT_EQ(select(0b0010, PortIndex{1}), PortIndex{1});
  EXPECT_FALSE(select(0, PortIndex{2}).has_value());
}

struct Harness {
  Arbiter arb;
  std::map<PortIndex, unsigned> quotas;

  ArbiterEvents cycle(PortMask requests, bool ack = false) {
    const ArbiterEvents ev = arb.begin_cycle([this](PortIndex m) { return quotas[m]; });
    if (ack) arb.on_ack();
    arb.end_cycle(requests);
    return ev;
  }
};

TEST(Arbiter, TwoCycleDecision) {
  Harness h;
  h.quotas[1] = 8;
  h.cycle(0b10);  // request registered
  EXPECT_FALSE(h.cycle(0b10).granted);
  EXPECT_FALSE(h.cycle(0b10).granted);
  EXPECT_FALSE(h.arb.grant_to());
  const ArbiterEvents ev = h.cycle(0b10);
  ASSERT_TRUE(ev.granted);
  EXPECT_EQ(*ev.granted, PortIndex{1});
  EXPECT_EQ(h.arb.grant_to(), PortIndex{1});
  EXPECT_EQ(h.arb.state().remaining_packages, 8u);
}

TEST(Arbiter, QuotaExhaustionHandsOver) {
  Harness h;
  h.quotas[1] = 2;
  h.quotas[2] = 2;
  h.cycle(0b110);
  h.cycle(0b110);
  h.cycle(0b110);
  ASSERT_EQ(*h.cycle(0b110, true).granted, PortIndex{1});
  h.cycle(0b110, true);
  std::optional<PortIndex> next;
  bool exhausted = false;
  for (int c = 0; c < 8 && !next; ++c) {
    const ArbiterEvents ev = h.cycle(0b110);
    exhausted = exhausted || ev.quota_exhausted;
    if (ev.granted) next = ev.granted;
  }
  EXPECT_TRUE(exhausted);
  EXPECT_EQ(next, PortIndex{2});
  EXPECT_EQ(h.arb.state().prev_grant, PortIndex{1});
}

TEST(Arbiter, IdleGranteeStaysParked) {
  Harness h;
  h.quotas[3] = 8;
  for (int c = 0; c < 4; ++c) h.cycle(0b1000);
  ASSERT_TRUE(h.arb.state().granted());
  for (int c = 0; c < 4; ++c) EXPECT_FALSE(h.cycle(0).released);
  EXPECT_EQ(h.arb.grant_to(), PortIndex{3});
}

TEST(Arbiter, WithdrawnRequestReleasesWhenOthersWait) {
  Harness h;
  h.quotas[3] = 8;
  h.quotas[1] = 8;
  for (int c = 0; c < 4; ++c) h.cycle(0b1000);
  ASSERT_EQ(h.arb.grant_to(), PortIndex{3});
  bool released = false;
  for (int c = 0; c < 3; ++c) released = released || h.cycle(0b0010).released.has_value();
  EXPECT_TRUE(released);
  EXPECT_FALSE(h.arb.grant_to());
  std::optional<PortIndex> next;
  for (int c = 0; c < 4 && !next; ++c) next = h.cycle(0b0010).granted;
  EXPECT_EQ(next, PortIndex{1});
}

TEST(Arbiter, ResetForgetsEverything) {
  Harness h;
  h.quotas[1] = 8;
  for (int c = 0; c < 3; ++c) h.cycle(0b10);
  h.arb.reset();
  EXPECT_EQ(h.arb.state().phase, ArbiterPhase::Idle);
  EXPECT_FALSE(h.arb.state().prev_grant);
}

TEST(Fairness, SmallQuotaTables) {
  for (const auto& q : {std::array<unsigned, 4>{1, 2, 4, 8}, {16, 1, 16, 1}, {3, 3, 3, 3}}) {
    const auto rep = oracle::check_fairness(q, 4);
    EXPECT_TRUE(rep.violations.empty()) << rep.violations.front();
    for (std::size_t m = 0; m < 4; ++m) EXPECT_EQ(rep.acked[m], 4u * q[m]);
  }
}

}  // namespace
}  // namespace exb
