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

#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "exb/system.hpp"

namespace exb::oracle {

std::optional<PortIndex> next_in_cyclic_order(PortMask requests, std::optional<PortIndex> prev, std::size_t n) {
  const std::size_t start = prev ? *prev + 1 : 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (start + k) % n;
    if ((requests >> i) & 1u) return i;
  }
  return std::nullopt;
}

namespace {

std::vector<unsigned> data_positions() {
  std::vector<unsigned> pos;
  for (unsigned p = 1; p <= 31; ++p)
    if ((p & (p - 1)) != 0) pos.push_back(p);
  return pos;
}

unsigned bit_at(std::uint32_t word, unsigned pos) { return (word >> (pos - 1)) & 1u; }

}  // namespace

std::uint32_t hamming_encode(std::uint32_t data) {
  static const auto positions = data_positions();
  std::uint32_t cw = 0;
  for (unsigned i = 0; i < positions.size(); ++i)
    if ((data >> i) & 1u) cw |= 1u << (positions[i] - 1);
  for (unsigned k = 0; k < 5; ++k) {
    const unsigned parity_pos = 1u << k;
    unsigned parity = 0;
    for (unsigned p = 1; p <= 31; ++p)
      if (p != parity_pos && (p & parity_pos)) parity ^= bit_at(cw, p);
    if (parity) cw |= 1u << (parity_pos - 1);
  }
  return cw;
}

std::pair<std::uint32_t, unsigned> hamming_decode(std::uint32_t codeword) {
  static const auto positions = data_positions();
  unsigned syndrome = 0;
  for (unsigned k = 0; k < 5; ++k) {
    unsigned check = 0;
    for (unsigned p = 1; p <= 31; ++p)
      if (p & (1u << k)) check ^= bit_at(codeword, p);
    syndrome |= check << k;
  }
  if (syndrome) codeword ^= 1u << (syndrome - 1);
  std::uint32_t data = 0;
  for (unsigned i = 0; i < positions.size(); ++i) data |= bit_at(codeword, positions[i]) << i;
  return {data, syndrome};
}

namespace {

struct Joint {
  MasterIfState m;
  SlaveIfState s;
};

std::vector<std::uint64_t> key(const Joint& j) {
  std::vector<std::uint64_t> k = {static_cast<std::uint64_t>(j.m.state), j.m.words_sent, j.m.acks_received,
                                  j.m.grant_timer, j.m.ack_timer, static_cast<std::uint64_t>(j.m.result),
                                  static_cast<std::uint64_t>(j.s.state), j.s.valid, j.s.stall_asserted};
  return k;
}

}  // namespace

ProtocolReport explore_protocol(std::size_t burst_len, MasterConfig cfg, std::size_t horizon) {
  ProtocolReport rep;
  Burst burst(burst_len);
  for (std::size_t i = 0; i < burst_len; ++i) burst[i] = static_cast<Word>(0xA0 + i);
  const ModuleRequest request{burst, OneHotAddress::to_port(1)};

  // Cycle 0: the request is latched.
  Joint start;
  start.m = master_step(MasterIfState{}, MasterInputs{}, request, cfg).state;
  std::vector<Joint> frontier{start};
  const Cycle bound = cfg.grant_timeout + cfg.ack_timeout + burst_len + 3;

  auto fail = [&rep](std::string msg) {
    if (rep.violations.size() < 16) rep.violations.push_back(std::move(msg));
  };

  for (std::size_t depth = 1; depth <= horizon && !frontier.empty(); ++depth) {
    std::set<std::vector<std::uint64_t>> seen;
    std::vector<Joint> next;
    for (const Joint& j : frontier) {
      const bool requesting = j.m.state == MasterState::Requesting;
      for (unsigned in = 0; in < (requesting ? 16u : 8u); ++in) {
        const bool grant = in & 1u, data_read = in & 2u, dead = in & 4u, error = in & 8u;
        const MasterOutputs drive = master_drive(j.m, grant);
        Joint n = j;
        MasterInputs mi;
        mi.grant = grant;
        mi.error_in = error;
        if (dead) {
          mi.stall = drive.stb;
          n.s = slave_step(j.s, SlaveInputs{}, data_read).state;
        } else {
          const SlaveStep ss = slave_step(j.s, SlaveInputs{drive.cyc, drive.stb, drive.data}, data_read);
          n.s = ss.state;
          mi.ack = ss.out.ack;
          mi.stall = ss.out.stall;
          if (ss.out.ack && ss.out.stall) fail("slave acked and stalled in the same cycle");
          if (ss.state.stall_asserted && ss.out.ack) fail("ack while stalling");
        }
        const MasterStep ms = master_step(j.m, mi, std::nullopt, cfg);
        n.m = ms.state;
        ++rep.states;

        if (n.m.acks_received > n.m.words_sent || n.m.words_sent > burst_len)
          fail("counter invariant broken at depth " + std::to_string(depth));
        if (ms.out.completed) {
          fail("outcome reported twice");
          continue;
        }
        if (n.m.state == MasterState::Complete) {
          const bool all_acked = n.m.acks_received == burst_len;
          if ((n.m.result == ErrorCode::Success) != all_acked)
            fail("Success must coincide with every word acked (depth " + std::to_string(depth) + ")");
          if (n.m.result == ErrorCode::InvalidAddress && n.m.words_sent != 0) fail("rejected request sent data");
          // The Complete state reports on the next cycle, then the master is idle for good.
          const MasterStep done = master_step(n.m, MasterInputs{}, std::nullopt, cfg);
          if (!done.out.completed || *done.out.completed != n.m.result) fail("Complete state lost its outcome");
          if (done.state.state != MasterState::Idle) fail("master not idle after reporting");
          const Cycle latency = depth + 2;
          rep.worst_completion = std::max(rep.worst_completion, latency);
          if (latency > bound) fail("completion after " + std::to_string(latency) + " cycles exceeds the watchdog bound");
          ++rep.paths_completed;
          continue;
        }
        if (n.m.state == MasterState::Idle) {
          fail("request dropped without an outcome");
          continue;
        }
        if (seen.insert(key(n)).second) next.push_back(n);
      }
    }
    frontier = std::move(next);
  }
  if (!frontier.empty() && horizon >= bound)
    fail(std::to_string(frontier.size()) + " states still pending at the horizon");
  return rep;
}

FairnessReport check_fairness(const std::array<unsigned, 4>& quotas, std::size_t rotations) {
  FairnessReport rep;
  unsigned total = 0;
  for (unsigned q : quotas) total += q;
  Scenario sc;
  sc.name = "fairness";
  sc.port_count = 5;
  sc.timeouts.grant_timeout = 1'000'000;
  const RegisterFile map(sc.port_count);
  std::map<RegAddr, Word> quota_words;
  for (PortIndex m = 1; m <= 4; ++m) {
    sc.modules[m] = ModuleSpec{ModuleKind::HostStub};
    sc.regs.emplace_back(map.region_destination_addr(m), port_bit(0));
    sc.regs.emplace_back(map.allowed_addr(m), port_bit(0));
    const LaneRef lane = map.quota_lane(0, m);
    quota_words[lane.addr] |= Word{quotas[m - 1]} << lane.shift;
  }
  for (const auto& [addr, word] : quota_words) sc.regs.emplace_back(addr, word);
  // Saturating demand: nobody runs out of data inside the measured rotations.
  const std::size_t len = 16 * (rotations + 2);
  for (PortIndex m = 1; m <= 4; ++m) {
    ScenarioEvent ev;
    ev.kind = EventKind::Fire;
    ev.port = m;
    ev.words.assign(len, static_cast<Word>(m));
    ev.words[0] = static_cast<Word>(m & 3u);
    sc.events.push_back(ev);
  }
  System sys(sc);
  const Cycle window = rotations * (total + 4 * 8) + 64;
  while (sys.now() < window) sys.step();

  struct Turn {
    PortIndex master;
    std::size_t acks = 0;
    bool closed = false;
  };
  std::vector<Turn> turns;
  for (const TraceRecord& r : sys.trace().records()) {
    if (r.component == Component::Arbiter && r.unit == 0) {
      if (r.event == TraceEvent::Grant) turns.push_back({static_cast<PortIndex>(r.src)});
      if (r.event == TraceEvent::Release && !turns.empty()) turns.back().closed = true;
    }
    if (r.component == Component::SlaveIf && r.unit == 0 && r.event == TraceEvent::Ack) {
      if (turns.empty() || turns.back().closed || turns.back().master != static_cast<PortIndex>(r.src)) {
        rep.violations.push_back("ack from master " + std::to_string(r.src) + " outside its turn at cycle " +
                                 std::to_string(r.cycle));
        continue;
      }
      ++turns.back().acks;
    }
  }
  const std::size_t wanted = rotations * 4;
  if (turns.size() < wanted) {
    rep.violations.push_back("only " + std::to_string(turns.size()) + " turns in the window");
    return rep;
  }
  for (std::size_t t = 0; t < wanted; ++t) {
    const PortIndex expect = 1 + t % 4;
    if (turns[t].master != expect)
      rep.violations.push_back("turn " + std::to_string(t) + " went to master " + std::to_string(turns[t].master));
    if (turns[t].acks != quotas[turns[t].master - 1])
      rep.violations.push_back("turn " + std::to_string(t) + " acked " + std::to_string(turns[t].acks) + ", quota " +
                               std::to_string(quotas[turns[t].master - 1]));
    rep.acked[turns[t].master - 1] += turns[t].acks;
  }
  rep.turns = wanted;
  return rep;
}

IsolationReport fuzz_isolation(std::size_t cases, std::uint64_t seed) {
  IsolationReport rep;
  std::mt19937_64 rng(seed);
  auto fail = [&rep](std::size_t i, const std::string& msg) {
    if (rep.violations.size() < 16) rep.violations.push_back("case " + std::to_string(i) + ": " + msg);
  };
  for (std::size_t i = 0; i < cases; ++i) {
    const PortIndex src = 1 + rng() % 3;
    const PortMask mask = rng() & 0xFu;
    const PortMask dest = rng() & 0xFu;
    Scenario sc;
    sc.name = "isolation";
    sc.modules[src] = ModuleSpec{ModuleKind::HostStub};
    const RegisterFile map(sc.port_count);
    sc.regs.emplace_back(map.region_destination_addr(src), dest);
    sc.regs.emplace_back(map.allowed_addr(src), mask);
    for (PortIndex s = 0; s < 4; ++s) sc.regs.emplace_back(map.quota_lane(s, 0).addr, 0x08080808u);
    ScenarioEvent ev;
    ev.kind = EventKind::Fire;
    ev.port = src;
    ev.words = {static_cast<Word>(src & 3u), 1, 2, 3, 4, 5, 6, 7};
    sc.events.push_back(ev);
    System sys(sc);
    for (int c = 0; c < 40; ++c) sys.step();

    const bool should_pass = std::popcount(dest) == 1 && (dest & mask) != 0;
    const PortIndex dport = static_cast<PortIndex>(std::countr_zero(dest));
    std::optional<ErrorCode> outcome;
    std::optional<std::int32_t> validated;
    bool rejected = false;
    std::size_t fabric_events = 0, acks_at_dest = 0, deliveries = 0;
    for (const TraceRecord& r : sys.trace().records()) {
      if (r.component == Component::MasterPort && r.unit == src) {
        if (r.event == TraceEvent::Validate) validated = r.dst;
        if (r.event == TraceEvent::Reject) rejected = true;
      }
      if (r.component == Component::SlaveIf || r.component == Component::Arbiter || r.component == Component::Module)
        ++fabric_events;
      // A module addressing itself loops forever; only the first burst counts.
      if (r.component == Component::SlaveIf && r.event == TraceEvent::Ack && r.unit == dport &&
          r.src == static_cast<std::int32_t>(src) && !outcome)
        ++acks_at_dest;
      if (r.component == Component::Bridge && r.event == TraceEvent::Deliver) ++deliveries;
      if (r.component == Component::MasterIf && r.unit == src && r.event == TraceEvent::Complete && !outcome)
        outcome = r.code;
    }
    if (!outcome) {
      fail(i, "request never completed");
      continue;
    }
    if (should_pass) {
      ++rep.accepted;
      if (rejected || !validated) fail(i, "valid request rejected");
      else if (!((mask >> *validated) & 1u)) fail(i, "forwarded outside the allowed mask");
      if (validated && *validated != static_cast<std::int32_t>(dport)) fail(i, "forwarded to the wrong slave");
      if (*outcome != ErrorCode::Success || acks_at_dest != kBurstWords) fail(i, "accepted burst not delivered");
      if (sys.regs().region_status(src) != ErrorCode::Success) fail(i, "status lane not Success");
    } else {
      ++rep.rejected;
      if (!rejected || validated) fail(i, "invalid request forwarded");
      if (*outcome != ErrorCode::InvalidAddress) fail(i, "rejected request without InvalidAddress");
      if (sys.regs().region_status(src) != ErrorCode::InvalidAddress) fail(i, "status lane not InvalidAddress");
      if (fabric_events != 0) fail(i, std::to_string(fabric_events) + " slave-side events for a rejected request");
      if (deliveries != 0) fail(i, "data delivered for a rejected request");
    }
    ++rep.cases;
  }
  return rep;
}

}  // namespace exb::oracle
