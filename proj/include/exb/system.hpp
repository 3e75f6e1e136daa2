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
 * @file system.hpp
 * @brief Cycle-stepped simulation kernel.
 *
 * Order of work inside one cycle:
 *
 *   1. scenario events and manager timers (register writes, arrivals, reconfiguration)
 *   2. reset lines sampled by the crossbar
 *   3. slave-port arbiters take their decision
 *   4. bridge ingress: host pushes, trigger check
 *   5. master interfaces: address validation, grant, bus drive
 *   6. slave interfaces: store/ack or stall
 *   7. master interfaces advance, completions reported
 *   8. request lines registered for the arbiters
 *   9. computation modules
 *  10. bridge egress
 *
 * Module requests and read strobes are registered: they reach the master/slave interface in
 * the following cycle.
 */

#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exb/bridge.hpp"
#include "exb/compute.hpp"
#include "exb/crossbar.hpp"
#include "exb/manager.hpp"
#include "exb/protocol.hpp"
#include "exb/regfile.hpp"
#include "exb/scenario.hpp"
#include "exb/trace.hpp"

namespace exb {

struct RequestStat {
  PortIndex port = 0;
  int app = -1;
  Cycle request = 0;
  std::optional<Cycle> first_data;
  std::optional<Cycle> complete;
  std::optional<ErrorCode> code;
  PortMask destination = 0;

  /// Request to first data word on the bus.
  std::optional<Cycle> time_to_grant() const {
    if (!first_data) return std::nullopt;
    return *first_data - request;
  }
  /// Request to the cycle the outcome is registered, both inclusive.
  std::optional<Cycle> completion_latency() const {
    if (!complete) return std::nullopt;
    return *complete - request + 1;
  }

  friend bool operator==(const RequestStat&, const RequestStat&) = default;
};

struct AppReport {
  unsigned app_id = 0;
  std::size_t bursts = 0;
  std::size_t fabric_stages_at_start = 0;
  std::size_t fabric_stages_at_end = 0;
  Cycle arrive = 0;
  std::optional<Cycle> data_start;
  std::optional<Cycle> data_end;
  std::optional<Cycle> finished;
  std::size_t delivered = 0;
  std::size_t failed = 0;
  std::size_t mismatches = 0;
  /// First host push to last result back at the host.
  Cycle fabric_cycles = 0;
  Cycle host_cycles = 0;
  Cycle transfer_cycles = 0;
  std::vector<Burst> outputs;

  Cycle total_cycles() const { return fabric_cycles + host_cycles + transfer_cycles; }
  bool complete() const { return finished.has_value(); }
};

struct LatencyStats {
  double clock_hz = 250e6;
  std::vector<RequestStat> requests;
  std::vector<AppReport> apps;

  double to_ms(Cycle c) const { return static_cast<double>(c) / clock_hz * 1e3; }
};

/// Rebuilds the per-request statistics from a stored trace.
std::vector<RequestStat> stats_from_trace(const std::vector<TraceRecord>& trace);

struct RunResult {
  std::string name;
  Cycle cycles = 0;
  Trace trace;
  LatencyStats stats;
  std::array<std::vector<C2hDelivery>, kHostChannels> c2h;
  HostBridge::Counters bridge;
  std::vector<BurstRecord> bursts;
  RegisterFile regs;
};

class CycleLimitExceeded : public std::runtime_error {
 public:
  explicit CycleLimitExceeded(Cycle limit)
      : std::runtime_error("cycle limit of " + std::to_string(limit) + " exceeded"), limit_(limit) {}
  Cycle limit() const { return limit_; }

 private:
  Cycle limit_;
};

class System {
 public:
  /// Validates the scenario; throws ScenarioError.
  explicit System(Scenario sc);

  /// Advances one clock cycle.
  void step();

  /// Steps until nothing can happen any more. Idle stretches before a timed event are skipped.
  void run_to_end();

  /// Runs to the end and hands over the results.
  RunResult finish();

  /// Nothing in flight anywhere in the fabric.
  bool fabric_idle() const;

  Cycle now() const { return now_; }
  const Scenario& scenario() const { return sc_; }
  RegisterFile& regs() { return regs_; }
  const RegisterFile& regs() const { return regs_; }
  const Crossbar& crossbar() const { return xbar_; }
  const MasterIfState& master(PortIndex p) const { return mi_.at(p); }
  const SlaveIfState& slave(PortIndex p) const { return si_.at(p); }
  const ComputeModule* module(PortIndex p) const { return mod_.at(p) ? &*mod_[p] : nullptr; }
  const HostBridge& bridge() const { return bridge_; }
  const Manager& manager() const { return mgr_; }
  const Trace& trace() const { return trace_; }
  const LatencyStats& stats() const { return stats_; }

  /// Stimulus helpers, applied before the next step().
  bool fire(PortIndex port, Burst words);
  void poke(RegAddr addr, Word value);
  std::size_t submit(std::size_t channel, HostBurst burst);

 private:
  struct AppRun {
    std::size_t handle = 0;
    bool arrived = false;
    bool started = false;
    bool release_pending = false;
    std::vector<Burst> expected;
  };

  void emit(Component c, std::size_t unit, TraceEvent e, long src = -1, long dst = -1, int app = -1,
            std::optional<Word> word = std::nullopt, std::optional<ErrorCode> code = std::nullopt);
  void apply_events();
  void apply(const std::vector<ManagerAction>& actions);
  void arrive(std::size_t a);
  void start_ready_apps();
  void on_delivery(const C2hDelivery& d);
  void on_failure(unsigned app_id);
  void check_finished(std::size_t a);
  void release_quiet_apps();
  bool port_quiet(PortIndex p) const;
  std::optional<std::size_t> app_by_id(unsigned app_id) const;
  std::optional<Cycle> next_wakeup() const;

  Scenario sc_;
  RegisterFile regs_;
  Crossbar xbar_;
  HostBridge bridge_;
  Manager mgr_;
  Trace trace_;
  Cycle now_ = 0;
  std::size_t next_event_ = 0;

  std::vector<MasterIfState> mi_;
  std::vector<SlaveIfState> si_;
  std::vector<std::optional<ComputeModule>> mod_;
  std::vector<std::optional<ModuleRequest>> pending_req_;
  std::vector<char> data_read_;
  std::vector<PortIndex> last_writer_;
  std::vector<std::optional<std::size_t>> open_req_;

  std::vector<AppRun> apps_;
  LatencyStats stats_;
};

/// Builds a system, runs it to the end and returns the results.
RunResult run(const Scenario& sc);

}  // namespace exb
