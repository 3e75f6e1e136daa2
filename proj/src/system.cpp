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

#include "exb/system.hpp"

#include <algorithm>
#include <limits>
#include <memory>

namespace exb {

namespace {

int app_tag(const Burst& b) { return b.empty() ? -1 : static_cast<int>(app_of(b.front())); }

long port_or_none(OneHotAddress a) {
  auto p = a.port();
  return p ? static_cast<long>(*p) : -1;
}

bool arbiter_settled(const Arbiter& a) {
  const ArbiterState& s = a.state();
  if (s.phase == ArbiterPhase::Idle) return s.seen_requests == 0;
  return s.phase == ArbiterPhase::Granted && s.seen_requests == 0 && s.remaining_packages > 0 && s.seen_remaining > 0;
}

}  // namespace

System::System(Scenario sc)
    : sc_(std::move(sc)),
      regs_(sc_.port_count),
      xbar_(sc_.port_count),
      bridge_(sc_.bridge),
      mgr_(sc_.port_count, ManagerConfig{sc_.reconfig_cycles}),
      trace_(sc_.record_trace),
      mi_(sc_.port_count),
      si_(sc_.port_count),
      mod_(sc_.port_count),
      pending_req_(sc_.port_count),
      data_read_(sc_.port_count, 0),
      last_writer_(sc_.port_count, 0),
      open_req_(sc_.port_count) {
  validate_scenario(sc_);
  stats_.clock_hz = sc_.clock_hz;
  std::stable_sort(sc_.events.begin(), sc_.events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.cycle < b.cycle; });
  for (const auto& [port, spec] : sc_.modules) {
    mod_[port].emplace(port, spec);
    mgr_.set_static(port, spec);
  }
  for (PortIndex p : sc_.static_regions) mgr_.set_static(p);
  for (const auto& [addr, value] : sc_.regs) regs_.write(addr, value);
  for (const auto& app : sc_.apps) {
    AppRun run;
    run.handle = mgr_.add_app(app);
    run.expected = app.expected;
    if (run.expected.empty())
      for (const auto& b : app.data) run.expected.push_back(apply_chain(app.chain, 0, b));
    apps_.push_back(std::move(run));
    AppReport rep;
    rep.app_id = app.app_id;
    rep.bursts = app.data.size();
    rep.arrive = app.arrive;
    stats_.apps.push_back(rep);
  }
}

void System::emit(Component c, std::size_t unit, TraceEvent e, long src, long dst, int app, std::optional<Word> word,
                  std::optional<ErrorCode> code) {
  trace_.emit({now_, c, static_cast<std::uint32_t>(unit), e, static_cast<std::int32_t>(src),
               static_cast<std::int32_t>(dst), app, word, code});
}

bool System::fire(PortIndex port, Burst words) {
  auto& m = mod_.at(port);
  if (!m || !m->idle() || regs_.in_reset(port) || words.empty()) {
    emit(Component::Module, port, TraceEvent::Error, static_cast<long>(port), -1, app_tag(words));
    return false;
  }
  m->fire(std::move(words));
  return true;
}

void System::poke(RegAddr addr, Word value) {
  regs_.write(addr, value);
  emit(Component::Regfile, 0, TraceEvent::Poke, static_cast<long>(addr), -1, -1, value);
}

std::size_t System::submit(std::size_t channel, HostBurst burst) { return bridge_.submit(channel, std::move(burst)); }

void System::apply(const std::vector<ManagerAction>& actions) {
  for (const auto& a : actions) {
    const int app = a.app ? static_cast<int>(mgr_.app(*a.app).app_id) : -1;
    switch (a.kind) {
      case ManagerActionKind::ReconfigStart:
        mod_[a.port].reset();
        emit(Component::Manager, 0, TraceEvent::Reconfig, static_cast<long>(a.port), -1, app, 1);
        break;
      case ManagerActionKind::ReconfigDone:
        mod_[a.port].emplace(a.port, *a.module);
        emit(Component::Manager, 0, TraceEvent::Reconfig, static_cast<long>(a.port), -1, app, 0);
        break;
      case ManagerActionKind::Released:
      case ManagerActionKind::Rewired:
        mod_[a.port].reset();
        emit(Component::Manager, 0, TraceEvent::Release, static_cast<long>(a.port), -1, app);
        break;
    }
  }
}

void System::arrive(std::size_t a) {
  AppRun& run = apps_[a];
  run.arrived = true;
  apply(mgr_.place(run.handle, now_, regs_));
  AppReport& rep = stats_.apps[a];
  const AppDescriptor& desc = mgr_.app(run.handle);
  if (mgr_.fabric_stages(run.handle) > 0) return;
  // No region at all: the whole chain runs on the server.
  rep.host_cycles = rep.bursts * host_cost(sc_, desc.chain, 0);
  for (const auto& b : desc.data) rep.outputs.push_back(apply_chain(desc.chain, 0, b));
  rep.delivered = rep.bursts;
  rep.finished = now_;
  run.started = true;
  check_finished(a);
}

void System::apply_events() {
  for (std::size_t a = 0; a < apps_.size(); ++a)
    if (!apps_[a].arrived && mgr_.app(apps_[a].handle).arrive <= now_) arrive(a);

  while (next_event_ < sc_.events.size() && sc_.events[next_event_].cycle <= now_) {
    const ScenarioEvent& ev = sc_.events[next_event_++];
    switch (ev.kind) {
      case EventKind::Poke:
        poke(ev.addr, ev.value);
        break;
      case EventKind::Submit:
        submit(ev.channel, HostBurst{ev.words, ev.gap});
        break;
      case EventKind::Fire:
        fire(ev.port, ev.words);
        break;
      case EventKind::Free: {
        const Region& r = mgr_.region(ev.port);
        if (r.state == RegionState::Free) break;
        auto actions = mgr_.free_region(ev.port, now_, regs_);
        if (actions.empty())
          emit(Component::Manager, 0, TraceEvent::Error, static_cast<long>(ev.port));
        apply(actions);
        break;
      }
    }
  }
  release_quiet_apps();
  apply(mgr_.tick(now_, regs_));
  start_ready_apps();
}

void System::start_ready_apps() {
  for (std::size_t a = 0; a < apps_.size(); ++a) {
    AppRun& run = apps_[a];
    if (!run.arrived || run.started || !mgr_.ready(run.handle)) continue;
    run.started = true;
    const AppDescriptor& desc = mgr_.app(run.handle);
    AppReport& rep = stats_.apps[a];
    rep.data_start = now_;
    rep.fabric_stages_at_start = mgr_.fabric_stages(run.handle);
    for (const auto& b : desc.data) bridge_.submit(desc.channel, HostBurst{b, desc.gap});
  }
}

std::optional<std::size_t> System::app_by_id(unsigned app_id) const {
  for (std::size_t a = 0; a < apps_.size(); ++a)
    if (apps_[a].started && !stats_.apps[a].finished && stats_.apps[a].app_id == app_id) return a;
  return std::nullopt;
}

void System::on_delivery(const C2hDelivery& d) {
  if (d.words.empty()) return;
  auto a = app_by_id(app_of(d.words.front()));
  if (!a) return;
  const AppRun& run = apps_[*a];
  const AppDescriptor& desc = mgr_.app(run.handle);
  std::size_t from = 0;
  if (d.source != kHostPort) {
    auto own = mgr_.owner(d.source);
    from = own && own->first == run.handle ? own->second + 1 : desc.chain.size();
  }
  AppReport& rep = stats_.apps[*a];
  rep.host_cycles += host_cost(sc_, desc.chain, from);
  rep.outputs.push_back(apply_chain(desc.chain, from, d.words));
  ++rep.delivered;
  rep.data_end = now_;
  check_finished(*a);
}

void System::on_failure(unsigned app_id) {
  if (auto a = app_by_id(app_id)) {
    ++stats_.apps[*a].failed;
    check_finished(*a);
  }
}

void System::check_finished(std::size_t a) {
  AppReport& rep = stats_.apps[a];
  AppRun& run = apps_[a];
  if (rep.delivered + rep.failed < rep.bursts) return;
  if (rep.data_start) {
    rep.finished = now_;
    const Cycle end = rep.data_end.value_or(now_);
    rep.fabric_cycles = end - *rep.data_start + 1;
    rep.transfer_cycles = 2 * sc_.host_transfer_cycles;
  }
  rep.fabric_stages_at_end = mgr_.fabric_stages(run.handle);

  auto got = rep.outputs;
  auto want = run.expected;
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  std::vector<Burst> extra;
  std::set_difference(got.begin(), got.end(), want.begin(), want.end(), std::back_inserter(extra));
  rep.mismatches = extra.size();

  run.release_pending = sc_.auto_release;
}

bool System::port_quiet(PortIndex p) const {
  return mi_[p].state == MasterState::Idle && !pending_req_[p] && !data_read_[p] && si_[p].valid == 0 &&
         (!mod_[p] || mod_[p]->idle());
}

void System::release_quiet_apps() {
  for (AppRun& run : apps_) {
    if (!run.release_pending) continue;
    // The last result can reach the host a cycle before its master records the outcome.
    const auto& pl = mgr_.placement(run.handle);
    if (!std::all_of(pl.begin(), pl.end(), [&](const auto& p) { return !p || port_quiet(*p); })) continue;
    run.release_pending = false;
    apply(mgr_.release_app(run.handle, now_, regs_));
  }
}

void System::step() {
  const std::size_t n = sc_.port_count;
  apply_events();

  for (const ResetChange& ch : xbar_.sync_resets(regs_)) {
    emit(Component::Regfile, 0, TraceEvent::Reset, static_cast<long>(ch.port), -1, -1, ch.asserted ? 1u : 0u);
    if (!ch.asserted) continue;
    const PortIndex p = ch.port;
    mi_[p] = MasterIfState{};
    si_[p] = SlaveIfState{};
    pending_req_[p].reset();
    open_req_[p].reset();
    data_read_[p] = 0;
    if (mod_[p]) mod_[p]->reset();
    if (p == kHostPort) bridge_.reset();
  }

  const auto arb = xbar_.begin_cycle(regs_);
  for (PortIndex s = 0; s < n; ++s) {
    if (arb[s].released) {
      emit(Component::Arbiter, s, TraceEvent::Release, static_cast<long>(*arb[s].released), static_cast<long>(s));
      if (arb[s].quota_exhausted)
        emit(Component::Arbiter, s, TraceEvent::QuotaExhausted, static_cast<long>(*arb[s].released), static_cast<long>(s));
    }
    if (arb[s].granted) emit(Component::Arbiter, s, TraceEvent::Grant, static_cast<long>(*arb[s].granted), static_cast<long>(s));
  }

  std::vector<std::optional<ModuleRequest>> req(n);
  for (PortIndex m = 0; m < n; ++m) {
    if (pending_req_[m] && mi_[m].state == MasterState::Idle) {
      req[m] = std::move(pending_req_[m]);
      pending_req_[m].reset();
    }
  }
  if (!xbar_.master(kHostPort).in_reset) {
    IngressOutputs in = bridge_.ingress_step(now_, regs_, mi_[kHostPort].state == MasterState::Idle && !req[kHostPort]);
    for (const PushNotice& p : in.pushes)
      emit(Component::Bridge, 0, TraceEvent::Push, static_cast<long>(p.channel), -1,
           static_cast<int>(bridge_.records()[p.record].app), p.word);
    for (std::size_t r : in.dropped) {
      const BurstRecord& rec = bridge_.records()[r];
      regs_.report_app_status(rec.app, ErrorCode::InvalidAddress);
      emit(Component::Bridge, 0, TraceEvent::Drop, static_cast<long>(rec.channel), -1, static_cast<int>(rec.app),
           std::nullopt, ErrorCode::InvalidAddress);
      on_failure(rec.app);
    }
    for (const C2hDelivery& d : in.loopback) {
      emit(Component::Bridge, 0, TraceEvent::Deliver, 0, static_cast<long>(d.channel), app_tag(d.words), d.words.front());
      on_delivery(d);
    }
    if (in.request) req[kHostPort] = std::move(in.request);
  }

  std::vector<MasterInputs> min(n);
  std::vector<MasterOutputs> drive(n);
  std::vector<char> dead(n, 0);
  for (PortIndex m = 0; m < n; ++m) {
    if (xbar_.master(m).in_reset) continue;
    MasterIfState& s = mi_[m];
    if (s.state == MasterState::Requesting) {
      auto target = xbar_.issue(m, s.destination, regs_);
      if (target) {
        emit(Component::MasterPort, m, TraceEvent::Validate, static_cast<long>(m), static_cast<long>(*target),
             app_tag(s.burst), s.destination.bits());
      } else {
        emit(Component::MasterPort, m, TraceEvent::Reject, static_cast<long>(m), port_or_none(s.destination),
             app_tag(s.burst), s.destination.bits(), ErrorCode::InvalidAddress);
        min[m].error_in = true;
      }
    }
    bool grant = xbar_.grant(m);
    // A link whose slave went into reset mid-burst never answers again.
    if (!grant && xbar_.dead_link(m) && s.words_sent > 0 &&
        (s.state == MasterState::Sending || s.state == MasterState::Stalled || s.state == MasterState::AwaitGrant)) {
      grant = true;
      dead[m] = 1;
    }
    min[m].grant = grant;
    if (m == kHostPort) min[m].words_available = bridge_.words_available();
    drive[m] = master_drive(s, grant, min[m].words_available);
  }

  std::vector<SlaveOutputs> sout(n);
  for (PortIndex s = 0; s < n; ++s) {
    if (xbar_.slave(s).in_reset) continue;
    SlaveInputs sin;
    const auto conn = xbar_.slave(s).connected_master();
    if (conn && !xbar_.master(*conn).in_reset && xbar_.master(*conn).target == s) {
      sin.cyc = drive[*conn].cyc;
      sin.stb = drive[*conn].stb;
      sin.data = drive[*conn].data;
    }
    SlaveStep st = slave_step(si_[s], sin, data_read_[s] != 0);
    data_read_[s] = 0;
    si_[s] = st.state;
    sout[s] = st.out;
    if (st.out.ack) {
      min[*conn].ack = true;
      xbar_.ack(s);
      last_writer_[s] = *conn;
      emit(Component::SlaveIf, s, TraceEvent::Ack, static_cast<long>(*conn), static_cast<long>(s), -1, sin.data);
    }
    if (st.out.stall) {
      min[*conn].stall = true;
      emit(Component::SlaveIf, s, TraceEvent::Stall, static_cast<long>(*conn), static_cast<long>(s));
    }
  }
  for (PortIndex m = 0; m < n; ++m)
    if (dead[m]) min[m].stall = true;

  std::vector<std::optional<ErrorCode>> completed(n);
  auto cyc = std::make_unique<bool[]>(n);
  for (PortIndex m = 0; m < n; ++m) {
    if (xbar_.master(m).in_reset) continue;
    cyc[m] = drive[m].cyc;
    MasterStep st = master_step(mi_[m], min[m], req[m], sc_.timeouts);
    if (req[m] && !st.out.latched) pending_req_[m] = std::move(req[m]);
    if (st.out.latched) {
      const int app = app_tag(st.state.burst);
      emit(Component::MasterIf, m, TraceEvent::Request, static_cast<long>(m), port_or_none(st.state.destination), app,
           st.state.destination.bits());
      open_req_[m] = stats_.requests.size();
      stats_.requests.push_back({m, app, now_, std::nullopt, std::nullopt, std::nullopt, st.state.destination.bits()});
    }
    if (st.out.accepted) {
      const auto target = xbar_.master(m).target;
      emit(Component::MasterIf, m, TraceEvent::Data, static_cast<long>(m), target ? static_cast<long>(*target) : -1,
           app_tag(mi_[m].burst), drive[m].data);
      if (open_req_[m] && !stats_.requests[*open_req_[m]].first_data) stats_.requests[*open_req_[m]].first_data = now_;
      if (m == kHostPort) bridge_.on_accepted(now_);
    }
    if (st.out.completed) {
      const ErrorCode code = *st.out.completed;
      const int app = app_tag(mi_[m].burst);
      emit(Component::MasterIf, m, TraceEvent::Complete, static_cast<long>(m), port_or_none(mi_[m].destination), app,
           std::nullopt, code);
      if (code != ErrorCode::Success)
        emit(Component::MasterIf, m, TraceEvent::Error, static_cast<long>(m), port_or_none(mi_[m].destination), app,
             std::nullopt, code);
      if (open_req_[m]) {
        stats_.requests[*open_req_[m]].complete = now_;
        stats_.requests[*open_req_[m]].code = code;
        open_req_[m].reset();
      }
      if (m == kHostPort)
        bridge_.on_complete(code, regs_);
      else
        regs_.report_region_status(m, code);
      if (code != ErrorCode::Success && app >= 0) on_failure(static_cast<unsigned>(app));
      completed[m] = code;
    }
    mi_[m] = std::move(st.state);
  }

  xbar_.end_cycle(std::span<const bool>(cyc.get(), n), regs_);

  for (PortIndex p = 1; p < n; ++p) {
    if (xbar_.slave(p).in_reset) continue;
    const std::span<const Word> words(si_[p].buffer.data(), si_[p].stored());
    if (!mod_[p]) {
      // Empty region: whatever lands here is discarded.
      if (sout[p].buffer_full && !words.empty()) {
        data_read_[p] = 1;
        emit(Component::SlaveIf, p, TraceEvent::Drop, static_cast<long>(last_writer_[p]), static_cast<long>(p),
             static_cast<int>(app_of(words.front())), words.front());
      }
      continue;
    }
    ModuleOutputs out = mod_[p]->step(sout[p].buffer_full, words, completed[p], regs_.region_destination(p));
    if (out.data_read) {
      data_read_[p] = 1;
      emit(Component::Module, p, TraceEvent::Latch, static_cast<long>(last_writer_[p]), static_cast<long>(p),
           words.empty() ? -1 : static_cast<int>(app_of(words.front())),
           words.empty() ? std::nullopt : std::optional<Word>(words.front()));
    }
    if (out.request) pending_req_[p] = std::move(out.request);
  }

  if (!xbar_.slave(kHostPort).in_reset) {
    const std::span<const Word> words(si_[0].buffer.data(), si_[0].stored());
    EgressOutputs out = bridge_.egress_step(now_, sout[0].buffer_full, words, last_writer_[0]);
    if (out.data_read) data_read_[0] = 1;
    if (out.delivery) {
      emit(Component::Bridge, 0, TraceEvent::Deliver, static_cast<long>(out.delivery->source),
           static_cast<long>(out.delivery->channel), app_tag(out.delivery->words), out.delivery->words.front());
      on_delivery(*out.delivery);
    }
  }

  ++now_;
}

bool System::fabric_idle() const {
  if (!bridge_.idle()) return false;
  for (PortIndex p = 0; p < sc_.port_count; ++p) {
    if (mi_[p].state != MasterState::Idle || pending_req_[p] || data_read_[p] || si_[p].valid != 0) return false;
    if (mod_[p] && !mod_[p]->idle()) return false;
    if (!xbar_.slave(p).in_reset && !arbiter_settled(xbar_.slave(p).arbiter)) return false;
    if (regs_.in_reset(p) != xbar_.master(p).in_reset) return false;
  }
  return true;
}

std::optional<Cycle> System::next_wakeup() const {
  std::optional<Cycle> next;
  auto consider = [&next](Cycle c) {
    if (!next || c < *next) next = c;
  };
  if (next_event_ < sc_.events.size()) consider(sc_.events[next_event_].cycle);
  for (std::size_t a = 0; a < apps_.size(); ++a)
    if (!apps_[a].arrived) consider(mgr_.app(apps_[a].handle).arrive);
  if (auto r = mgr_.next_ready()) consider(*r);
  for (const AppRun& run : apps_)
    if (run.release_pending) consider(now_);
  return next;
}

void System::run_to_end() {
  for (;;) {
    if (fabric_idle()) {
      auto next = next_wakeup();
      if (!next) break;
      now_ = std::max(now_, *next);
    }
    if (now_ >= sc_.max_cycles) throw CycleLimitExceeded(sc_.max_cycles);
    step();
  }
}

RunResult System::finish() {
  run_to_end();
  RunResult r{sc_.name, now_, std::move(trace_), std::move(stats_), bridge_.c2h(), bridge_.counters(),
              bridge_.records(), regs_};
  return r;
}

RunResult run(const Scenario& sc) { return System(sc).finish(); }

std::vector<RequestStat> stats_from_trace(const std::vector<TraceRecord>& trace) {
  std::vector<RequestStat> out;
  std::vector<std::optional<std::size_t>> open;
  for (const TraceRecord& r : trace) {
    if (r.component != Component::MasterIf) continue;
    if (open.size() <= r.unit) open.resize(r.unit + 1);
    auto& cur = open[r.unit];
    switch (r.event) {
      case TraceEvent::Request:
        cur = out.size();
        out.push_back({r.unit, r.app, r.cycle, std::nullopt, std::nullopt, std::nullopt, r.word.value_or(0)});
        break;
      case TraceEvent::Data:
        if (cur && !out[*cur].first_data) out[*cur].first_data = r.cycle;
        break;
      case TraceEvent::Complete:
        if (cur) {
          out[*cur].complete = r.cycle;
          out[*cur].code = r.code;
          cur.reset();
        }
        break;
      default:
        break;
    }
  }
  return out;
}

}  // namespace exb
