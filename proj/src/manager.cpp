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

#include "exb/manager.hpp"

#include <algorithm>
#include <stdexcept>

namespace exb {

std::string_view to_string(RegionState s) {
  switch (s) {
    case RegionState::Free: return "free";
    case RegionState::Reconfiguring: return "reconfiguring";
    case RegionState::Allocated: return "allocated";
    case RegionState::Static: return "static";
  }
  return "?";
}

Manager::Manager(std::size_t port_count, ManagerConfig cfg) : cfg_(cfg), regions_(port_count) {
  // Port 0 is the host bridge, never a PR region.
  regions_[kHostPort].state = RegionState::Static;
}

void Manager::set_static(PortIndex region, std::optional<ModuleSpec> module) {
  regions_.at(region) = Region{RegionState::Static, std::nullopt, std::nullopt, module, 0};
}

std::size_t Manager::add_app(const AppDescriptor& app) {
  apps_.push_back({app, std::vector<std::optional<PortIndex>>(app.chain.size()), false});
  return apps_.size() - 1;
}

std::optional<PortIndex> Manager::first_free() const {
  for (PortIndex p = 1; p < regions_.size(); ++p)
    if (regions_[p].state == RegionState::Free) return p;
  return std::nullopt;
}

Cycle Manager::schedule_icap(Cycle now) {
  // One ICAP: reconfigurations queue behind each other.
  const Cycle start = std::max(now, icap_free_at_);
  icap_free_at_ = start + cfg_.reconfig_cycles;
  return icap_free_at_;
}

void Manager::begin_reconfig(PortIndex region, std::size_t app, std::size_t stage, Cycle now, RegisterFile& regs,
                             std::vector<ManagerAction>& actions) {
  Region& r = regions_[region];
  r.state = RegionState::Reconfiguring;
  r.app = app;
  r.stage = stage;
  r.module = apps_[app].desc.chain[stage];
  r.ready_at = schedule_icap(now);
  apps_[app].placement[stage] = region;
  regs.write(regmap::kReset, regs.read(regmap::kReset) | port_bit(region));
  regs.set_icap_status(IcapStatus::Busy);
  actions.push_back({ManagerActionKind::ReconfigStart, region, r.module, app});
}

void Manager::wire_stage(std::size_t app, std::size_t stage, RegisterFile& regs) const {
  const AppState& a = apps_[app];
  const auto q = static_cast<std::uint8_t>(a.desc.quota);
  const PortIndex self = *a.placement[stage];
  PortIndex next = kHostPort;
  if (stage + 1 < a.placement.size() && a.placement[stage + 1]) next = *a.placement[stage + 1];
  regs.write(regs.region_destination_addr(self), port_bit(next));
  regs.write(regs.allowed_addr(self), port_bit(next) | port_bit(kHostPort));
  regs.set_quota(next, self, q);
  if (stage == 0) {
    regs.write(regs.app_destination_addr(a.desc.app_id), port_bit(self));
    regs.write(regs.allowed_addr(kHostPort), regs.allowed(kHostPort) | port_bit(self));
    regs.set_quota(self, kHostPort, q);
  }
}

void Manager::clear_region(PortIndex region, RegisterFile& regs) const {
  regs.write(regs.region_destination_addr(region), 0);
  regs.write(regs.allowed_addr(region), 0);
  for (PortIndex p = 0; p < regions_.size(); ++p) {
    regs.set_quota(p, region, 0);
    regs.set_quota(region, p, 0);
  }
  regs.write(regs.allowed_addr(kHostPort), regs.allowed(kHostPort) & ~port_bit(region));
}

std::vector<ManagerAction> Manager::place(std::size_t app, Cycle now, RegisterFile& regs) {
  std::vector<ManagerAction> actions;
  AppState& a = apps_.at(app);
  std::size_t stage = 0;
  for (; stage < a.desc.chain.size(); ++stage) {
    auto region = first_free();
    if (!region) break;
    begin_reconfig(*region, app, stage, now, regs, actions);
  }
  // Registers are programmed while every new region is still held in reset.
  for (std::size_t s = 0; s < stage; ++s) wire_stage(app, s, regs);
  if (stage > 0 && stage < a.desc.chain.size()) waiting_.push_back(app);
  return actions;
}

std::vector<ManagerAction> Manager::expand(std::size_t app, PortIndex region, Cycle now, RegisterFile& regs) {
  std::vector<ManagerAction> actions;
  AppState& a = apps_.at(app);
  if (regions_.at(region).state != RegionState::Free) throw std::logic_error("expand onto a region that is not free");
  auto it = std::find(a.placement.begin(), a.placement.end(), std::nullopt);
  if (it == a.placement.end() || a.released) return actions;
  const auto stage = static_cast<std::size_t>(it - a.placement.begin());
  begin_reconfig(region, app, stage, now, regs, actions);
  wire_stage(app, stage, regs);
  // The predecessor keeps sending to the host until the new region is out of reset.
  if (stage > 0) regs.set_quota(region, *a.placement[stage - 1], static_cast<std::uint8_t>(a.desc.quota));
  return actions;
}

std::vector<ManagerAction> Manager::offer(PortIndex region, Cycle now, RegisterFile& regs) {
  while (!waiting_.empty()) {
    const std::size_t app = waiting_.front();
    const AppState& a = apps_[app];
    if (a.released || std::find(a.placement.begin(), a.placement.end(), std::nullopt) == a.placement.end()) {
      waiting_.pop_front();
      continue;
    }
    auto actions = expand(app, region, now, regs);
    if (std::find(a.placement.begin(), a.placement.end(), std::nullopt) == a.placement.end()) waiting_.pop_front();
    return actions;
  }
  return {};
}

std::vector<ManagerAction> Manager::free_region(PortIndex region, Cycle now, RegisterFile& regs) {
  Region& r = regions_.at(region);
  if (region == kHostPort || r.state == RegionState::Free) return {};
  if (r.state == RegionState::Reconfiguring) return {};
  if (r.state == RegionState::Allocated && r.app && !apps_[*r.app].released) return {};
  r = Region{};
  clear_region(region, regs);
  std::vector<ManagerAction> actions{{ManagerActionKind::Released, region, std::nullopt, std::nullopt}};
  auto more = offer(region, now, regs);
  actions.insert(actions.end(), more.begin(), more.end());
  return actions;
}

std::vector<ManagerAction> Manager::release_app(std::size_t app, Cycle now, RegisterFile& regs) {
  AppState& a = apps_.at(app);
  if (a.released) return {};
  a.released = true;
  waiting_.erase(std::remove(waiting_.begin(), waiting_.end(), app), waiting_.end());
  regs.write(regs.app_destination_addr(a.desc.app_id), 0);
  std::vector<ManagerAction> actions;
  for (const auto& p : a.placement) {
    if (!p || regions_[*p].state != RegionState::Allocated) continue;
    auto more = free_region(*p, now, regs);
    actions.insert(actions.end(), more.begin(), more.end());
  }
  return actions;
}

std::vector<ManagerAction> Manager::tick(Cycle now, RegisterFile& regs) {
  std::vector<ManagerAction> actions;
  bool any_done = false;
  for (PortIndex p = 1; p < regions_.size(); ++p) {
    Region& r = regions_[p];
    if (r.state != RegionState::Reconfiguring || r.ready_at > now) continue;
    r.state = RegionState::Allocated;
    any_done = true;
    const std::size_t app = *r.app;
    const std::size_t stage = *r.stage;
    if (stage > 0) wire_stage(app, stage - 1, regs);
    else wire_stage(app, 0, regs);
    regs.write(regmap::kReset, regs.read(regmap::kReset) & ~port_bit(p));
    actions.push_back({ManagerActionKind::ReconfigDone, p, r.module, app});
    if (apps_[app].released) {
      auto more = free_region(p, now, regs);
      actions.insert(actions.end(), more.begin(), more.end());
    }
  }
  if (any_done && !busy()) regs.set_icap_status(IcapStatus::Done);
  return actions;
}

bool Manager::ready(std::size_t app) const {
  for (const auto& p : apps_.at(app).placement)
    if (p && regions_[*p].state == RegionState::Reconfiguring && regions_[*p].app == app) return false;
  return true;
}

bool Manager::busy() const {
  return std::any_of(regions_.begin(), regions_.end(),
                     [](const Region& r) { return r.state == RegionState::Reconfiguring; });
}

std::optional<Cycle> Manager::next_ready() const {
  std::optional<Cycle> best;
  for (const auto& r : regions_)
    if (r.state == RegionState::Reconfiguring && (!best || r.ready_at < *best)) best = r.ready_at;
  return best;
}

std::size_t Manager::fabric_stages(std::size_t app) const {
  const auto& pl = apps_.at(app).placement;
  return static_cast<std::size_t>(std::count_if(pl.begin(), pl.end(), [](const auto& p) { return p.has_value(); }));
}

std::optional<std::pair<std::size_t, std::size_t>> Manager::owner(PortIndex region) const {
  const Region& r = regions_.at(region);
  if ((r.state == RegionState::Allocated || r.state == RegionState::Reconfiguring) && r.app)
    return std::make_pair(*r.app, *r.stage);
  return std::nullopt;
}

}  // namespace exb
