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

#include "exb/bridge.hpp"

#include <bit>
#include <stdexcept>

namespace exb {

HostBridge::HostBridge(BridgeConfig cfg) : cfg_(cfg) {
  if (cfg_.fifo_depth == 0) throw std::invalid_argument("bridge FIFO depth must be positive");
}

std::size_t HostBridge::submit(std::size_t channel, HostBurst burst) {
  if (channel >= kHostChannels) throw std::out_of_range("host channel out of range");
  if (burst.words.empty()) throw std::invalid_argument("host burst is empty");
  const std::size_t idx = records_.size();
  BurstRecord rec;
  rec.app = app_of(burst.words.front());
  rec.channel = channel;
  rec.length = burst.words.size();
  records_.push_back(rec);
  payloads_.push_back(burst.words);
  channels_[channel].host.push_back({idx, std::move(burst)});
  return idx;
}

void HostBridge::drop(std::size_t record) {
  BurstRecord& rec = records_[record];
  rec.dropped = true;
  auto& fifo = channels_[rec.channel].fifo;
  for (auto it = fifo.begin(); it != fifo.end();) {
    if (it->first == record) {
      it = fifo.erase(it);
      ++counters_.dropped;
    } else {
      ++it;
    }
  }
}

void HostBridge::retire_head(std::size_t channel) {
  auto& bursts = channels_[channel].bursts;
  while (!bursts.empty()) {
    const BurstRecord& rec = records_[bursts.front()];
    const bool finished = rec.pushed == rec.length && (rec.dropped || rec.loopback || rec.sent == rec.length);
    if (!finished || active_ == bursts.front()) break;
    bursts.pop_front();
  }
}

C2hDelivery HostBridge::deliver(Cycle now, PortIndex source, Burst words) {
  C2hDelivery d{now, static_cast<std::size_t>(std::countr_zero(c2h_select_)), source, std::move(words)};
  c2h_[d.channel].push_back(d);
  c2h_select_ = static_cast<std::uint8_t>(((c2h_select_ << 1) | (c2h_select_ >> 2)) & 0b111);
  return d;
}

IngressOutputs HostBridge::ingress_step(Cycle now, const RegisterFile& regs, bool master_idle) {
  IngressOutputs out;

  for (std::size_t ch = 0; ch < kHostChannels; ++ch) {
    Channel& c = channels_[ch];
    if (c.host.empty() || now < c.ready_at || c.fifo.size() >= cfg_.fifo_depth) continue;
    Pending& p = c.host.front();
    BurstRecord& rec = records_[p.record];
    const Word word = payloads_[p.record][rec.pushed];
    if (rec.pushed == 0) {
      rec.first_push = now;
      c.bursts.push_back(p.record);
    }
    ++rec.pushed;
    ++counters_.pushed;
    if (rec.dropped)
      ++counters_.dropped;
    else
      c.fifo.emplace_back(p.record, word);
    out.pushes.push_back({ch, p.record, word});
    if (rec.pushed == rec.length) {
      c.ready_at = now + 1 + p.burst.gap_after;
      c.host.pop_front();
    }
    retire_head(ch);
  }

  if (!master_idle || active_) return out;

  for (std::size_t i = 1; i <= kHostChannels; ++i) {
    const std::size_t ch = (last_served_ + i) % kHostChannels;
    Channel& c = channels_[ch];
    if (c.bursts.empty()) continue;
    const std::size_t idx = c.bursts.front();
    BurstRecord& rec = records_[idx];
    if (rec.dropped || rec.loopback) continue;
    const std::size_t threshold = cfg_.trigger == TriggerMode::HalfFull ? (rec.length + 1) / 2 : rec.length;
    if (rec.pushed < threshold) continue;

    const OneHotAddress dest = regs.app_destination(rec.app);
    const auto port = dest.port();
    if (!port || *port >= regs.port_count()) {
      // Unallocated application: the burst never enters the crossbar.
      rec.outcome = ErrorCode::InvalidAddress;
      drop(idx);
      out.dropped.push_back(idx);
      last_served_ = ch;
      retire_head(ch);
      continue;
    }
    if (*port == kHostPort) {
      if (rec.pushed < rec.length) continue;
      Burst words;
      while (!c.fifo.empty() && c.fifo.front().first == idx) {
        words.push_back(c.fifo.front().second);
        c.fifo.pop_front();
      }
      rec.loopback = true;
      rec.destination = kHostPort;
      rec.delivered = now;
      rec.outcome = ErrorCode::Success;
      counters_.looped += words.size();
      out.loopback.push_back(deliver(now, kHostPort, std::move(words)));
      last_served_ = ch;
      retire_head(ch);
      continue;
    }
    rec.request = now;
    rec.destination = *port;
    active_ = idx;
    last_served_ = ch;
    out.request = ModuleRequest{payloads_[idx], dest};
    break;
  }
  return out;
}

std::size_t HostBridge::words_available() const { return active_ ? records_[*active_].pushed : 0; }

std::optional<std::size_t> HostBridge::active_record() const { return active_; }

void HostBridge::on_accepted(Cycle now) {
  if (!active_) throw std::logic_error("bridge: word accepted without an active burst");
  BurstRecord& rec = records_[*active_];
  auto& fifo = channels_[rec.channel].fifo;
  if (fifo.empty() || fifo.front().first != *active_) throw std::logic_error("bridge: FIFO head does not match active burst");
  fifo.pop_front();
  ++rec.sent;
  ++counters_.forwarded;
  if (rec.sent == rec.length) rec.delivered = now;
}

void HostBridge::on_complete(ErrorCode code, RegisterFile& regs) {
  if (!active_) return;
  const std::size_t idx = *active_;
  BurstRecord& rec = records_[idx];
  rec.outcome = code;
  regs.report_app_status(rec.app, code);
  if (code != ErrorCode::Success) drop(idx);
  active_.reset();
  retire_head(rec.channel);
}

EgressOutputs HostBridge::egress_step(Cycle now, bool buffer_full, std::span<const Word> words, PortIndex source) {
  EgressOutputs out;
  if (buffer_full && !words.empty()) {
    out.data_read = true;
    out.delivery = deliver(now, source, Burst(words.begin(), words.end()));
  }
  return out;
}

bool HostBridge::idle() const {
  if (active_) return false;
  for (const Channel& c : channels_) {
    if (!c.host.empty() || !c.fifo.empty()) return false;
    for (std::size_t idx : c.bursts) {
      const BurstRecord& rec = records_[idx];
      if (!rec.dropped && !rec.loopback && rec.sent < rec.length) return false;
    }
  }
  return true;
}

void HostBridge::reset() {
  if (active_) {
    records_[*active_].outcome = ErrorCode::AckTimeout;
    drop(*active_);
    active_.reset();
  }
  c2h_select_ = 0b001;
}

}  // namespace exb
