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
 * @file bridge.hpp
 * @brief Host bridge on crossbar port 0.
 *
 * Ingress: the host streams bursts into three host-to-card FIFOs, one word per channel per
 * cycle. The bridge's master interface serves the FIFOs in rotation, one burst at a time, and
 * issues the request as soon as the head burst reaches the trigger level (half of the burst, or
 * all of it). The destination comes from the application-ID register selected by word 0, so a
 * tenant can only reach the regions configured for its application.
 *
 * Egress: every burst that fills the port-0 slave buffer is handed to the card-to-host channel
 * selected by a 3-bit one-hot shift register, which rotates after each delivery.
 */

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "exb/protocol.hpp"
#include "exb/regfile.hpp"
#include "exb/types.hpp"

namespace exb {

inline constexpr std::size_t kHostChannels = 3;

enum class TriggerMode : std::uint8_t { HalfFull, Full };

struct BridgeConfig {
  TriggerMode trigger = TriggerMode::HalfFull;
  /// Words per host-to-card FIFO.
  std::size_t fifo_depth = 2 * kBurstWords;
};

/// 2-bit application ID carried in the low bits of word 0.
inline unsigned app_of(Word id_word) { return id_word & 0x3u; }

struct HostBurst {
  Burst words;
  /// Idle cycles the host inserts after this burst on its channel.
  Cycle gap_after = 0;
};

/// Life of one host burst inside the bridge.
struct BurstRecord {
  unsigned app = 0;
  std::size_t channel = 0;
  std::size_t length = 0;
  std::size_t pushed = 0;
  std::size_t sent = 0;
  std::optional<Cycle> first_push;
  std::optional<Cycle> request;
  /// Cycle the last word was stored at the destination slave.
  std::optional<Cycle> delivered;
  std::optional<PortIndex> destination;
  std::optional<ErrorCode> outcome;
  bool loopback = false;
  bool dropped = false;

  std::optional<Cycle> delivery_latency() const {
    if (!first_push || !delivered) return std::nullopt;
    return *delivered - *first_push + 1;
  }
};

struct C2hDelivery {
  Cycle cycle = 0;
  std::size_t channel = 0;
  /// Port whose master interface wrote the burst; 0 for loopback.
  PortIndex source = 0;
  Burst words;
};

struct PushNotice {
  std::size_t channel;
  std::size_t record;
  Word word;
};

struct IngressOutputs {
  std::optional<ModuleRequest> request;
  std::vector<PushNotice> pushes;
  /// Records dropped this cycle at the bridge (unmapped application ID).
  std::vector<std::size_t> dropped;
  std::vector<C2hDelivery> loopback;
};

struct EgressOutputs {
  bool data_read = false;
  std::optional<C2hDelivery> delivery;
};

class HostBridge {
 public:
  explicit HostBridge(BridgeConfig cfg = {});

  const BridgeConfig& config() const { return cfg_; }

  /// Queues a burst on the host side of a channel. Returns its record index.
  std::size_t submit(std::size_t channel, HostBurst burst);

  IngressOutputs ingress_step(Cycle now, const RegisterFile& regs, bool master_idle);

  /// Words of the burst being served that are already in the FIFO.
  std::size_t words_available() const;
  std::optional<std::size_t> active_record() const;

  /// The master interface handed one word of the active burst to the slave.
  void on_accepted(Cycle now);
  /// Outcome of the active burst's request.
  void on_complete(ErrorCode code, RegisterFile& regs);

  EgressOutputs egress_step(Cycle now, bool buffer_full, std::span<const Word> words, PortIndex source);

  /// One-hot card-to-host channel selector.
  std::uint8_t c2h_select() const { return c2h_select_; }
  const std::vector<BurstRecord>& records() const { return records_; }
  const std::array<std::vector<C2hDelivery>, kHostChannels>& c2h() const { return c2h_; }
  std::size_t fifo_level(std::size_t channel) const { return channels_[channel].fifo.size(); }

  /// No host data waiting, nothing buffered and no burst in service.
  bool idle() const;

  void reset();

  struct Counters {
    std::size_t pushed = 0;
    std::size_t forwarded = 0;
    std::size_t dropped = 0;
    std::size_t looped = 0;
  };
  const Counters& counters() const { return counters_; }

 private:
  struct Pending {
    std::size_t record;
    HostBurst burst;
  };
  struct Channel {
    std::deque<Pending> host;
    /// Words in the FIFO, tagged with their record.
    std::deque<std::pair<std::size_t, Word>> fifo;
    /// Records with words in the FIFO or still arriving, oldest first.
    std::deque<std::size_t> bursts;
    Cycle ready_at = 0;
  };

  void drop(std::size_t record);
  void retire_head(std::size_t channel);
  C2hDelivery deliver(Cycle now, PortIndex source, Burst words);

  BridgeConfig cfg_;
  std::array<Channel, kHostChannels> channels_;
  std::vector<BurstRecord> records_;
  std::vector<Burst> payloads_;
  std::optional<std::size_t> active_;
  std::size_t last_served_ = kHostChannels - 1;
  std::uint8_t c2h_select_ = 0b001;
  std::array<std::vector<C2hDelivery>, kHostChannels> c2h_;
  Counters counters_;
};

}  // namespace exb
