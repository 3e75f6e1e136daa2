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
 * @file trace.hpp
 * @brief Timestamped record of every handshake, grant, transfer and error in a run.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exb/regfile.hpp"
#include "exb/types.hpp"

namespace exb {

enum class TraceEvent : std::uint8_t {
  Request,
  Validate,
  Reject,
  Grant,
  Release,
  QuotaExhausted,
  Data,
  Ack,
  Stall,
  Complete,
  Error,
  Reset,
  Poke,
  Reconfig,
  Push,
  Deliver,
  Drop,
  Latch,
};

std::string_view to_string(TraceEvent e);

/// Emitting component. Kinds are listed in the order they are stepped within a cycle.
enum class Component : std::uint8_t {
  Regfile,
  Manager,
  Bridge,
  MasterIf,    // mi<p>
  MasterPort,  // mport<p>
  Arbiter,     // arb<p>
  SlaveIf,     // si<p>
  Module,      // mod<p>
};

struct TraceRecord {
  Cycle cycle = 0;
  Component component = Component::Regfile;
  std::uint32_t unit = 0;
  TraceEvent event = TraceEvent::Request;
  std::int32_t src = -1;
  std::int32_t dst = -1;
  std::int32_t app = -1;
  std::optional<Word> word;
  std::optional<ErrorCode> code;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

std::string component_name(Component c, std::uint32_t unit);

inline constexpr std::string_view kTraceCsvHeader = "cycle,component,event,src,dst,app,word,code";

std::string to_csv(const TraceRecord& r);

/// Collects records and a running FNV-1a hash of their CSV rendering. The hash is kept even
/// when storing is off, so long runs can still be compared.
class Trace {
 public:
  explicit Trace(bool store = true) : store_(store) {}

  void emit(const TraceRecord& r);

  const std::vector<TraceRecord>& records() const { return records_; }
  std::uint64_t hash() const { return hash_; }
  std::size_t size() const { return count_; }
  bool stored() const { return store_; }

  void write_csv(std::ostream& os) const;

 private:
  bool store_;
  std::vector<TraceRecord> records_;
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
  std::size_t count_ = 0;
};

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace exb
