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

#include "exb/trace.hpp"

#include <cstdio>
#include <ostream>

namespace exb {

std::string_view to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::Request: return "Request";
    case TraceEvent::Validate: return "Validate";
    case TraceEvent::Reject: return "Reject";
    case TraceEvent::Grant: return "Grant";
    case TraceEvent::Release: return "Release";
    case TraceEvent::QuotaExhausted: return "QuotaExhausted";
    case TraceEvent::Data: return "Data";
    case TraceEvent::Ack: return "Ack";
    case TraceEvent::Stall: return "Stall";
    case TraceEvent::Complete: return "Complete";
    case TraceEvent::Error: return "Error";
    case TraceEvent::Reset: return "Reset";
    case TraceEvent::Poke: return "Poke";
    case TraceEvent::Reconfig: return "Reconfig";
    case TraceEvent::Push: return "Push";
    case TraceEvent::Deliver: return "Deliver";
    case TraceEvent::Drop: return "Drop";
    case TraceEvent::Latch: return "Latch";
  }
  return "?";
}

std::string component_name(Component c, std::uint32_t unit) {
  switch (c) {
    case Component::Regfile: return "regfile";
    case Component::Manager: return "manager";
    case Component::Bridge: return "bridge";
    case Component::MasterIf: return "mi" + std::to_string(unit);
    case Component::MasterPort: return "mport" + std::to_string(unit);
    case Component::Arbiter: return "arb" + std::to_string(unit);
    case Component::SlaveIf: return "si" + std::to_string(unit);
    case Component::Module: return "mod" + std::to_string(unit);
  }
  return "?";
}

std::string to_csv(const TraceRecord& r) {
  std::string line = std::to_string(r.cycle);
  line += ',';
  line += component_name(r.component, r.unit);
  line += ',';
  line += to_string(r.event);
  auto field = [&line](std::int32_t v) {
    line += ',';
    if (v >= 0) line += std::to_string(v);
  };
  field(r.src);
  field(r.dst);
  field(r.app);
  line += ',';
  if (r.word) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", *r.word);
    line += buf;
  }
  line += ',';
  if (r.code) line += to_string(*r.code);
  return line;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void Trace::emit(const TraceRecord& r) {
  const std::string line = to_csv(r);
  hash_ = fnv1a(line, hash_);
  hash_ = fnv1a("\n", hash_);
  ++count_;
  if (store_) records_.push_back(r);
}

void Trace::write_csv(std::ostream& os) const {
  os << kTraceCsvHeader << '\n';
  for (const auto& r : records_) os << to_csv(r) << '\n';
}

}  // namespace exb
