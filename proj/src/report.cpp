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

#include "exb/report.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace exb {

namespace {

template <class T>
void opt(std::ostream& os, const std::optional<T>& v) {
  if (v) os << *v;
}

}  // namespace

void write_requests_csv(std::ostream& os, const LatencyStats& stats) {
  os << kRequestsCsvHeader << '\n';
  for (const auto& q : stats.requests) {
    os << q.port << ',';
    if (q.app >= 0) os << q.app;
    os << ',' << q.request << ',';
    opt(os, q.first_data);
    os << ',';
    opt(os, q.complete);
    os << ',';
    opt(os, q.time_to_grant());
    os << ',';
    opt(os, q.completion_latency());
    os << ',';
    if (q.code) os << to_string(*q.code);
    os << ",0x" << std::hex << q.destination << std::dec << '\n';
  }
}

void write_apps_csv(std::ostream& os, const LatencyStats& stats) {
  os << kAppsCsvHeader << '\n';
  for (const auto& a : stats.apps) {
    os << a.app_id << ',' << a.bursts << ',' << a.fabric_stages_at_start << ',' << a.fabric_stages_at_end << ',';
    opt(os, a.data_start);
    os << ',';
    opt(os, a.data_end);
    os << ',' << a.fabric_cycles << ',' << a.host_cycles << ',' << a.transfer_cycles << ',' << a.total_cycles() << ','
       << std::fixed << std::setprecision(6) << stats.to_ms(a.total_cycles()) << std::defaultfloat << ','
       << a.delivered << ',' << a.failed << ',' << a.mismatches << '\n';
  }
}

void write_summary(std::ostream& os, const RunResult& r) {
  os << "scenario " << r.name << ": " << r.cycles << " cycles, " << r.trace.size() << " trace events, hash 0x"
     << std::hex << std::setw(16) << std::setfill('0') << r.trace.hash() << std::dec << std::setfill(' ') << '\n';
  const auto& reqs = r.stats.requests;
  if (!reqs.empty()) {
    std::size_t ok = 0;
    Cycle worst_ttg = 0, worst_done = 0;
    for (const auto& q : reqs) {
      ok += q.code == ErrorCode::Success;
      worst_ttg = std::max(worst_ttg, q.time_to_grant().value_or(0));
      worst_done = std::max(worst_done, q.completion_latency().value_or(0));
    }
    os << "  requests: " << reqs.size() << " (" << ok << " ok), worst time-to-grant " << worst_ttg
       << ", worst completion " << worst_done << '\n';
  }
  os << "  bridge: " << r.bridge.pushed << " words pushed, " << r.bridge.forwarded << " forwarded, "
     << r.bridge.dropped << " dropped, " << r.bridge.looped << " looped back\n";
  for (const auto& a : r.stats.apps) {
    os << "  app " << a.app_id << ": " << a.delivered << '/' << a.bursts << " bursts";
    if (a.failed) os << ", " << a.failed << " failed";
    os << ", stages on fabric " << a.fabric_stages_at_start << "->" << a.fabric_stages_at_end << ", total "
       << a.total_cycles() << " cycles (" << std::fixed << std::setprecision(3) << r.stats.to_ms(a.total_cycles())
       << " ms)" << std::defaultfloat;
    if (a.mismatches) os << ", " << a.mismatches << " MISMATCHED outputs";
    if (!a.complete()) os << ", INCOMPLETE";
    os << '\n';
  }
}

}  // namespace exb
