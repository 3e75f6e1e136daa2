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
 * @file report.hpp
 * @brief CSV and plain-text renderings of run results.
 */

#pragma once

#include <iosfwd>

#include "exb/system.hpp"

namespace exb {

inline constexpr std::string_view kRequestsCsvHeader =
    "port,app,request,first_data,complete,time_to_grant,completion,code,destination";
inline constexpr std::string_view kAppsCsvHeader =
    "app,bursts,fabric_stages_start,fabric_stages_end,data_start,data_end,fabric_cycles,host_cycles,"
    "transfer_cycles,total_cycles,total_ms,delivered,failed,mismatches";

void write_requests_csv(std::ostream& os, const LatencyStats& stats);
void write_apps_csv(std::ostream& os, const LatencyStats& stats);
void write_summary(std::ostream& os, const RunResult& r);

}  // namespace exb
