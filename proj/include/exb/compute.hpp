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
 * @file compute.hpp
 * @brief Computation-module template and the concrete module kinds.
 *
 * A module owns input and output registers for one burst, an error register and a four-state
 * control machine:
 *
 *   Idle         waits for the slave interface to report a full buffer
 *   RegisterData latches the buffered words and raises data_read
 *   Compute      applies the kind's function to words 1..N-1; word 0 (application ID) is copied
 *   MakeRequest  hands the outputs to the master interface and waits for the outcome
 *
 * Requests and data_read are registered: the master interface and the slave interface see them
 * in the cycle after the module raises them.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "exb/protocol.hpp"
#include "exb/regfile.hpp"
#include "exb/types.hpp"

namespace exb {

enum class ModuleKind : std::uint8_t { Multiplier, HammingEncoder, HammingDecoder, HostStub };

std::string_view to_string(ModuleKind kind);
std::optional<ModuleKind> parse_module_kind(std::string_view name);

struct ModuleSpec {
  ModuleKind kind = ModuleKind::Multiplier;
  /// Multiplier constant; ignored by the other kinds.
  Word constant = 3;
  /// Cycles spent in Compute. HostStub uses it as its host latency.
  Cycle compute_cycles = 1;

  friend bool operator==(const ModuleSpec&, const ModuleSpec&) = default;
};

std::string describe(const ModuleSpec& spec);

/// The kind's function on one payload word.
Word apply(const ModuleSpec& spec, Word value);

/// Word 0 passes through; every other word goes through apply().
Burst process(const ModuleSpec& spec, std::span<const Word> input);

enum class ModuleFsm : std::uint8_t { Idle, RegisterData, Compute, MakeRequest };

std::string_view to_string(ModuleFsm s);

struct ModuleOutputs {
  bool data_read = false;
  std::optional<ModuleRequest> request;
  /// Set in the cycle the outcome of a request is recorded.
  std::optional<ErrorCode> finished;
  bool latched_inputs = false;
};

class ComputeModule {
 public:
  ComputeModule(PortIndex port, ModuleSpec spec);

  /// One clock cycle. `slave_words` are the valid words of the slave buffer, `completed` the
  /// master interface's outcome for this cycle, `destination` the region's destination register.
  ModuleOutputs step(bool buffer_full, std::span<const Word> slave_words, std::optional<ErrorCode> completed,
                     OneHotAddress destination);

  /// Stimulus: load output registers and go straight to MakeRequest.
  void fire(Burst outputs);

  void reset();

  PortIndex port() const { return port_; }
  const ModuleSpec& spec() const { return spec_; }
  ModuleFsm fsm() const { return fsm_; }
  const Burst& input_regs() const { return input_; }
  const Burst& output_regs() const { return output_; }
  ErrorCode error_reg() const { return error_; }
  bool idle() const { return fsm_ == ModuleFsm::Idle; }

 private:
  PortIndex port_;
  ModuleSpec spec_;
  ModuleFsm fsm_ = ModuleFsm::Idle;
  Burst input_;
  Burst output_;
  ErrorCode error_ = ErrorCode::Success;
  Cycle compute_left_ = 0;
  bool request_raised_ = false;
};

}  // namespace exb
