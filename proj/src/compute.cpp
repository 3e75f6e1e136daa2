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

#include "exb/compute.hpp"

#include "exb/hamming.hpp"

namespace exb {

std::string_view to_string(ModuleKind kind) {
  switch (kind) {
    case ModuleKind::Multiplier: return "multiplier";
    case ModuleKind::HammingEncoder: return "encoder";
    case ModuleKind::HammingDecoder: return "decoder";
    case ModuleKind::HostStub: return "hoststub";
  }
  return "?";
}

std::optional<ModuleKind> parse_module_kind(std::string_view name) {
  if (name == "multiplier" || name == "mul") return ModuleKind::Multiplier;
  if (name == "encoder" || name == "enc") return ModuleKind::HammingEncoder;
  if (name == "decoder" || name == "dec") return ModuleKind::HammingDecoder;
  if (name == "hoststub" || name == "host") return ModuleKind::HostStub;
  return std::nullopt;
}

std::string describe(const ModuleSpec& spec) {
  std::string s(to_string(spec.kind));
  if (spec.kind == ModuleKind::Multiplier) s += "(" + std::to_string(spec.constant) + ")";
  if (spec.kind == ModuleKind::HostStub) s += "(" + std::to_string(spec.compute_cycles) + ")";
  return s;
}

Word apply(const ModuleSpec& spec, Word value) {
  switch (spec.kind) {
    case ModuleKind::Multiplier: return value * spec.constant;
    case ModuleKind::HammingEncoder: return hamming::encode(value & hamming::kDataMask);
    case ModuleKind::HammingDecoder: return hamming::decode(value & hamming::kCodeMask).data;
    case ModuleKind::HostStub: return value;
  }
  return value;
}

Burst process(const ModuleSpec& spec, std::span<const Word> input) {
  Burst out(input.begin(), input.end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = apply(spec, out[i]);
  return out;
}

std::string_view to_string(ModuleFsm s) {
  switch (s) {
    case ModuleFsm::Idle: return "Idle";
    case ModuleFsm::RegisterData: return "RegisterData";
    case ModuleFsm::Compute: return "Compute";
    case ModuleFsm::MakeRequest: return "MakeRequest";
  }
  return "?";
}

ComputeModule::ComputeModule(PortIndex port, ModuleSpec spec) : port_(port), spec_(spec) {
  if (spec_.compute_cycles == 0) spec_.compute_cycles = 1;
}

ModuleOutputs ComputeModule::step(bool buffer_full, std::span<const Word> slave_words,
                                  std::optional<ErrorCode> completed, OneHotAddress destination) {
  ModuleOutputs out;
  switch (fsm_) {
    case ModuleFsm::Idle:
      if (buffer_full) fsm_ = ModuleFsm::RegisterData;
      break;

    case ModuleFsm::RegisterData:
      input_.assign(slave_words.begin(), slave_words.end());
      out.data_read = true;
      out.latched_inputs = true;
      compute_left_ = spec_.compute_cycles;
      fsm_ = ModuleFsm::Compute;
      break;

    case ModuleFsm::Compute:
      if (--compute_left_ == 0) {
        output_ = process(spec_, input_);
        request_raised_ = false;
        fsm_ = ModuleFsm::MakeRequest;
      }
      break;

    case ModuleFsm::MakeRequest:
      if (!request_raised_) {
        out.request = ModuleRequest{output_, destination};
        request_raised_ = true;
      } else if (completed) {
        error_ = *completed;
        out.finished = *completed;
        output_.clear();
        fsm_ = buffer_full ? ModuleFsm::RegisterData : ModuleFsm::Idle;
      }
      break;
  }
  return out;
}

void ComputeModule::fire(Burst outputs) {
  output_ = std::move(outputs);
  request_raised_ = false;
  fsm_ = ModuleFsm::MakeRequest;
}

void ComputeModule::reset() {
  fsm_ = ModuleFsm::Idle;
  input_.clear();
  output_.clear();
  error_ = ErrorCode::Success;
  compute_left_ = 0;
  request_raised_ = false;
}

}  // namespace exb
