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

#include "exb/hamming.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace exb::hamming {

namespace {

constexpr std::array<unsigned, kDataBits> data_positions() {
  std::array<unsigned, kDataBits> pos{};
  unsigned i = 0;
  for (unsigned p = 1; p <= kCodeBits; ++p) {
    if (!std::has_single_bit(p)) pos[i++] = p;
  }
  return pos;
}

constexpr auto kDataPositions = data_positions();

}  // namespace

unsigned syndrome(std::uint32_t codeword) {
  unsigned s = 0;
  for (std::uint32_t w = codeword & kCodeMask; w != 0; w &= w - 1) {
    s ^= static_cast<unsigned>(std::countr_zero(w)) + 1;
  }
  return s;
}

std::uint32_t encode(std::uint32_t data) {
  if (data > kDataMask) throw std::invalid_argument("hamming: data exceeds 26 bits");
  std::uint32_t code = 0;
  for (unsigned i = 0; i < kDataBits; ++i) {
    if ((data >> i) & 1u) code |= 1u << (kDataPositions[i] - 1);
  }
  // Setting parity bit 2^j cancels bit j of the syndrome.
  const unsigned s = syndrome(code);
  for (unsigned j = 0; j < 5; ++j) {
    if ((s >> j) & 1u) code |= 1u << ((1u << j) - 1);
  }
  return code;
}

Decoded decode(std::uint32_t codeword) {
  if (codeword > kCodeMask) throw std::invalid_argument("hamming: codeword exceeds 31 bits");
  const unsigned s = syndrome(codeword);
  if (s != 0) codeword ^= 1u << (s - 1);
  std::uint32_t data = 0;
  for (unsigned i = 0; i < kDataBits; ++i) {
    if ((codeword >> (kDataPositions[i] - 1)) & 1u) data |= 1u << i;
  }
  return {data, s};
}

}  // namespace exb::hamming
