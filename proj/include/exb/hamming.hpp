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
 * @file hamming.hpp
 * @brief Hamming(31,26) single-error-correcting code with positional parity.
 *
 * Codeword bit k holds position k+1. Positions 1, 2, 4, 8 and 16 carry parity; every other
 * position carries a data bit, lowest data bit at the lowest position. The syndrome of a
 * word is the XOR of the positions of its set bits, so a valid codeword has syndrome 0 and a
 * single flipped bit at position p leaves syndrome p.
 */

#pragma once

#include <cstdint>

namespace exb::hamming {

inline constexpr unsigned kDataBits = 26;
inline constexpr unsigned kCodeBits = 31;
inline constexpr std::uint32_t kDataMask = (1u << kDataBits) - 1;
inline constexpr std::uint32_t kCodeMask = (1u << kCodeBits) - 1;

struct Decoded {
  std::uint32_t data;
  unsigned syndrome;
  friend bool operator==(const Decoded&, const Decoded&) = default;
};

/// Throws std::invalid_argument when `data` does not fit in 26 bits.
std::uint32_t encode(std::uint32_t data);

/// Corrects a single flipped bit. Double errors are miscorrected silently.
/// Throws std::invalid_argument when `codeword` does not fit in 31 bits.
Decoded decode(std::uint32_t codeword);

unsigned syndrome(std::uint32_t codeword);

}  // namespace exb::hamming
