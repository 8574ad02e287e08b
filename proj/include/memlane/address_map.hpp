#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace memlane {

/// Bit-field mapping from byte addresses to memory controllers and cache
/// banks. The default reproduces a four-controller design where address bits
/// 8 and 7 pick the controller and bit 6 the bank, so consecutive 64-byte
/// lines walk through banks and controllers round-robin.
struct AddressMapModel {
  std::vector<unsigned> controller_bits{8, 7};  // most significant first
  unsigned bank_bit = 6;
  std::size_t line_size = 64;

  unsigned controller_count() const { return 1u << controller_bits.size(); }
  void validate() const;  // throws std::invalid_argument

  unsigned controller_of(std::uintptr_t address) const {
    unsigned idx = 0;
    for (unsigned bit : controller_bits) idx = (idx << 1) | ((address >> bit) & 1u);
    return idx;
  }

  unsigned bank_of(std::uintptr_t address) const {
    return static_cast<unsigned>((address >> bank_bit) & 1u);
  }

  std::uintptr_t line_of(std::uintptr_t address) const {
    return address & ~static_cast<std::uintptr_t>(line_size - 1);
  }
};

}  // namespace memlane
