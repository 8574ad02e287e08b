#include "memlane/address_map.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace memlane {

void AddressMapModel::validate() const {
  if (controller_bits.empty())
    throw std::invalid_argument("AddressMapModel: need at least one controller bit");
  if (controller_bits.size() >= 32)
    throw std::invalid_argument("AddressMapModel: too many controller bits");
  std::vector<unsigned> bits = controller_bits;
  bits.push_back(bank_bit);
  std::sort(bits.begin(), bits.end());
  if (std::adjacent_find(bits.begin(), bits.end()) != bits.end())
    throw std::invalid_argument("AddressMapModel: controller/bank bit indices must be distinct");
  if (line_size == 0 || (line_size & (line_size - 1)) != 0)
    throw std::invalid_argument("AddressMapModel: line_size must be a power of two");
  // A cache line must map to exactly one controller and bank.
  unsigned line_bits = static_cast<unsigned>(std::countr_zero(line_size));
  if (line_bits > bits.front())
    throw std::invalid_argument("AddressMapModel: line spans multiple controllers/banks");
  for (unsigned b : bits)
    if (b >= 8 * sizeof(std::uintptr_t))
      throw std::invalid_argument("AddressMapModel: bit index out of address range");
}

}  // namespace memlane
