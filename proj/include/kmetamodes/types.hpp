#pragma once

#include <cstdint>
#include <limits>

namespace kmm {

// Dense per-attribute value id produced by discretization. Ids are assigned
// first-seen, with the missing/unseen sentinels appended after the observed
// categories (see AttributeSpec).
using CategoryId = std::uint32_t;

inline constexpr std::uint32_t kNoIndex = std::numeric_limits<std::uint32_t>::max();

}  // namespace kmm
