#pragma once

#include <string>
#include <string_view>

namespace ipthunt {

// 128-bit BLAKE2b digest rendered as 32 lowercase hex characters.
std::string digest128(std::string_view bytes);

}  // namespace ipthunt
