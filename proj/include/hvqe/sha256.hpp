#pragma once

#include <string>

namespace hvqe {

/// Hex digest of the SHA-256 of a byte string.
std::string sha256_hex(const std::string& data);

}  // namespace hvqe
