#pragma once

#include <string>

namespace hvqe {

/// %.17g formatting used everywhere a file format pins 17 significant digits.
std::string fmt17(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hvqe
