#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scmkit/image.hpp"

namespace scmkit {

// Binary PGM (P5, maxval 255): lossless, single channel, 8 bit.

std::vector<std::uint8_t> encode_pgm(const GrayImage& image);
GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

}  // namespace scmkit
