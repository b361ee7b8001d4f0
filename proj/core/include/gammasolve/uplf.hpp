// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_UPLF_HPP
#define GAMMASOLVE_UPLF_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gammasolve/tensorfield.hpp"

namespace gammasolve
{

//
// UPLF v1 binary field container, little-endian:
//   "UPLF" | u32 version | u32 D | D x u64 dims | D x f64 lengths |
//   u32 blocks | blocks x (u8 kind, u32 d) | u8 representation |
//   points x components x (f64 re, f64 im)
//
std::vector<std::uint8_t> encode_uplf(const Field &f);
Field decode_uplf(std::span<const std::uint8_t> bytes);

// Throws ErrorCode::io on filesystem failure and on malformed content.
void write_uplf(const std::filesystem::path &path, const Field &f);
Field read_uplf(const std::filesystem::path &path);

}  // namespace gammasolve

#endif  // GAMMASOLVE_UPLF_HPP
