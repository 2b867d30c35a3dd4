#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "embsvm/svm.hpp"

namespace embsvm {

/// Binary little-endian model file:
///
///   "EMBSVM01"  u32 version=1  u32 n_labels  u32 feature_dim  u8 has_bias
///   f64 lambda  u32 fallback_index
///   n_labels x (u16 byte_length, UTF-8 bytes)
///   f32 weights, row-major n_labels x feature_dim
///   f32 biases
inline constexpr std::string_view kModelMagic = "EMBSVM01";
inline constexpr std::uint32_t kModelVersion = 1;

void save_model(std::ostream& out, const LinearModel& model);
void save_model(const std::filesystem::path& path, const LinearModel& model);
LinearModel load_model(std::istream& in, std::string_view source);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace embsvm
