// Copyright 2026 The fsa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsa/tensor.hpp"

// Binary tensor container, little-endian throughout:
//   magic   4 bytes "FSAT"
//   version u16 = 1
//   dtype   u8 (0 = f32, 1 = f64)
//   rank    u8
//   dims    rank x u32
//   payload product(dims) values, row-major, IEEE-754 little-endian
// Read-then-write reproduces the input byte for byte.

namespace fsa {

enum class TensorDtype : std::uint8_t { kF32 = 0, kF64 = 1 };

struct TensorData {
  TensorDtype dtype = TensorDtype::kF64;
  std::vector<std::uint32_t> dims;
  std::vector<unsigned char> payload;  // raw little-endian values

  std::uint64_t element_count() const;
  std::size_t dtype_size() const {
    return dtype == TensorDtype::kF32 ? 4 : 8;
  }

  // Payload decoded to the requested precision (widening/narrowing casts
  // as needed).
  std::vector<double> as_f64() const;
  std::vector<float> as_f32() const;
};

void write_tensor_file(const std::string& path, const TensorData& tensor);
TensorData read_tensor_file(const std::string& path);

// Convenience wrappers for C x H x W feature stacks (rank-3 files).
TensorData to_tensor_data(const FeatureMap<double>& map);
TensorData to_tensor_data(const FeatureMap<float>& map);

template <typename T>
FeatureMap<T> feature_map_from_tensor(const TensorData& tensor) {
  if (tensor.dims.size() != 3)
    throw std::invalid_argument("feature_map_from_tensor: rank-3 file required");
  FeatureMap<T> map(static_cast<Index>(tensor.dims[0]),
                    static_cast<Index>(tensor.dims[1]),
                    static_cast<Index>(tensor.dims[2]));
  const std::vector<double> values = tensor.as_f64();
  for (std::size_t i = 0; i < values.size(); ++i)
    map.values.data()[i] = static_cast<T>(values[i]);
  return map;
}

}  // namespace fsa
