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

#include "fsa/tensor_file.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace fsa {

namespace {

constexpr char kMagic[4] = {'F', 'S', 'A', 'T'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

// Values are serialized as little-endian IEEE-754; on big-endian hosts the
// byte order is swapped explicitly.
bool host_is_little_endian() {
  const std::uint16_t probe = 1;
  unsigned char b;
  std::memcpy(&b, &probe, 1);
  return b == 1;
}

}  // namespace

std::uint64_t TensorData::element_count() const {
  std::uint64_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

std::vector<double> TensorData::as_f64() const {
  const std::uint64_t n = element_count();
  std::vector<double> out(n);
  if (dtype == TensorDtype::kF64) {
    std::memcpy(out.data(), payload.data(), n * sizeof(double));
  } else {
    std::vector<float> tmp(n);
    std::memcpy(tmp.data(), payload.data(), n * sizeof(float));
    for (std::uint64_t i = 0; i < n; ++i) out[i] = tmp[i];
  }
  return out;
}

std::vector<float> TensorData::as_f32() const {
  const std::uint64_t n = element_count();
  std::vector<float> out(n);
  if (dtype == TensorDtype::kF32) {
    std::memcpy(out.data(), payload.data(), n * sizeof(float));
  } else {
    std::vector<double> tmp(n);
    std::memcpy(tmp.data(), payload.data(), n * sizeof(double));
    for (std::uint64_t i = 0; i < n; ++i) out[i] = static_cast<float>(tmp[i]);
  }
  return out;
}

void write_tensor_file(const std::string& path, const TensorData& tensor) {
  if (tensor.dims.empty() || tensor.dims.size() > 255)
    throw std::invalid_argument("write_tensor_file: rank must be in [1, 255]");
  const std::uint64_t expected = tensor.element_count() * tensor.dtype_size();
  if (tensor.payload.size() != expected)
    throw std::invalid_argument("write_tensor_file: payload size mismatch");
  if (!host_is_little_endian())
    throw std::runtime_error("write_tensor_file: big-endian hosts unsupported");

  std::vector<unsigned char> header;
  header.insert(header.end(), kMagic, kMagic + 4);
  put_u16(header, kVersion);
  header.push_back(static_cast<unsigned char>(tensor.dtype));
  header.push_back(static_cast<unsigned char>(tensor.dims.size()));
  for (std::uint32_t d : tensor.dims) put_u32(header, d);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_tensor_file: cannot open " + path);
  out.write(reinterpret_cast<const char*>(header.data()),
            static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(tensor.payload.data()),
            static_cast<std::streamsize>(tensor.payload.size()));
  if (!out) throw std::runtime_error("write_tensor_file: write failed: " + path);
}

TensorData read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_tensor_file: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 8) throw std::runtime_error("read_tensor_file: truncated");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw std::runtime_error("read_tensor_file: bad magic");
  if (get_u16(bytes.data() + 4) != kVersion)
    throw std::runtime_error("read_tensor_file: unsupported version");
  TensorData tensor;
  const unsigned char dtype = bytes[6];
  if (dtype > 1) throw std::runtime_error("read_tensor_file: bad dtype");
  tensor.dtype = static_cast<TensorDtype>(dtype);
  const std::size_t rank = bytes[7];
  if (rank == 0) throw std::runtime_error("read_tensor_file: rank 0");
  std::size_t offset = 8;
  if (bytes.size() < offset + 4 * rank)
    throw std::runtime_error("read_tensor_file: truncated dims");
  for (std::size_t i = 0; i < rank; ++i) {
    tensor.dims.push_back(get_u32(bytes.data() + offset));
    offset += 4;
  }
  const std::uint64_t expected = tensor.element_count() * tensor.dtype_size();
  if (bytes.size() - offset != expected)
    throw std::runtime_error("read_tensor_file: payload size mismatch");
  tensor.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                        bytes.end());
  if (!host_is_little_endian())
    throw std::runtime_error("read_tensor_file: big-endian hosts unsupported");
  return tensor;
}

namespace {

template <typename T>
TensorData feature_map_to_tensor(const FeatureMap<T>& map, TensorDtype dtype) {
  TensorData tensor;
  tensor.dtype = dtype;
  tensor.dims = {static_cast<std::uint32_t>(map.channels()),
                 static_cast<std::uint32_t>(map.height),
                 static_cast<std::uint32_t>(map.width)};
  tensor.payload.resize(tensor.element_count() * tensor.dtype_size());
  std::memcpy(tensor.payload.data(), map.values.data(),
              tensor.payload.size());
  return tensor;
}

}  // namespace

TensorData to_tensor_data(const FeatureMap<double>& map) {
  return feature_map_to_tensor(map, TensorDtype::kF64);
}

TensorData to_tensor_data(const FeatureMap<float>& map) {
  return feature_map_to_tensor(map, TensorDtype::kF32);
}

}  // namespace fsa
