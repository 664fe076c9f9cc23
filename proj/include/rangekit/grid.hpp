/* Copyright 2026 The Rangekit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef RANGEKIT_GRID_H_
#define RANGEKIT_GRID_H_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rangekit {

// Dense row-major 2D grid. Rows index beams (top to bottom), columns index
// azimuth samples.
template <typename T>
class Grid {
 public:
  Grid() : height_(0), width_(0) {}
  Grid(int height, int width, T fill = T{})
      : height_(height), width_(width) {
    if (height < 0 || width < 0) {
      throw std::invalid_argument("Grid dimensions must be non-negative");
    }
    data_.assign(static_cast<size_t>(height) * static_cast<size_t>(width),
                 fill);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  size_t size() const { return data_.size(); }

  T& at(int row, int col) { return data_[index(row, col)]; }
  const T& at(int row, int col) const { return data_[index(row, col)]; }

  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  bool same_shape(int height, int width) const {
    return height_ == height && width_ == width;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ &&
           a.data_ == b.data_;
  }

 private:
  size_t index(int row, int col) const {
    return static_cast<size_t>(row) * static_cast<size_t>(width_) +
           static_cast<size_t>(col);
  }

  int height_;
  int width_;
  std::vector<T> data_;
};

// Validity mask. Nonzero marks a pixel that carries a real return.
using Mask = Grid<uint8_t>;

inline size_t count_valid(const Mask& mask) {
  size_t n = 0;
  for (size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) ++n;
  }
  return n;
}

}  // namespace rangekit

#endif  // RANGEKIT_GRID_H_
