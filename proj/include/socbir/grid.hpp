// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "socbir/common.hpp"

namespace socbir {

template <typename T>
struct Grid {
  int rows = 0;
  int cols = 0;
  std::vector<T> cells;

  Grid() = default;
  Grid(int r, int c) : rows(r), cols(c), cells(static_cast<std::size_t>(r) * c) {}

  T& at(int r, int c) { return cells[static_cast<std::size_t>(r) * cols + c]; }
  const T& at(int r, int c) const {
    return cells[static_cast<std::size_t>(r) * cols + c];
  }
  std::size_t size() const { return cells.size(); }

  bool operator==(const Grid&) const = default;
};

}  // namespace socbir
