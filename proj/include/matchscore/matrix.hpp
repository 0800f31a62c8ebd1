#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace matchscore {

/// Dense row-major matrix. Markets here are tiny (tens of agents), so a flat
/// vector beats any heavyweight linear algebra dependency.
template <typename T>
class Grid {
public:
    Grid() : rows_(0), cols_(0) {}
    Grid(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& at(int r, int c) {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }
    const T& at(int r, int c) const {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    std::vector<T>& flat() { return data_; }
    const std::vector<T>& flat() const { return data_; }

    bool operator==(const Grid&) const = default;

private:
    int rows_, cols_;
    std::vector<T> data_;
};

using Matrix = Grid<double>;
using BoolMatrix = Grid<char>;

} // namespace matchscore
