// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_GRID_HPP
#define ORTHOPLAP_GRID_HPP

#include "orthoplap/core.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <thread>
#include <vector>

namespace orthoplap
{

//! Uniform tensor-product grid over a box; axis 0 varies fastest in the flat index.
class Grid
{
public:
    Grid() = default;
    Grid(Box box, std::vector<std::size_t> counts) : box_(std::move(box)), counts_(std::move(counts))
    {
        if (counts_.size() != box_.dim())
            throw ContractError("grid counts and box dimension disagree");
        strides_.resize(counts_.size());
        std::size_t stride = 1;
        for (std::size_t i = 0; i < counts_.size(); ++i)
        {
            if (counts_[i] < 3)
                throw ContractError("grid needs at least 3 nodes per axis");
            strides_[i] = stride;
            stride *= counts_[i];
            spacing_.push_back(box_.side(i) / static_cast<double>(counts_[i] - 1));
        }
        size_ = stride;
    }

    std::size_t dim() const { return counts_.size(); }
    std::size_t size() const { return size_; }
    const Box& box() const { return box_; }
    std::size_t count(std::size_t axis) const { return counts_[axis]; }
    const std::vector<std::size_t>& counts() const { return counts_; }
    std::size_t stride(std::size_t axis) const { return strides_[axis]; }
    double spacing(std::size_t axis) const { return spacing_[axis]; }
    double max_spacing() const { return *std::max_element(spacing_.begin(), spacing_.end()); }

    //! Volume attached to an interior node (product of spacings).
    double node_volume() const
    {
        double v = 1.0;
        for (double h : spacing_)
            v *= h;
        return v;
    }

    //! Node coordinate along an axis; mirrored indices give mirrored values exactly.
    double coordinate(std::size_t axis, std::size_t j) const
    {
        const Interval& iv = box_[axis];
        const std::size_t last = counts_[axis] - 1;
        if (2 * j <= last)
            return iv.a + static_cast<double>(j) * spacing_[axis];
        return iv.b - static_cast<double>(last - j) * spacing_[axis];
    }

    std::size_t index_along(std::size_t flat, std::size_t axis) const
    {
        return (flat / strides_[axis]) % counts_[axis];
    }

    std::vector<std::size_t> multi_index(std::size_t flat) const
    {
        std::vector<std::size_t> out(dim());
        for (std::size_t i = 0; i < dim(); ++i)
            out[i] = index_along(flat, i);
        return out;
    }

    std::size_t flat_index(std::span<const std::size_t> idx) const
    {
        std::size_t flat = 0;
        for (std::size_t i = 0; i < dim(); ++i)
            flat += idx[i] * strides_[i];
        return flat;
    }

    std::vector<double> point(std::size_t flat) const
    {
        std::vector<double> x(dim());
        for (std::size_t i = 0; i < dim(); ++i)
            x[i] = coordinate(i, index_along(flat, i));
        return x;
    }

    bool is_boundary(std::size_t flat) const
    {
        for (std::size_t i = 0; i < dim(); ++i)
        {
            const std::size_t j = index_along(flat, i);
            if (j == 0 || j + 1 == counts_[i])
                return true;
        }
        return false;
    }

    //! Flat index of the node mirrored across the midplane of `axis`.
    std::size_t reflect(std::size_t flat, std::size_t axis) const
    {
        const std::size_t j = index_along(flat, axis);
        const std::size_t jr = counts_[axis] - 1 - j;
        return flat - j * strides_[axis] + jr * strides_[axis];
    }

    friend bool operator==(const Grid& a, const Grid& b) { return a.box_ == b.box_ && a.counts_ == b.counts_; }

private:
    Box box_;
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> strides_;
    std::vector<double> spacing_;
    std::size_t size_ = 0;
};

//! Nodal values of a function on a Grid.
class GridField
{
public:
    GridField() = default;
    explicit GridField(Grid grid, double fill = 0.0) : grid_(std::move(grid)), values_(grid_.size(), fill) {}
    GridField(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values))
    {
        if (values_.size() != grid_.size())
            throw GridMismatch("value count does not match grid size");
    }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }
    double min() const { return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end()); }

    //! Largest |value| over boundary nodes.
    double boundary_max_abs() const
    {
        double m = 0.0;
        for (std::size_t k = 0; k < size(); ++k)
            if (grid_.is_boundary(k))
                m = std::max(m, std::abs(values_[k]));
        return m;
    }

    void zero_boundary()
    {
        for (std::size_t k = 0; k < size(); ++k)
            if (grid_.is_boundary(k))
                values_[k] = 0.0;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const GridField& a, const GridField& b)
{
    if (!(a.grid() == b.grid()))
        throw GridMismatch("fields live on different grids");
}

inline double max_abs_difference(const GridField& a, const GridField& b)
{
    require_same_grid(a, b);
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

//! Sample a function of the coordinates at every node.
inline GridField sample(const Grid& grid, const std::function<double(std::span<const double>)>& fn)
{
    GridField out(grid);
    std::vector<double> x(grid.dim());
    for (std::size_t k = 0; k < grid.size(); ++k)
    {
        for (std::size_t i = 0; i < grid.dim(); ++i)
            x[i] = grid.coordinate(i, grid.index_along(k, i));
        out[k] = fn(x);
    }
    return out;
}

//! CSV with one row per node: multi-index, coordinates, value.
inline void write_csv(std::ostream& os, const GridField& f)
{
    const Grid& g = f.grid();
    for (std::size_t i = 0; i < g.dim(); ++i)
        os << "i" << i << ",";
    for (std::size_t i = 0; i < g.dim(); ++i)
        os << "x" << i << ",";
    os << "value\n";
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t k = 0; k < f.size(); ++k)
    {
        for (std::size_t i = 0; i < g.dim(); ++i)
            os << g.index_along(k, i) << ",";
        for (std::size_t i = 0; i < g.dim(); ++i)
            os << g.coordinate(i, g.index_along(k, i)) << ",";
        os << f[k] << "\n";
    }
}

//! Splits [0, count) into `threads` contiguous chunks. Chunk boundaries depend
//! only on (count, threads), so per-chunk reductions are reproducible.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t, std::size_t)>& body)
{
    if (threads <= 1 || count < 4096)
    {
        body(0, count);
        return;
    }
    const std::size_t chunk = (count + threads - 1) / threads;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
    {
        const std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
}

} // namespace orthoplap

#endif // ORTHOPLAP_GRID_HPP
