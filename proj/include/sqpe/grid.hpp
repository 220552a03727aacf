#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace sqpe {

/// Uniform phase grid on [0, pi/2] with both endpoints included.
class PhaseGrid {
public:
    explicit PhaseGrid(std::size_t points) {
        if (points < 2) throw std::invalid_argument("PhaseGrid: need at least 2 points");
        values_.resize(points);
        const double hi = std::numbers::pi / 2.0;
        for (std::size_t j = 0; j < points; ++j)
            values_[j] = hi * (static_cast<double>(j) / static_cast<double>(points - 1));
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    std::span<const double> values() const noexcept { return values_; }

    double lo() const noexcept { return values_.front(); }
    double hi() const noexcept { return values_.back(); }
    double step() const noexcept {
        return (std::numbers::pi / 2.0) / static_cast<double>(values_.size() - 1);
    }

private:
    std::vector<double> values_;
};

}  // namespace sqpe
