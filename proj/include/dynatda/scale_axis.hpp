#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>

#include "error.hpp"

namespace dynatda {

/// Regular grid of scales origin + m*step, m in [0, count).
/// A distance h is reached at m when h <= value(m) + 1e-9*step; the allowance
/// only absorbs rounding in the grid coordinate itself.
struct ScaleAxis {
    double origin = 0.0;
    double step = 1.0;
    std::size_t count = 1;

    double value(std::ptrdiff_t m) const { return origin + double(m) * step; }
    double threshold(std::ptrdiff_t m) const { return value(m) + 1e-9 * step; }
    double top() const { return value(std::ptrdiff_t(count) - 1); }

    void validate() const {
        if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(origin))
            throw config_error("scale step must be positive and finite");
        if (count < 1) throw config_error("empty scale range");
    }

    /// Smallest m with h <= threshold(m) (may lie outside [0, count)).
    std::ptrdiff_t index_reaching(double h) const {
        if (std::isinf(h)) return std::ptrdiff_t(count) + (std::ptrdiff_t(1) << 40);
        auto m = std::ptrdiff_t(std::ceil((h - origin) / step - 1e-9));
        while (h <= threshold(m - 1)) --m;
        while (!(h <= threshold(m))) ++m;
        return m;
    }

    /// Index of the scale 0; throws unless 0 lies on the grid.
    std::ptrdiff_t zero_index() const {
        auto m = std::ptrdiff_t(std::llround(-origin / step));
        if (std::abs(value(m)) > 1e-9 * step || m < 0 || m >= std::ptrdiff_t(count)) {
            std::ostringstream os;
            os << "scale grid must contain 0 (origin " << origin << ", step " << step << ", count " << count << ")";
            throw config_error(os.str());
        }
        return m;
    }

    friend bool operator==(const ScaleAxis&, const ScaleAxis&) = default;
};

}  // namespace dynatda
