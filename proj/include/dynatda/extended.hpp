#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace dynatda {

/// Nonnegative integer with a saturating +infinity.
class ExtCount {
public:
    using value_type = std::uint32_t;

    constexpr ExtCount() = default;
    constexpr ExtCount(value_type v) : v_(v) {}

    static constexpr ExtCount infinity() {
        ExtCount c;
        c.v_ = inf_raw;
        return c;
    }

    constexpr bool is_infinite() const { return v_ == inf_raw; }
    constexpr value_type value() const { return v_; }

    friend constexpr auto operator<=>(ExtCount, ExtCount) = default;

    friend constexpr ExtCount operator+(ExtCount a, ExtCount b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        std::uint64_t s = std::uint64_t(a.v_) + b.v_;
        if (s >= inf_raw) return infinity();
        return ExtCount(value_type(s));
    }

    std::string to_string() const { return is_infinite() ? "inf" : std::to_string(v_); }

    friend std::ostream& operator<<(std::ostream& os, ExtCount c) { return os << c.to_string(); }

private:
    static constexpr value_type inf_raw = std::numeric_limits<value_type>::max();
    value_type v_ = 0;
};

}  // namespace dynatda
