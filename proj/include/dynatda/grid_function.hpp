#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "extended.hpp"

namespace dynatda {

enum class Orientation { increasing, decreasing };

/// What a shifted lookup reads beyond the stored range of an axis.
enum class Extension { clamp, zero };

struct GridAxis {
    std::string name;
    double origin = 0.0;
    double step = 1.0;
    std::size_t count = 1;
    Orientation orientation = Orientation::increasing;
    double unit_ratio = 1.0;  // multiplies step into the common shift unit
    Extension extension = Extension::clamp;

    double coordinate(std::ptrdiff_t i) const { return origin + double(i) * step; }
    double normalized_step() const { return step * unit_ratio; }
    int direction() const { return orientation == Orientation::increasing ? 1 : -1; }

    friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

/// Common normalized step of a set of axes; throws if they disagree.
inline double common_step(const std::vector<GridAxis>& axes) {
    if (axes.empty()) return 1.0;
    const double s = axes.front().normalized_step();
    for (const auto& a : axes) {
        if (!(a.step > 0.0) || !(a.unit_ratio > 0.0)) throw config_error("axis '" + a.name + "' has a non-positive step");
        if (std::abs(a.normalized_step() - s) > 1e-9 * s) {
            std::ostringstream os;
            os << "axis '" << a.name << "' has normalized step " << a.normalized_step() << ", expected " << s;
            throw config_error(os.str());
        }
    }
    return s;
}

/// Dense d-dimensional array of extended counts, row-major (last axis fastest).
class GridFunction {
public:
    GridFunction() = default;

    explicit GridFunction(std::vector<GridAxis> axes, std::vector<ExtCount> values = {})
        : axes_(std::move(axes)), values_(std::move(values)) {
        std::size_t total = 1;
        for (const auto& a : axes_) {
            if (a.count == 0) throw config_error("axis '" + a.name + "' is empty");
            total *= a.count;
        }
        if (values_.empty()) values_.assign(total, ExtCount(0));
        if (values_.size() != total) throw config_error("value count does not match axes");
        strides_.assign(axes_.size(), 1);
        for (std::size_t i = axes_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * axes_[i].count;
    }

    std::size_t dim() const { return axes_.size(); }
    const std::vector<GridAxis>& axes() const { return axes_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<ExtCount>& values() const { return values_; }

    bool clamp_extension() const {
        return std::all_of(axes_.begin(), axes_.end(), [](const GridAxis& a) { return a.extension == Extension::clamp; });
    }

    /// Cells with index[left] > index[right] lie outside the domain.
    void set_interval_domain(std::size_t left, std::size_t right) {
        if (left >= dim() || right >= dim() || left == right) throw config_error("bad interval axes");
        interval_ = std::make_pair(left, right);
    }
    void clear_interval_domain() { interval_.reset(); }
    const std::optional<std::pair<std::size_t, std::size_t>>& interval_domain() const { return interval_; }

    template <class I>
    bool in_domain(std::span<const I> idx) const {
        if (!interval_) return true;
        return idx[interval_->first] <= idx[interval_->second];
    }

    std::size_t flat_index(std::span<const std::size_t> idx) const {
        std::size_t f = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) f += idx[i] * strides_[i];
        return f;
    }

    void unravel(std::size_t flat, std::span<std::size_t> out) const {
        for (std::size_t i = 0; i < axes_.size(); ++i) {
            out[i] = flat / strides_[i];
            flat %= strides_[i];
        }
    }

    ExtCount at_flat(std::size_t flat) const { return values_[flat]; }
    ExtCount& at_flat(std::size_t flat) { return values_[flat]; }

    ExtCount at(std::span<const std::size_t> idx) const { return values_[flat_index(idx)]; }
    ExtCount at(std::initializer_list<std::size_t> idx) const {
        return at(std::span<const std::size_t>(idx.begin(), idx.size()));
    }
    void set(std::span<const std::size_t> idx, ExtCount v) { values_[flat_index(idx)] = v; }
    void set(std::initializer_list<std::size_t> idx, ExtCount v) {
        set(std::span<const std::size_t>(idx.begin(), idx.size()), v);
    }

    /// Value at an arbitrary integer index, using each axis' extension rule.
    ExtCount extended(std::span<const std::ptrdiff_t> idx) const {
        std::size_t f = 0;
        for (std::size_t i = 0; i < axes_.size(); ++i) {
            std::ptrdiff_t v = idx[i];
            const auto hi = std::ptrdiff_t(axes_[i].count) - 1;
            if (v < 0 || v > hi) {
                if (axes_[i].extension == Extension::zero) return ExtCount(0);
                v = std::clamp<std::ptrdiff_t>(v, 0, hi);
            }
            f += std::size_t(v) * strides_[i];
        }
        return values_[f];
    }

    /// Physical value of one uniform grid shift.
    double shift_unit() const { return common_step(axes_); }

    nlohmann::json metadata = nlohmann::json::object();

    friend bool operator==(const GridFunction& a, const GridFunction& b) {
        return a.axes_ == b.axes_ && a.values_ == b.values_ && a.interval_ == b.interval_ &&
               a.metadata == b.metadata;
    }

private:
    std::vector<GridAxis> axes_;
    std::vector<ExtCount> values_;
    std::vector<std::size_t> strides_;
    std::optional<std::pair<std::size_t, std::size_t>> interval_;
};

/// Anything the k-test can read: stored cells plus extended lookups.
template <class G>
concept GridView = requires(const G& g, std::size_t flat, std::span<std::size_t> out,
                            std::span<const std::size_t> cell, std::span<const std::ptrdiff_t> idx) {
    { g.dim() } -> std::convertible_to<std::size_t>;
    { g.axes() } -> std::convertible_to<const std::vector<GridAxis>&>;
    { g.size() } -> std::convertible_to<std::size_t>;
    g.unravel(flat, out);
    { g.in_domain(cell) } -> std::convertible_to<bool>;
    { g.at_flat(flat) } -> std::convertible_to<ExtCount>;
    { g.extended(idx) } -> std::convertible_to<ExtCount>;
};

/// Checks a <= b => F(a) >= F(b) over unit moves inside the stored domain.
inline bool is_order_reversing(const GridFunction& g) {
    std::vector<std::size_t> idx(g.dim()), nb(g.dim());
    for (std::size_t f = 0; f < g.size(); ++f) {
        g.unravel(f, idx);
        if (!g.in_domain<std::size_t>(idx)) continue;
        const ExtCount here = g.at_flat(f);
        for (std::size_t ax = 0; ax < g.dim(); ++ax) {
            nb = idx;
            const auto& a = g.axes()[ax];
            if (a.orientation == Orientation::increasing) {
                if (idx[ax] + 1 >= a.count) continue;
                ++nb[ax];
            } else {
                if (idx[ax] == 0) continue;
                --nb[ax];
            }
            if (!g.in_domain<std::size_t>(nb)) continue;
            if (g.at(nb) > here) return false;
        }
    }
    return true;
}

/// Axes along which the two outermost layers in the upward direction agree.
inline std::vector<bool> stabilized_axes(const GridFunction& g) {
    std::vector<bool> out(g.dim(), true);
    std::vector<std::size_t> idx(g.dim()), nb(g.dim());
    for (std::size_t ax = 0; ax < g.dim(); ++ax) {
        const auto& a = g.axes()[ax];
        if (a.count < 2) continue;
        const std::size_t outer = a.orientation == Orientation::increasing ? a.count - 1 : 0;
        const std::size_t inner = a.orientation == Orientation::increasing ? a.count - 2 : 1;
        for (std::size_t f = 0; f < g.size() && out[ax]; ++f) {
            g.unravel(f, idx);
            if (idx[ax] != outer || !g.in_domain<std::size_t>(idx)) continue;
            nb = idx;
            nb[ax] = inner;
            if (g.in_domain<std::size_t>(nb) && g.at(nb) != g.at(idx)) out[ax] = false;
        }
    }
    return out;
}

inline nlohmann::json to_json(const GridFunction& g) {
    nlohmann::json j;
    j["format"] = "dynatda.grid";
    j["version"] = 1;
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : g.axes()) {
        axes.push_back({{"name", a.name},
                        {"origin", a.origin},
                        {"step", a.step},
                        {"count", a.count},
                        {"orientation", a.orientation == Orientation::increasing ? "increasing" : "decreasing"},
                        {"unit_ratio", a.unit_ratio},
                        {"extension", a.extension == Extension::clamp ? "clamp" : "zero"}});
    }
    j["axes"] = std::move(axes);
    j["clamp_extension"] = g.clamp_extension();
    if (g.interval_domain())
        j["interval_axes"] = {g.interval_domain()->first, g.interval_domain()->second};
    else
        j["interval_axes"] = nullptr;
    nlohmann::json vals = nlohmann::json::array();
    for (auto v : g.values()) {
        if (v.is_infinite())
            vals.push_back("inf");
        else
            vals.push_back(v.value());
    }
    j["values"] = std::move(vals);
    j["metadata"] = g.metadata;
    return j;
}

inline GridFunction grid_from_json(const nlohmann::json& j) {
    try {
        std::vector<GridAxis> axes;
        for (const auto& a : j.at("axes")) {
            GridAxis ax;
            ax.name = a.at("name").get<std::string>();
            ax.origin = a.at("origin").get<double>();
            ax.step = a.at("step").get<double>();
            ax.count = a.at("count").get<std::size_t>();
            const auto o = a.at("orientation").get<std::string>();
            if (o != "increasing" && o != "decreasing") throw validation_error("bad orientation '" + o + "'");
            ax.orientation = o == "increasing" ? Orientation::increasing : Orientation::decreasing;
            ax.unit_ratio = a.value("unit_ratio", 1.0);
            const auto e = a.value("extension", std::string("clamp"));
            if (e != "clamp" && e != "zero") throw validation_error("bad extension '" + e + "'");
            ax.extension = e == "clamp" ? Extension::clamp : Extension::zero;
            axes.push_back(std::move(ax));
        }
        std::vector<ExtCount> values;
        for (const auto& v : j.at("values")) {
            if (v.is_string()) {
                if (v.get<std::string>() != "inf") throw validation_error("bad value token");
                values.push_back(ExtCount::infinity());
            } else {
                auto x = v.get<std::int64_t>();
                if (x < 0 || x >= std::int64_t(ExtCount::infinity().value()))
                    throw validation_error("value out of range");
                values.push_back(ExtCount(ExtCount::value_type(x)));
            }
        }
        GridFunction g(std::move(axes), std::move(values));
        if (j.contains("interval_axes") && !j["interval_axes"].is_null())
            g.set_interval_domain(j["interval_axes"][0].get<std::size_t>(), j["interval_axes"][1].get<std::size_t>());
        if (j.contains("metadata")) g.metadata = j["metadata"];
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("bad grid JSON: ") + e.what());
    } catch (const config_error& e) {
        throw validation_error(e.what());
    }
}

/// Writes the 2-D slice spanned by (row_axis, col_axis) with the other axes fixed.
/// Cells outside the domain are left empty.
inline void write_slice_csv(std::ostream& os, const GridFunction& g, std::size_t row_axis, std::size_t col_axis,
                            std::vector<std::size_t> fixed) {
    if (row_axis >= g.dim() || col_axis >= g.dim() || row_axis == col_axis || fixed.size() != g.dim())
        throw config_error("bad slice specification");
    os.precision(17);
    const auto& ra = g.axes()[row_axis];
    const auto& ca = g.axes()[col_axis];
    os << ra.name << "\\" << ca.name;
    for (std::size_t c = 0; c < ca.count; ++c) os << ',' << ca.coordinate(std::ptrdiff_t(c));
    os << '\n';
    for (std::size_t r = 0; r < ra.count; ++r) {
        os << ra.coordinate(std::ptrdiff_t(r));
        fixed[row_axis] = r;
        for (std::size_t c = 0; c < ca.count; ++c) {
            fixed[col_axis] = c;
            os << ',';
            if (g.in_domain<std::size_t>(fixed)) os << g.at(fixed);
        }
        os << '\n';
    }
}

}  // namespace dynatda
