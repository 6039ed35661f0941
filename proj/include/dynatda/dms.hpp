#pragma once

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "distance_matrix.hpp"
#include "error.hpp"

namespace dynatda {

/// Uniform time sampling: sample i sits at t0 + i*step.
struct TimeGrid {
    double t0 = 0.0;
    double step = 1.0;
    std::size_t count = 1;

    double time(std::size_t i) const { return t0 + double(i) * step; }

    void validate() const {
        if (!(step > 0.0) || !std::isfinite(step)) throw config_error("time step must be positive");
        if (!std::isfinite(t0)) throw config_error("time origin must be finite");
        if (count < 1) throw config_error("time grid needs at least one sample");
    }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// A finite point set with one symmetric distance matrix per time sample.
class SampledDMS {
public:
    SampledDMS(std::vector<std::string> points, TimeGrid grid, std::vector<double> dist,
               std::optional<double> lipschitz_hint = std::nullopt)
        : points_(std::move(points)), grid_(grid), dist_(std::move(dist)),
          lipschitz_hint_(lipschitz_hint) {
        grid_.validate();
        const std::size_t n = points_.size();
        if (n == 0) throw validation_error("a DMS needs at least one point");
        if (std::set<std::string>(points_.begin(), points_.end()).size() != n)
            throw validation_error("duplicate point identifiers");
        if (dist_.size() != grid_.count * n * n)
            throw validation_error("distance tensor shape does not match points x samples");
        if (lipschitz_hint_ && !(*lipschitz_hint_ >= 0.0))
            throw validation_error("lipschitz hint must be nonnegative");
        for (std::size_t k = 0; k < grid_.count; ++k) {
            DistanceMatrix s = slice(k);
            for (double v : s.data())
                if (!std::isfinite(v)) {
                    std::ostringstream os;
                    os << "non-finite distance in slice " << k;
                    throw validation_error(os.str());
                }
            try {
                s.validate();
            } catch (const validation_error& e) {
                std::ostringstream os;
                os << "slice " << k << ": " << e.what();
                throw validation_error(os.str());
            }
            if (!s.satisfies_triangle()) triangle_violations_.push_back(k);
            if (s.separates_points() || n == 1) has_metric_slice_ = true;
        }
    }

    std::size_t size() const { return points_.size(); }
    const std::vector<std::string>& points() const { return points_; }
    const TimeGrid& grid() const { return grid_; }
    std::size_t count() const { return grid_.count; }
    const std::optional<double>& lipschitz_hint() const { return lipschitz_hint_; }

    double operator()(std::size_t k, std::size_t i, std::size_t j) const {
        const std::size_t n = points_.size();
        return dist_[(k * n + i) * n + j];
    }

    DistanceMatrix slice(std::size_t k) const {
        const std::size_t n = points_.size();
        DistanceMatrix m(n);
        std::copy_n(dist_.begin() + std::ptrdiff_t(k * n * n), n * n, m.data().begin());
        return m;
    }

    const std::vector<double>& tensor() const { return dist_; }

    /// Slices failing the triangle inequality (recorded, never rejected).
    const std::vector<std::size_t>& triangle_violations() const { return triangle_violations_; }

    /// False when no slice separates all points; callers treat this as a warning.
    bool has_metric_slice() const { return has_metric_slice_; }

    friend bool operator==(const SampledDMS& a, const SampledDMS& b) {
        return a.points_ == b.points_ && a.grid_ == b.grid_ && a.dist_ == b.dist_ &&
               a.lipschitz_hint_ == b.lipschitz_hint_;
    }

private:
    std::vector<std::string> points_;
    TimeGrid grid_;
    std::vector<double> dist_;
    std::optional<double> lipschitz_hint_;
    std::vector<std::size_t> triangle_violations_;
    bool has_metric_slice_ = false;
};

enum class AmbientMetric { euclidean, manhattan, chebyshev };

inline AmbientMetric parse_ambient_metric(const std::string& s) {
    if (s == "euclidean") return AmbientMetric::euclidean;
    if (s == "manhattan") return AmbientMetric::manhattan;
    if (s == "chebyshev") return AmbientMetric::chebyshev;
    throw config_error("unknown ambient metric '" + s + "'");
}

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double parse_real(const std::string& s, const std::string& what) {
    if (s.empty()) throw validation_error("empty " + what);
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw validation_error("cannot parse " + what + " '" + s + "'");
    return v;
}

inline bool all_integers(const std::vector<std::string>& ids) {
    for (const auto& s : ids) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

inline double ambient_distance(const std::vector<double>& a, const std::vector<double>& b,
                               AmbientMetric metric) {
    double acc = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        double d = std::abs(a[c] - b[c]);
        switch (metric) {
            case AmbientMetric::euclidean: acc += d * d; break;
            case AmbientMetric::manhattan: acc += d; break;
            case AmbientMetric::chebyshev: acc = std::max(acc, d); break;
        }
    }
    return metric == AmbientMetric::euclidean ? std::sqrt(acc) : acc;
}

}  // namespace detail

/// Reads `id,t,x1[,x2[,x3]]` rows (any order) sampled on a uniform time grid.
inline SampledDMS load_trajectories_csv(std::istream& in,
                                        AmbientMetric metric = AmbientMetric::euclidean) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        header = detail::split_csv(line);
        break;
    }
    if (header.size() < 3 || header.size() > 5 || header[0] != "id" || header[1] != "t")
        throw validation_error("trajectory header must be id,t,x1[,x2[,x3]]");
    for (std::size_t c = 2; c < header.size(); ++c)
        if (header[c] != "x" + std::to_string(c - 1))
            throw validation_error("trajectory header must be id,t,x1[,x2[,x3]]");
    const std::size_t dim = header.size() - 2;

    struct Row {
        std::string id;
        double t;
        std::vector<double> x;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto f = detail::split_csv(line);
        if (f.size() != header.size()) {
            std::ostringstream os;
            os << "line " << line_no << ": expected " << header.size() << " fields, got " << f.size();
            throw validation_error(os.str());
        }
        Row r{f[0], detail::parse_real(f[1], "time"), {}};
        if (r.id.empty()) throw validation_error("empty id on line " + std::to_string(line_no));
        for (std::size_t c = 0; c < dim; ++c) r.x.push_back(detail::parse_real(f[2 + c], "coordinate"));
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw validation_error("trajectory table has no rows");

    std::vector<double> times;
    for (const auto& r : rows) times.push_back(r.t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    TimeGrid grid{times.front(), 1.0, 1};
    if (times.size() > 1) {
        double min_gap = times[1] - times[0];
        for (std::size_t i = 2; i < times.size(); ++i) min_gap = std::min(min_gap, times[i] - times[i - 1]);
        const double span = times.back() - times.front();
        grid.count = std::size_t(std::llround(span / min_gap)) + 1;
        grid.step = span / double(grid.count - 1);
    }
    auto index_of = [&](double t) {
        double q = (t - grid.t0) / grid.step;
        auto i = std::llround(q);
        if (std::abs(t - grid.time(std::size_t(i))) > 1e-9 * grid.step) {
            std::ostringstream os;
            os.precision(17);
            os << "time " << t << " is not on a uniform grid";
            throw validation_error(os.str());
        }
        return std::size_t(i);
    };

    std::vector<std::string> ids;
    for (const auto& r : rows) ids.push_back(r.id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (detail::all_integers(ids))
        std::sort(ids.begin(), ids.end(),
                  [](const std::string& a, const std::string& b) { return std::stoll(a) < std::stoll(b); });
    std::map<std::string, std::size_t> id_index;
    for (std::size_t i = 0; i < ids.size(); ++i) id_index[ids[i]] = i;

    const std::size_t n = ids.size();
    std::vector<std::vector<double>> pos(grid.count * n);
    for (const auto& r : rows) {
        std::size_t k = index_of(r.t);
        auto& slot = pos[k * n + id_index[r.id]];
        if (!slot.empty()) {
            std::ostringstream os;
            os.precision(17);
            os << "duplicate sample for id '" << r.id << "' at time " << r.t;
            throw validation_error(os.str());
        }
        slot = r.x;
    }
    for (std::size_t k = 0; k < grid.count; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (pos[k * n + i].empty()) {
                std::ostringstream os;
                os.precision(17);
                os << "ragged trajectories: id '" << ids[i] << "' has no sample at time " << grid.time(k);
                throw validation_error(os.str());
            }

    std::vector<double> dist(grid.count * n * n, 0.0);
    for (std::size_t k = 0; k < grid.count; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double d = detail::ambient_distance(pos[k * n + i], pos[k * n + j], metric);
                dist[(k * n + i) * n + j] = d;
                dist[(k * n + j) * n + i] = d;
            }
    return SampledDMS(std::move(ids), grid, std::move(dist));
}

/// Reads `{ "points": [...], "t0": .., "step": .., "slices": [[[...]]] }`.
inline SampledDMS load_tensor_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("malformed tensor JSON: ") + e.what());
    }
    try {
        std::vector<std::string> points;
        for (const auto& p : j.at("points")) points.push_back(p.is_string() ? p.get<std::string>() : p.dump());
        TimeGrid grid{j.at("t0").get<double>(), j.at("step").get<double>(), j.at("slices").size()};
        const std::size_t n = points.size();
        std::vector<double> dist;
        dist.reserve(grid.count * n * n);
        std::size_t k = 0;
        for (const auto& s : j.at("slices")) {
            if (s.size() != n) throw validation_error("slice " + std::to_string(k) + " has wrong row count");
            for (const auto& row : s) {
                if (row.size() != n) throw validation_error("slice " + std::to_string(k) + " has wrong row length");
                for (const auto& v : row) {
                    double d = v.get<double>();
                    if (d < 0.0) {
                        std::ostringstream os;
                        os << "negative distance " << d << " in slice " << k;
                        throw validation_error(os.str());
                    }
                    dist.push_back(d);
                }
            }
            ++k;
        }
        std::optional<double> hint;
        if (j.contains("lipschitz") && !j["lipschitz"].is_null()) hint = j["lipschitz"].get<double>();
        return SampledDMS(std::move(points), grid, std::move(dist), hint);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("bad tensor JSON: ") + e.what());
    } catch (const config_error& e) {
        throw validation_error(e.what());
    }
}

inline void write_tensor_json(std::ostream& os, const SampledDMS& dms) {
    nlohmann::json j;
    j["points"] = dms.points();
    j["t0"] = dms.grid().t0;
    j["step"] = dms.grid().step;
    if (dms.lipschitz_hint()) j["lipschitz"] = *dms.lipschitz_hint();
    const std::size_t n = dms.size();
    nlohmann::json slices = nlohmann::json::array();
    for (std::size_t k = 0; k < dms.count(); ++k) {
        nlohmann::json s = nlohmann::json::array();
        for (std::size_t i = 0; i < n; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < n; ++c) row.push_back(dms(k, i, c));
            s.push_back(std::move(row));
        }
        slices.push_back(std::move(s));
    }
    j["slices"] = std::move(slices);
    os << j.dump() << '\n';
}

/// Dispatches on extension: .csv trajectories, anything else tensor JSON.
inline SampledDMS load_dms(const std::filesystem::path& path,
                           AmbientMetric metric = AmbientMetric::euclidean) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot read " + path.string());
    if (path.extension() == ".csv") return load_trajectories_csv(in, metric);
    return load_tensor_json(in);
}

/// Left-endpoint coarsening: coarse slice q is fine slice q*m.
inline SampledDMS discretize(const SampledDMS& dms, std::size_t m) {
    if (m < 1) throw config_error("coarsening factor must be at least 1");
    const std::size_t n = dms.size();
    TimeGrid g{dms.grid().t0, dms.grid().step * double(m), (dms.count() - 1) / m + 1};
    std::vector<double> dist;
    dist.reserve(g.count * n * n);
    for (std::size_t q = 0; q < g.count; ++q) {
        auto first = dms.tensor().begin() + std::ptrdiff_t(q * m * n * n);
        dist.insert(dist.end(), first, first + std::ptrdiff_t(n * n));
    }
    return SampledDMS(dms.points(), g, std::move(dist), dms.lipschitz_hint());
}

/// Samples first..last inclusive, on the same step.
inline SampledDMS crop(const SampledDMS& dms, std::size_t first, std::size_t last) {
    if (first > last || last >= dms.count()) throw config_error("crop window outside the sampled range");
    const std::size_t nn = dms.size() * dms.size();
    TimeGrid g{dms.grid().time(first), dms.grid().step, last - first + 1};
    std::vector<double> dist(dms.tensor().begin() + std::ptrdiff_t(first * nn),
                             dms.tensor().begin() + std::ptrdiff_t((last + 1) * nn));
    return SampledDMS(dms.points(), g, std::move(dist), dms.lipschitz_hint());
}

/// The coarsened DMS read back on the original grid: slice i is slice m*floor(i/m).
inline SampledDMS hold_discretize(const SampledDMS& dms, std::size_t m) {
    if (m < 1) throw config_error("coarsening factor must be at least 1");
    const std::size_t n = dms.size();
    std::vector<double> dist;
    dist.reserve(dms.tensor().size());
    for (std::size_t i = 0; i < dms.count(); ++i) {
        auto first = dms.tensor().begin() + std::ptrdiff_t((i / m) * m * n * n);
        dist.insert(dist.end(), first, first + std::ptrdiff_t(n * n));
    }
    return SampledDMS(dms.points(), dms.grid(), std::move(dist), dms.lipschitz_hint());
}

/// Largest difference quotient between adjacent samples.
inline double estimate_lipschitz(const SampledDMS& dms) {
    if (dms.count() < 2) throw config_error("lipschitz estimate needs at least two samples");
    const std::size_t n = dms.size();
    double best = 0.0;
    for (std::size_t k = 0; k + 1 < dms.count(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                best = std::max(best, std::abs(dms(k + 1, i, j) - dms(k, i, j)) / dms.grid().step);
    return best;
}

/// Lipschitz hint if present, else the sampled estimate (0 for one sample).
inline double lipschitz_of(const SampledDMS& dms) {
    if (dms.lipschitz_hint()) return *dms.lipschitz_hint();
    return dms.count() < 2 ? 0.0 : estimate_lipschitz(dms);
}

enum class ExampleFamily { constant, figure1_x, figure1_y };

struct ExampleSpec {
    ExampleFamily family = ExampleFamily::constant;
    double r = 1.0;
    DistanceMatrix metric;
    std::vector<std::string> names;
};

inline SampledDMS make_constant(const DistanceMatrix& metric, const TimeGrid& grid,
                                std::vector<std::string> names = {}) {
    grid.validate();
    metric.validate();
    if (!metric.is_metric()) throw validation_error("constant example needs a metric");
    const std::size_t n = metric.size();
    if (names.empty())
        for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    if (names.size() != n) throw validation_error("name count does not match metric size");
    std::vector<double> dist;
    dist.reserve(grid.count * n * n);
    for (std::size_t k = 0; k < grid.count; ++k) dist.insert(dist.end(), metric.data().begin(), metric.data().end());
    return SampledDMS(std::move(names), grid, std::move(dist), 0.0);
}

namespace detail {

template <class Mid>
SampledDMS line_example(double r, const TimeGrid& grid, const char* prefix, Mid mid) {
    if (!(r > 0.0)) throw config_error("figure example needs r > 0");
    grid.validate();
    std::vector<std::string> names;
    for (int i = 1; i <= 3; ++i) names.push_back(prefix + std::to_string(i));
    std::vector<double> dist(grid.count * 9, 0.0);
    for (std::size_t k = 0; k < grid.count; ++k) {
        const double x[3] = {-r, mid(grid.time(k)), r};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) dist[k * 9 + std::size_t(i * 3 + j)] = std::abs(x[i] - x[j]);
    }
    return SampledDMS(std::move(names), grid, std::move(dist), r);
}

}  // namespace detail

/// Points at -r, r sin t, r on the line.
inline SampledDMS make_figure1_x(double r, const TimeGrid& grid) {
    return detail::line_example(r, grid, "x", [r](double t) { return r * std::sin(t); });
}

/// Points at -r, r |sin t|, r on the line.
inline SampledDMS make_figure1_y(double r, const TimeGrid& grid) {
    return detail::line_example(r, grid, "y", [r](double t) { return r * std::abs(std::sin(t)); });
}

inline SampledDMS make_example(const ExampleSpec& spec, const TimeGrid& grid) {
    switch (spec.family) {
        case ExampleFamily::constant: return make_constant(spec.metric, grid, spec.names);
        case ExampleFamily::figure1_x: return make_figure1_x(spec.r, grid);
        case ExampleFamily::figure1_y: return make_figure1_y(spec.r, grid);
    }
    throw config_error("unknown example family");
}

}  // namespace dynatda
