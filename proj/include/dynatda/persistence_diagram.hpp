#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace dynatda {

struct DiagramPoint {
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();

    bool essential() const { return std::isinf(death); }
    friend auto operator<=>(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Multiset of (birth, death) pairs, death possibly +inf.
struct PersistenceDiagram {
    std::vector<DiagramPoint> points;

    void validate() const {
        for (const auto& p : points) {
            if (std::isnan(p.birth) || std::isnan(p.death) || std::isinf(p.birth) || p.birth > p.death) {
                std::ostringstream os;
                os << "invalid diagram point (" << p.birth << ", " << p.death << ")";
                throw validation_error(os.str());
            }
        }
    }

    void sort() { std::sort(points.begin(), points.end()); }
    std::size_t size() const { return points.size(); }
};

inline nlohmann::json to_json(const PersistenceDiagram& d) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : d.points) {
        if (p.essential())
            j.push_back({p.birth, "inf"});
        else
            j.push_back({p.birth, p.death});
    }
    return j;
}

}  // namespace dynatda
