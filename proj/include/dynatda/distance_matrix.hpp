#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace dynatda {

/// Dense symmetric n x n matrix with zero diagonal (a semi-metric).
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    explicit DistanceMatrix(std::size_t n, double off_diagonal = 0.0)
        : n_(n), data_(n * n, off_diagonal) {
        for (std::size_t i = 0; i < n; ++i) data_[i * n + i] = 0.0;
    }

    /// Validating constructor for user input.
    static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        const std::size_t n = rows.size();
        DistanceMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw validation_error("distance matrix is not square");
            for (std::size_t j = 0; j < n; ++j) m.data_[i * n + j] = rows[i][j];
        }
        m.validate();
        return m;
    }

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        data_[i * n_ + j] = v;
        data_[j * n_ + i] = v;
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Throws validation_error unless symmetric, zero diagonal, nonnegative.
    void validate() const {
        for (std::size_t i = 0; i < n_; ++i) {
            if ((*this)(i, i) != 0.0) {
                std::ostringstream os;
                os << "nonzero diagonal entry at " << i;
                throw validation_error(os.str());
            }
            for (std::size_t j = i + 1; j < n_; ++j) {
                double a = (*this)(i, j), b = (*this)(j, i);
                if (std::isnan(a) || std::isnan(b) || a < 0.0 || b < 0.0) {
                    std::ostringstream os;
                    os << "negative or NaN distance at (" << i << "," << j << ")";
                    throw validation_error(os.str());
                }
                if (a != b) {
                    std::ostringstream os;
                    os << "asymmetric distance at (" << i << "," << j << "): " << a << " vs " << b;
                    throw validation_error(os.str());
                }
            }
        }
    }

    /// All off-diagonal entries strictly positive.
    bool separates_points() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (!((*this)(i, j) > 0.0)) return false;
        return true;
    }

    /// Triangle inequality up to a relative rounding allowance.
    bool satisfies_triangle(double rel_tol = 1e-12) const {
        double scale = 0.0;
        for (double v : data_)
            if (std::isfinite(v)) scale = std::max(scale, v);
        const double tol = rel_tol * scale;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k)
                    if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + tol) return false;
        return true;
    }

    bool is_metric() const { return separates_points() && satisfies_triangle(); }

    double max_entry() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, v);
        return m;
    }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

}  // namespace dynatda
