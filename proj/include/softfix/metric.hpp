#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "softfix/param_set.hpp"
#include "softfix/point.hpp"
#include "softfix/soft_real.hpp"

namespace softfix {

enum class ParamPart { abs_diff, capped_abs_diff };
enum class PointPart { euclidean, discrete };

/// d(x_l, y_m) = weight * rho_E(v(l), v(m)) + rho_X(x, y).
struct SumFamily {
    ParamPart param_part = ParamPart::abs_diff;
    double cap = 0.0; // used by capped_abs_diff only
    double weight = 1.0;
    PointPart point_part = PointPart::euclidean;
};

/// d(x_l, y_m) = rho_X(x, y) ^ (1 + |v(l) - v(m)|). Representable so the
/// axiom checker can demonstrate its failure modes; this family is not a
/// soft metric in general.
struct PowerFamily {
    PointPart point_part = PointPart::euclidean;
};

using MetricDescriptor = std::variant<SumFamily, PowerFamily>;

inline double point_part_distance(PointPart kind, const std::vector<double>& a,
                                  const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::domain_error("point metric: dimension mismatch");
    if (kind == PointPart::discrete) return a == b ? 0.0 : 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double param_part_distance(const SumFamily& f, double u, double v) {
    double d = std::abs(u - v);
    if (f.param_part == ParamPart::capped_abs_diff) d = std::min(f.cap, d);
    return d;
}

/// Soft metric space over a finite parameter set, with either an exhaustively
/// tabulated distance table (finite universe) or an analytic descriptor on
/// R^n evaluated on demand. Analytic distances are constant soft reals.
class SoftMetricSpace {
public:
    static SoftMetricSpace tabulated(ParamSetPtr params, UniversePtr universe,
                                     std::vector<std::vector<SoftReal>> table) {
        SoftMetricSpace s;
        s.params_ = std::move(params);
        s.universe_ = std::move(universe);
        if (!s.params_ || !s.universe_)
            throw std::invalid_argument("tabulated space: null parameter set or universe");
        const std::size_t n = s.params_->size() * s.universe_->size();
        if (table.size() != n)
            throw std::invalid_argument("tabulated space: table must cover all soft points");
        for (auto& row : table) {
            if (row.size() != n)
                throw std::invalid_argument("tabulated space: table must be square");
            for (auto& d : row) {
                if (!same_params(d.params(), s.params_))
                    throw std::invalid_argument("tabulated space: entry over a different parameter set");
                if (!d.nonnegative())
                    throw std::domain_error("tabulated space: distances must be nonnegative");
            }
        }
        // Diagonal is fixed at the zero soft real regardless of input.
        for (std::size_t i = 0; i < n; ++i) table[i][i] = SoftReal::zeros(s.params_);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!(table[i][j] == table[j][i]))
                    throw std::invalid_argument("tabulated space: table must be symmetric");
        s.table_ = std::move(table);
        return s;
    }

    static SoftMetricSpace analytic(ParamSetPtr params, std::size_t dim, MetricDescriptor desc) {
        SoftMetricSpace s;
        s.params_ = std::move(params);
        if (!s.params_) throw std::invalid_argument("analytic space: null parameter set");
        if (!s.params_->has_values())
            throw std::invalid_argument("analytic space: parameter labels must carry numeric values");
        if (dim == 0) throw std::invalid_argument("analytic space: dimension must be >= 1");
        if (const auto* sum = std::get_if<SumFamily>(&desc)) {
            if (!(sum->weight > 0.0) || !std::isfinite(sum->weight))
                throw std::invalid_argument("analytic space: weight must be positive");
            if (sum->param_part == ParamPart::capped_abs_diff &&
                (!(sum->cap > 0.0) || !std::isfinite(sum->cap)))
                throw std::invalid_argument("analytic space: cap must be positive");
        }
        s.dim_ = dim;
        s.descriptor_ = std::move(desc);
        return s;
    }

    bool is_tabulated() const { return universe_ != nullptr; }
    bool is_analytic() const { return universe_ == nullptr; }

    const ParamSetPtr& params() const { return params_; }

    const UniversePtr& universe() const {
        if (!is_tabulated()) throw std::domain_error("analytic space has no finite universe");
        return universe_;
    }

    std::size_t dim() const {
        if (!is_analytic()) throw std::domain_error("tabulated space has no ambient dimension");
        return dim_;
    }

    const MetricDescriptor& descriptor() const {
        if (!is_analytic()) throw std::domain_error("tabulated space has no metric descriptor");
        return descriptor_;
    }

    const std::vector<std::vector<SoftReal>>& table() const {
        if (!is_tabulated()) throw std::domain_error("analytic space has no distance table");
        return table_;
    }

    /// Soft points are indexed label-major: index = label * |X| + element.
    std::size_t soft_point_count() const {
        return params_->size() * universe()->size();
    }

    std::size_t point_index(const FinitePoint& p) const {
        if (p.label >= params_->size())
            throw std::domain_error("unknown parameter label index in soft point");
        if (p.element >= universe()->size())
            throw std::domain_error("unknown universe element index in soft point");
        return p.label * universe_->size() + p.element;
    }

    FinitePoint point_at(std::size_t index) const {
        if (index >= soft_point_count())
            throw std::domain_error("soft point index out of range");
        return FinitePoint{index % universe_->size(), index / universe_->size()};
    }

    std::vector<SoftPoint> soft_points() const {
        std::vector<SoftPoint> out;
        out.reserve(soft_point_count());
        for (std::size_t i = 0; i < soft_point_count(); ++i) out.push_back(point_at(i));
        return out;
    }

    SoftReal distance(const SoftPoint& p, const SoftPoint& q) const {
        if (is_tabulated()) {
            const auto& fp = as_finite(p);
            const auto& fq = as_finite(q);
            return table_[point_index(fp)][point_index(fq)];
        }
        const auto& ap = as_analytic(p);
        const auto& aq = as_analytic(q);
        if (ap.coords.size() != dim_ || aq.coords.size() != dim_)
            throw std::domain_error("analytic point dimension does not match the space");
        return SoftReal::constant(params_, scalar_distance(ap, aq));
    }

    /// Analytic distance as a scalar (the constant component value).
    double scalar_distance(const AnalyticPoint& p, const AnalyticPoint& q) const {
        if (!is_analytic()) throw std::domain_error("scalar_distance requires an analytic space");
        if (const auto* sum = std::get_if<SumFamily>(&descriptor_)) {
            return sum->weight * param_part_distance(*sum, p.label, q.label) +
                   point_part_distance(sum->point_part, p.coords, q.coords);
        }
        const auto& pw = std::get<PowerFamily>(descriptor_);
        double base = point_part_distance(pw.point_part, p.coords, q.coords);
        return std::pow(base, 1.0 + std::abs(p.label - q.label));
    }

    /// Scalar projection d_l(x, y): component l of d(x@l, y@l). Tabulated form.
    std::vector<std::vector<double>> project_table(std::size_t label) const {
        if (label >= params_->size()) throw std::domain_error("project: unknown label index");
        const std::size_t nx = universe()->size();
        std::vector<std::vector<double>> m(nx, std::vector<double>(nx, 0.0));
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < nx; ++y)
                m[x][y] = table_[point_index({x, label})][point_index({y, label})][label];
        return m;
    }

    /// Scalar projection on the analytic backend: both points at one label value.
    double project_distance(double label_value, const std::vector<double>& x,
                            const std::vector<double>& y) const {
        return scalar_distance(AnalyticPoint(x, label_value), AnalyticPoint(y, label_value));
    }

private:
    SoftMetricSpace() = default;

    ParamSetPtr params_;
    UniversePtr universe_; // tabulated backend only
    std::vector<std::vector<SoftReal>> table_;
    std::size_t dim_ = 0; // analytic backend only
    MetricDescriptor descriptor_;
};

/// Unvalidated square table of candidate distances, the input of repair.
using RawDistanceTable = std::vector<std::vector<SoftReal>>;

} // namespace softfix
