#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include "softfix/metric.hpp"
#include "softfix/point.hpp"
#include "softfix/soft_set.hpp"

namespace softfix {

/// x -> A x + b on R^dim, row-major A.
struct AffinePointMap {
    std::size_t dim = 1;
    std::vector<double> A; // dim * dim
    std::vector<double> b; // dim

    std::vector<double> operator()(const std::vector<double>& x) const {
        if (x.size() != dim) throw std::domain_error("affine point map: dimension mismatch");
        std::vector<double> y(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            double s = b[i];
            for (std::size_t j = 0; j < dim; ++j) s += A[i * dim + j] * x[j];
            y[i] = s;
        }
        return y;
    }
};

inline AffinePointMap scaling_map(std::size_t dim, double factor) {
    AffinePointMap m;
    m.dim = dim;
    m.A.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) m.A[i * dim + i] = factor;
    m.b.assign(dim, 0.0);
    return m;
}

/// Element table: domain element index -> codomain element index.
struct TablePointMap {
    std::vector<std::size_t> image;
};

/// v -> a*v + c on numeric labels.
struct AffineParamMap {
    double a = 1.0;
    double c = 0.0;
};

/// v -> v + 1/v on numeric labels (undefined at 0).
struct RecipSumParamMap {};

/// Label table: domain label index -> codomain label index.
struct TableParamMap {
    std::vector<std::size_t> image;
};

/// Soft mapping (f, phi): a point map together with a parameter map. Finite
/// soft points require table forms; analytic points require the affine point
/// map and a numeric parameter map.
struct SoftMapping {
    std::variant<AffinePointMap, TablePointMap> point_map;
    std::variant<AffineParamMap, RecipSumParamMap, TableParamMap> param_map;
};

inline SoftPoint apply_point(const SoftMapping& m, const SoftPoint& p) {
    if (is_finite_point(p)) {
        const auto& fp = as_finite(p);
        const auto* f = std::get_if<TablePointMap>(&m.point_map);
        const auto* phi = std::get_if<TableParamMap>(&m.param_map);
        if (!f || !phi)
            throw std::domain_error("apply_point: finite soft points require table maps");
        if (fp.element >= f->image.size())
            throw std::domain_error("apply_point: point map table has no entry for this element");
        if (fp.label >= phi->image.size())
            throw std::domain_error("apply_point: parameter map table has no entry for this label");
        return FinitePoint{f->image[fp.element], phi->image[fp.label]};
    }
    const auto& ap = as_analytic(p);
    const auto* f = std::get_if<AffinePointMap>(&m.point_map);
    if (!f) throw std::domain_error("apply_point: analytic soft points require an affine point map");
    double label = 0.0;
    if (const auto* aff = std::get_if<AffineParamMap>(&m.param_map)) {
        label = aff->a * ap.label + aff->c;
    } else if (std::holds_alternative<RecipSumParamMap>(m.param_map)) {
        if (ap.label == 0.0)
            throw std::domain_error("apply_point: reciprocal-sum parameter map is undefined at 0");
        label = ap.label + 1.0 / ap.label;
    } else {
        throw std::domain_error("apply_point: analytic soft points require a numeric parameter map");
    }
    return AnalyticPoint((*f)(ap.coords), label);
}

/// Image of a soft set under (f, phi): apply to each decomposed point.
inline SoftSet image_of(const SoftMapping& m, const SoftSet& S, const SoftMetricSpace& codomain) {
    SoftSet out(codomain.params(), codomain.universe());
    for (const auto& p : decompose(S)) out.add(as_finite(apply_point(m, SoftPoint(p))));
    return out;
}

/// Preimage: every domain soft point whose image lies in T.
inline SoftSet preimage_of(const SoftMapping& m, const SoftSet& T, const SoftMetricSpace& domain) {
    SoftSet out(domain.params(), domain.universe());
    for (const auto& p : domain.soft_points())
        if (T.contains(as_finite(apply_point(m, p)))) out.add(as_finite(p));
    return out;
}

} // namespace softfix
