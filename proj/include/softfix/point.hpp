#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "softfix/param_set.hpp"

namespace softfix {

/// Finite universe of named elements.
class Universe {
public:
    explicit Universe(std::vector<std::string> elements) : elements_(std::move(elements)) {
        if (elements_.empty())
            throw std::invalid_argument("Universe: finite universe must be non-empty");
        for (std::size_t i = 0; i < elements_.size(); ++i)
            for (std::size_t j = i + 1; j < elements_.size(); ++j)
                if (elements_[i] == elements_[j])
                    throw std::invalid_argument("Universe: duplicate element '" + elements_[i] + "'");
    }

    std::size_t size() const { return elements_.size(); }
    const std::string& name(std::size_t i) const { return elements_.at(i); }
    const std::vector<std::string>& names() const { return elements_; }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < elements_.size(); ++i)
            if (elements_[i] == name) return i;
        return std::nullopt;
    }

    std::size_t require_index(std::string_view name) const {
        auto i = index_of(name);
        if (!i) throw std::domain_error("unknown universe element '" + std::string(name) + "'");
        return *i;
    }

    friend bool operator==(const Universe& a, const Universe& b) {
        return a.elements_ == b.elements_;
    }

private:
    std::vector<std::string> elements_;
};

using UniversePtr = std::shared_ptr<const Universe>;

inline UniversePtr make_universe(std::vector<std::string> elements) {
    return std::make_shared<const Universe>(std::move(elements));
}

inline bool same_universe(const UniversePtr& a, const UniversePtr& b) {
    return a == b || (a && b && *a == *b);
}

/// Soft point over a finite universe: one element tagged with one label,
/// both stored as indices. Equality is elementwise (Def 2.11: equal iff the
/// element and the label both coincide).
struct FinitePoint {
    std::size_t element = 0;
    std::size_t label = 0;

    friend bool operator==(const FinitePoint&, const FinitePoint&) = default;
};

/// Soft point on an analytic space: coordinates in R^n tagged with a raw
/// numeric label value. Parameter maps may produce labels outside the declared
/// seed set; the label line is all of R.
struct AnalyticPoint {
    std::vector<double> coords;
    double label = 0.0;

    AnalyticPoint() = default;
    AnalyticPoint(std::vector<double> c, double l) : coords(std::move(c)), label(l) {
        for (double v : coords)
            if (!std::isfinite(v)) throw std::domain_error("AnalyticPoint: non-finite coordinate");
        if (!std::isfinite(label)) throw std::domain_error("AnalyticPoint: non-finite label value");
    }

    friend bool operator==(const AnalyticPoint&, const AnalyticPoint&) = default;
};

using SoftPoint = std::variant<FinitePoint, AnalyticPoint>;

inline bool is_finite_point(const SoftPoint& p) { return std::holds_alternative<FinitePoint>(p); }

inline const FinitePoint& as_finite(const SoftPoint& p) {
    if (auto* fp = std::get_if<FinitePoint>(&p)) return *fp;
    throw std::domain_error("expected a finite-backend soft point");
}

inline const AnalyticPoint& as_analytic(const SoftPoint& p) {
    if (auto* ap = std::get_if<AnalyticPoint>(&p)) return *ap;
    throw std::domain_error("expected an analytic-backend soft point");
}

inline std::string format_label_value(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

inline std::string point_to_string(const SoftPoint& p, const Universe* universe,
                                   const ParamSet* params) {
    if (is_finite_point(p)) {
        const auto& fp = as_finite(p);
        std::string elem = universe ? universe->name(fp.element) : std::to_string(fp.element);
        std::string lab = params ? params->label(fp.label) : std::to_string(fp.label);
        return elem + "@" + lab;
    }
    const auto& ap = as_analytic(p);
    std::ostringstream os;
    os.precision(12);
    for (std::size_t i = 0; i < ap.coords.size(); ++i) {
        if (i) os << ",";
        os << ap.coords[i];
    }
    os << "@" << format_label_value(ap.label);
    return os.str();
}

} // namespace softfix
