#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "softfix/param_set.hpp"
#include "softfix/point.hpp"

namespace softfix {

/// Soft set over a finite universe: one subset of the universe per parameter
/// label, stored as bitmaps. Every label of the parameter set has a (possibly
/// empty) section. Immutable operations, value semantics.
class SoftSet {
public:
    SoftSet(ParamSetPtr params, UniversePtr universe)
        : params_(std::move(params)), universe_(std::move(universe)),
          sections_(params_->size(), std::vector<bool>(universe_->size(), false)) {}

    static SoftSet null_set(ParamSetPtr params, UniversePtr universe) {
        return SoftSet(std::move(params), std::move(universe));
    }

    static SoftSet absolute(ParamSetPtr params, UniversePtr universe) {
        SoftSet s(std::move(params), std::move(universe));
        for (auto& sec : s.sections_) sec.assign(sec.size(), true);
        return s;
    }

    const ParamSetPtr& params() const { return params_; }
    const UniversePtr& universe() const { return universe_; }

    bool contains(const FinitePoint& p) const {
        check_point(p);
        return sections_[p.label][p.element];
    }

    bool contains(const SoftPoint& p) const { return contains(as_finite(p)); }

    SoftSet& add(const FinitePoint& p) {
        check_point(p);
        sections_[p.label][p.element] = true;
        return *this;
    }

    SoftSet& add(std::size_t element, std::size_t label) { return add(FinitePoint{element, label}); }

    bool is_null() const {
        for (const auto& sec : sections_)
            for (bool b : sec)
                if (b) return false;
        return true;
    }

    bool is_absolute() const {
        for (const auto& sec : sections_)
            for (bool b : sec)
                if (!b) return false;
        return true;
    }

    std::size_t cardinality() const {
        std::size_t n = 0;
        for (const auto& sec : sections_)
            for (bool b : sec) n += b ? 1 : 0;
        return n;
    }

    /// Section at a label, as element indices.
    std::vector<std::size_t> section(std::size_t label) const {
        std::vector<std::size_t> out;
        for (std::size_t e = 0; e < universe_->size(); ++e)
            if (sections_.at(label)[e]) out.push_back(e);
        return out;
    }

    friend bool operator==(const SoftSet& a, const SoftSet& b) {
        return same_params(a.params_, b.params_) && same_universe(a.universe_, b.universe_) &&
               a.sections_ == b.sections_;
    }

    friend SoftSet union_of(const SoftSet& a, const SoftSet& b) {
        a.check_compatible(b, "union");
        SoftSet out = a;
        for (std::size_t l = 0; l < out.sections_.size(); ++l)
            for (std::size_t e = 0; e < out.sections_[l].size(); ++e)
                out.sections_[l][e] = out.sections_[l][e] || b.sections_[l][e];
        return out;
    }

    friend SoftSet intersect_of(const SoftSet& a, const SoftSet& b) {
        a.check_compatible(b, "intersect");
        SoftSet out = a;
        for (std::size_t l = 0; l < out.sections_.size(); ++l)
            for (std::size_t e = 0; e < out.sections_[l].size(); ++e)
                out.sections_[l][e] = out.sections_[l][e] && b.sections_[l][e];
        return out;
    }

    friend SoftSet difference_of(const SoftSet& a, const SoftSet& b) {
        a.check_compatible(b, "diff");
        SoftSet out = a;
        for (std::size_t l = 0; l < out.sections_.size(); ++l)
            for (std::size_t e = 0; e < out.sections_[l].size(); ++e)
                out.sections_[l][e] = out.sections_[l][e] && !b.sections_[l][e];
        return out;
    }

    friend SoftSet complement_of(const SoftSet& a) {
        SoftSet out = a;
        for (auto& sec : out.sections_)
            for (std::size_t e = 0; e < sec.size(); ++e) sec[e] = !sec[e];
        return out;
    }

    friend bool subset_of(const SoftSet& a, const SoftSet& b) {
        a.check_compatible(b, "subset");
        for (std::size_t l = 0; l < a.sections_.size(); ++l)
            for (std::size_t e = 0; e < a.sections_[l].size(); ++e)
                if (a.sections_[l][e] && !b.sections_[l][e]) return false;
        return true;
    }

    std::string to_string() const {
        std::string out = "{";
        for (std::size_t l = 0; l < sections_.size(); ++l) {
            if (l) out += "; ";
            out += params_->label(l) + ":{";
            bool first = true;
            for (std::size_t e = 0; e < sections_[l].size(); ++e) {
                if (!sections_[l][e]) continue;
                if (!first) out += ",";
                out += universe_->name(e);
                first = false;
            }
            out += "}";
        }
        return out + "}";
    }

private:
    void check_point(const FinitePoint& p) const {
        if (p.label >= params_->size() || p.element >= universe_->size())
            throw std::domain_error("SoftSet: soft point outside this universe/parameter set");
    }

    void check_compatible(const SoftSet& b, const char* op) const {
        if (!same_params(params_, b.params_) || !same_universe(universe_, b.universe_))
            throw std::domain_error(std::string("SoftSet ") + op +
                                    ": operands over different universe or parameter set");
    }

    ParamSetPtr params_;
    UniversePtr universe_;
    std::vector<std::vector<bool>> sections_;
};

/// Prop 2.12 decomposition: the soft points of s, label-major then element
/// order. Union of the singletons reproduces s.
inline std::vector<FinitePoint> decompose(const SoftSet& s) {
    std::vector<FinitePoint> out;
    for (std::size_t l = 0; l < s.params()->size(); ++l)
        for (std::size_t e : s.section(l)) out.push_back(FinitePoint{e, l});
    return out;
}

inline SoftSet from_points(ParamSetPtr params, UniversePtr universe,
                           const std::vector<FinitePoint>& points) {
    SoftSet s(std::move(params), std::move(universe));
    for (const auto& p : points) s.add(p);
    return s;
}

} // namespace softfix
