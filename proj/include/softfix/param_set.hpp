#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace softfix {

/// Finite, ordered set of parameter labels. Labels may all carry a numeric
/// value (required by analytic metrics and numeric parameter maps) or none
/// may; a partial assignment is rejected.
class ParamSet {
public:
    explicit ParamSet(std::vector<std::string> labels)
        : labels_(std::move(labels)) {
        validate();
    }

    ParamSet(std::vector<std::string> labels, std::vector<double> values)
        : labels_(std::move(labels)), values_(std::move(values)) {
        if (!values_.empty() && values_.size() != labels_.size())
            throw std::invalid_argument("ParamSet: either every label carries a value or none does");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("ParamSet: label values must be finite");
        validate();
    }

    /// Labels named by their numeric values ("0", "1", ...).
    static ParamSet numeric(std::vector<double> values) {
        std::vector<std::string> labels;
        labels.reserve(values.size());
        for (double v : values) {
            double r = std::round(v);
            if (r == v && std::abs(v) < 1e15)
                labels.push_back(std::to_string(static_cast<long long>(r)));
            else
                labels.push_back(std::to_string(v));
        }
        return ParamSet(std::move(labels), std::move(values));
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    bool has_values() const { return !values_.empty(); }
    const std::vector<double>& values() const { return values_; }

    double value(std::size_t i) const {
        if (!has_values())
            throw std::domain_error("ParamSet: labels carry no numeric values");
        return values_.at(i);
    }

    std::optional<std::size_t> index_of(std::string_view label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return i;
        return std::nullopt;
    }

    std::size_t require_index(std::string_view label) const {
        auto i = index_of(label);
        if (!i) throw std::domain_error("unknown parameter label '" + std::string(label) + "'");
        return *i;
    }

    friend bool operator==(const ParamSet& a, const ParamSet& b) {
        return a.labels_ == b.labels_ && a.values_ == b.values_;
    }

private:
    void validate() const {
        if (labels_.empty())
            throw std::invalid_argument("ParamSet: parameter set must be non-empty");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                if (labels_[i] == labels_[j])
                    throw std::invalid_argument("ParamSet: duplicate label '" + labels_[i] + "'");
    }

    std::vector<std::string> labels_;
    std::vector<double> values_;
};

using ParamSetPtr = std::shared_ptr<const ParamSet>;

inline ParamSetPtr make_params(std::vector<std::string> labels) {
    return std::make_shared<const ParamSet>(std::move(labels));
}

inline ParamSetPtr make_params(std::vector<std::string> labels, std::vector<double> values) {
    return std::make_shared<const ParamSet>(std::move(labels), std::move(values));
}

inline ParamSetPtr make_numeric_params(std::vector<double> values) {
    return std::make_shared<const ParamSet>(ParamSet::numeric(std::move(values)));
}

inline bool same_params(const ParamSetPtr& a, const ParamSetPtr& b) {
    return a == b || (a && b && *a == *b);
}

} // namespace softfix
