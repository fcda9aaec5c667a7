#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "softfix/param_set.hpp"

namespace softfix {

/// Soft real number: one finite value per parameter label. Immutable.
class SoftReal {
public:
    SoftReal(ParamSetPtr params, std::vector<double> entries)
        : params_(std::move(params)), entries_(std::move(entries)) {
        if (!params_) throw std::invalid_argument("SoftReal: null parameter set");
        if (entries_.size() != params_->size())
            throw std::invalid_argument("SoftReal: entry count does not match parameter set");
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (!std::isfinite(entries_[i]))
                throw std::domain_error("SoftReal: non-finite entry at label '" + params_->label(i) + "'");
    }

    static SoftReal constant(ParamSetPtr params, double v) {
        std::size_t n = params->size();
        return SoftReal(std::move(params), std::vector<double>(n, v));
    }

    static SoftReal zeros(ParamSetPtr params) { return constant(std::move(params), 0.0); }
    static SoftReal ones(ParamSetPtr params) { return constant(std::move(params), 1.0); }

    const ParamSetPtr& params() const { return params_; }
    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_.at(i); }
    const std::vector<double>& entries() const { return entries_; }

    double sup() const { return *std::max_element(entries_.begin(), entries_.end()); }
    double inf() const { return *std::min_element(entries_.begin(), entries_.end()); }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == 0.0; });
    }

    bool nonnegative() const {
        return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v >= 0.0; });
    }

    std::string to_string() const {
        std::ostringstream os;
        os.precision(12);
        os << "(";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) os << ", ";
            os << params_->label(i) << ": " << entries_[i];
        }
        os << ")";
        return os.str();
    }

    friend bool operator==(const SoftReal& a, const SoftReal& b) {
        return same_params(a.params_, b.params_) && a.entries_ == b.entries_;
    }

private:
    ParamSetPtr params_;
    std::vector<double> entries_;
};

/// Pointwise order verdict between two soft reals (Def 2.9 reading: every
/// comparison is quantified over all components; vectors may be incomparable).
struct OrderVerdict {
    bool le = false;
    bool ge = false;
    bool lt = false;
    bool gt = false;
    bool eq = false;
    bool incomparable = false;
};

namespace detail {

inline void require_same_params(const SoftReal& a, const SoftReal& b, const char* op) {
    if (!same_params(a.params(), b.params()))
        throw std::domain_error(std::string(op) + ": operands over different parameter sets");
}

} // namespace detail

/// Compare componentwise. `margin` tightens only the strict verdicts:
/// lt means r(e) < s(e) - margin in every component.
inline OrderVerdict compare(const SoftReal& r, const SoftReal& s, double margin = 0.0) {
    detail::require_same_params(r, s, "compare");
    if (margin < 0.0) throw std::invalid_argument("compare: margin must be >= 0");
    OrderVerdict v;
    v.le = v.ge = v.lt = v.gt = v.eq = true;
    for (std::size_t i = 0; i < r.size(); ++i) {
        double a = r[i], b = s[i];
        if (!(a <= b)) v.le = false;
        if (!(a >= b)) v.ge = false;
        if (!(a < b - margin)) v.lt = false;
        if (!(a > b + margin)) v.gt = false;
        if (a != b) v.eq = false;
    }
    v.incomparable = !v.le && !v.ge;
    return v;
}

inline SoftReal operator+(const SoftReal& r, const SoftReal& s) {
    detail::require_same_params(r, s, "add");
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] + s[i];
    return SoftReal(r.params(), std::move(out));
}

inline SoftReal operator-(const SoftReal& r, const SoftReal& s) {
    detail::require_same_params(r, s, "sub");
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] - s[i];
    return SoftReal(r.params(), std::move(out));
}

inline SoftReal operator*(const SoftReal& r, const SoftReal& s) {
    detail::require_same_params(r, s, "mul");
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] * s[i];
    return SoftReal(r.params(), std::move(out));
}

inline SoftReal operator*(double c, const SoftReal& r) {
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = c * r[i];
    return SoftReal(r.params(), std::move(out));
}

inline SoftReal operator*(const SoftReal& r, double c) { return c * r; }

inline SoftReal divide(const SoftReal& r, const SoftReal& s) {
    detail::require_same_params(r, s, "div");
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (s[i] == 0.0)
            throw std::domain_error("div: division by zero at label '" + r.params()->label(i) + "'");
        out[i] = r[i] / s[i];
    }
    return SoftReal(r.params(), std::move(out));
}

/// Componentwise tail majorant alpha^m / (1 - alpha) * base of the geometric
/// series alpha^m + alpha^(m+1) + ... scaled by base. Requires every alpha
/// component in [0, 1) and base >= 0.
inline SoftReal geometric_tail_bound(const SoftReal& alpha, std::size_t m, const SoftReal& base) {
    detail::require_same_params(alpha, base, "geometric_tail_bound");
    if (!base.nonnegative())
        throw std::domain_error("geometric_tail_bound: base must be nonnegative");
    std::vector<double> out(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        double a = alpha[i];
        if (a < 0.0 || a >= 1.0)
            throw std::domain_error("geometric_tail_bound: rate component at label '" +
                                    alpha.params()->label(i) + "' is outside [0, 1)");
        out[i] = std::pow(a, static_cast<double>(m)) / (1.0 - a) * base[i];
    }
    return SoftReal(alpha.params(), std::move(out));
}

} // namespace softfix
