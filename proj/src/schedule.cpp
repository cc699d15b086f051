// Copyright 2026 The kerrlat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kerrlat/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kerrlat {

namespace {

// Relative slack on the domain ends, so that t computed as t0 + k*dt still
// lands inside after rounding.
constexpr double kDomainSlack = 1e-9;

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) {
        throw std::invalid_argument("schedule needs at least one knot");
    }
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (knots_[i].t < knots_[i - 1].t) {
            throw std::invalid_argument("schedule knot times must be non-decreasing");
        }
        if (knots_[i].t == knots_[i - 1].t && knots_[i].value != knots_[i - 1].value) {
            throw std::invalid_argument("schedule would be discontinuous at t=" + std::to_string(knots_[i].t));
        }
    }
}

PiecewiseLinear PiecewiseLinear::constant(double value, double t0, double t1) {
    return PiecewiseLinear({{t0, value}, {t1, value}});
}

bool PiecewiseLinear::contains(double t) const {
    const double span = std::max(t_end() - t_begin(), 1e-30);
    return t >= t_begin() - kDomainSlack * span && t <= t_end() + kDomainSlack * span;
}

double PiecewiseLinear::operator()(double t) const {
    if (!contains(t)) {
        throw std::out_of_range("schedule evaluated at t=" + std::to_string(t) + " outside [" +
                                std::to_string(t_begin()) + ", " + std::to_string(t_end()) + "]");
    }
    if (t <= knots_.front().t) {
        return knots_.front().value;
    }
    if (t >= knots_.back().t) {
        return knots_.back().value;
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](double x, const Knot& k) { return x < k.t; });
    const Knot& hi = *it;
    const Knot& lo = *(it - 1);
    if (hi.t == lo.t) {
        return hi.value;
    }
    const double f = (t - lo.t) / (hi.t - lo.t);
    return lo.value + f * (hi.value - lo.value);
}

double PiecewiseLinear::min_value() const {
    return std::min_element(knots_.begin(), knots_.end(), [](auto& a, auto& b) { return a.value < b.value; })->value;
}

double PiecewiseLinear::max_value() const {
    return std::max_element(knots_.begin(), knots_.end(), [](auto& a, auto& b) { return a.value < b.value; })->value;
}

double PiecewiseLinear::integral(double a, double b) const {
    if (b < a) {
        return -integral(b, a);
    }
    double total = 0.0;
    // Trapezoid rule is exact on each linear piece; collect breakpoints.
    std::vector<double> pts{a};
    for (const auto& k : knots_) {
        if (k.t > a && k.t < b) {
            pts.push_back(k.t);
        }
    }
    pts.push_back(b);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        total += 0.5 * (pts[i] - pts[i - 1]) * ((*this)(pts[i - 1]) + (*this)(pts[i]));
    }
    return total;
}

void PiecewiseLinear::extend_to(double t, double value) {
    if (knots_.empty()) {
        knots_.push_back({t, value});
        return;
    }
    if (t < knots_.back().t) {
        throw std::invalid_argument("schedule extension must move forward in time");
    }
    if (t == knots_.back().t) {
        if (value != knots_.back().value) {
            throw std::invalid_argument("zero-length schedule segment with a jump");
        }
        return;
    }
    knots_.push_back({t, value});
}

}  // namespace kerrlat
