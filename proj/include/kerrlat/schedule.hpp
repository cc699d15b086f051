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

#pragma once

#include <utility>
#include <vector>

namespace kerrlat {

/// Continuous piecewise-linear function of time, defined on [first knot, last knot].
class PiecewiseLinear {
  public:
    struct Knot {
        double t;
        double value;
    };

    PiecewiseLinear() = default;
    /// Knot times must be non-decreasing. Equal neighbouring times are
    /// accepted only when they carry the same value (keeps the function continuous).
    explicit PiecewiseLinear(std::vector<Knot> knots);

    static PiecewiseLinear constant(double value, double t0, double t1);

    double operator()(double t) const;
    double t_begin() const { return knots_.front().t; }
    double t_end() const { return knots_.back().t; }
    bool contains(double t) const;
    double min_value() const;
    double max_value() const;
    /// Exact integral over [a, b] (both inside the domain).
    double integral(double a, double b) const;

    const std::vector<Knot>& knots() const { return knots_; }

    /// Append a linear segment ending at (t, value), starting from the last knot.
    void extend_to(double t, double value);

  private:
    std::vector<Knot> knots_;
};

}  // namespace kerrlat
