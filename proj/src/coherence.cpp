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

#include "kerrlat/coherence.hpp"

#include <cmath>
#include <stdexcept>

namespace kerrlat {

void CoherenceBudget::validate() const {
    for (double d : {dt1, dt2, dt3, dt4, dt5a, dt5b}) {
        if (!(d >= 0.0)) {
            throw std::invalid_argument("coherence budget durations must be >= 0");
        }
    }
    if (!(t1_eff > 0.0) || !(tphi_eff > 0.0)) {
        throw std::invalid_argument("effective T1 and Tphi must be positive");
    }
    if (!(gamma_sum_5a > 0.0) || !(gamma_sum_5b > 0.0)) {
        throw std::invalid_argument("swap-stage decay rates must be positive");
    }
    if (n_terms < 10) {
        throw std::invalid_argument("n_terms must be >= 10");
    }
}

CoherenceBudget CoherenceBudget::from_rates(const TransferRates& rates) {
    CoherenceBudget b;
    b.gamma_sum_5a = rates.sum_5a();
    b.gamma_sum_5b = rates.sum_5b();
    b.n_env = rates.n_env;
    return b;
}

double decoherence_prep(int n, const CoherenceBudget& budget) {
    if (n < 0) {
        throw std::invalid_argument("n must be >= 0");
    }
    const double nd = n;
    return std::exp(-budget.prep_duration() * (nd / budget.t1_eff + nd * nd / budget.tphi_eff));
}

double decoherence_swap(int n, double dt, double t0n_coefficient) {
    if (n < 0) {
        throw std::invalid_argument("n must be >= 0");
    }
    if (!(t0n_coefficient > 0.0) || !(dt >= 0.0)) {
        throw std::invalid_argument("swap decoherence needs dt >= 0 and a positive time constant");
    }
    return std::exp(-dt * n / t0n_coefficient);
}

double coherence_fraction(cplx alpha, const CoherenceBudget& budget) {
    budget.validate();
    const double lambda = std::norm(alpha);
    if (!std::isfinite(lambda)) {
        throw std::invalid_argument("amplitude must be finite");
    }
    if (budget.n_terms < 10.0 * lambda) {
        throw std::invalid_argument("n_terms must be at least 10 |alpha|^2");
    }
    const double c5a = budget.t0n_coefficient_5a();
    const double c5b = budget.t0n_coefficient_5b();
    double total = 0.0;
    for (int n = 0; n <= budget.n_terms; ++n) {
        double weight;
        if (lambda == 0.0) {
            weight = n == 0 ? 1.0 : 0.0;
        } else {
            weight = std::exp(-lambda + n * std::log(lambda) - std::lgamma(n + 1.0));
        }
        if (weight == 0.0) {
            continue;
        }
        total += weight * decoherence_prep(n, budget) * decoherence_swap(n, budget.dt5a, c5a) *
                 decoherence_swap(n, budget.dt5b, c5b);
    }
    return total;
}

std::vector<CoherencePoint> coherence_sweep(double alpha_min, double alpha_max, int points,
                                            const CoherenceBudget& budget) {
    if (points < 2 || !(alpha_max > alpha_min) || alpha_min < 0.0) {
        throw std::invalid_argument("sweep needs points >= 2 and 0 <= alpha_min < alpha_max");
    }
    std::vector<CoherencePoint> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double a = alpha_min + (alpha_max - alpha_min) * k / (points - 1);
        out.push_back({a, coherence_fraction(cplx{a}, budget)});
    }
    return out;
}

}  // namespace kerrlat
