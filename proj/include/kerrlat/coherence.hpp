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

#include <numbers>
#include <vector>

#include "kerrlat/fock.hpp"

namespace kerrlat {

/// Assumed mechanical energy decay rate (1/s) used to split the printed
/// swap-stage time constants into per-mode rates.
inline constexpr double kDefaultGammaB = 2.0 * std::numbers::pi * 32.0;
inline constexpr double kDefaultNEnv = 50.0;
inline constexpr double kT0nCoefficient5a = 3.42e-6;
inline constexpr double kT0nCoefficient5b = 7.67e-6;

/// Average decay rates of the transfer chain (1/s) and the mechanical bath occupation.
///
/// gamma_a and gamma_c default to the values that reproduce
/// 2/(gamma_c + gamma_a) = 3.42 us and 2/(n_env gamma_b + gamma_a) = 7.67 us
/// given kDefaultGammaB.
struct TransferRates {
    double gamma_a = 2.0 / kT0nCoefficient5b - kDefaultNEnv * kDefaultGammaB;
    double gamma_b = kDefaultGammaB;
    double gamma_c = 2.0 / kT0nCoefficient5a - (2.0 / kT0nCoefficient5b - kDefaultNEnv * kDefaultGammaB);
    double n_env = kDefaultNEnv;

    /// gamma_c + gamma_a.
    double sum_5a() const { return gamma_c + gamma_a; }
    /// n_env gamma_b + gamma_a.
    double sum_5b() const { return n_env * gamma_b + gamma_a; }
};

struct CoherenceBudget {
    double dt1 = 0.02e-6;
    double dt2 = 0.002e-6;
    double dt3 = 0.02e-6;
    double dt4 = 0.002e-6;
    double dt5a = 0.01e-6;
    double dt5b = 0.16e-6;
    double t1_eff = 2e-6;
    double tphi_eff = 100e-6;
    /// Aggregated decay rate of each swap stage; T_0n = 2 / (n * gamma_sum).
    double gamma_sum_5a = 2.0 / kT0nCoefficient5a;
    double gamma_sum_5b = 2.0 / kT0nCoefficient5b;
    double n_env = kDefaultNEnv;
    int n_terms = 1000;

    void validate() const;
    /// Budget with the swap-stage aggregates recomputed from device rates.
    static CoherenceBudget from_rates(const TransferRates& rates);
    /// n * T_0n for the two swap stages, in seconds.
    double t0n_coefficient_5a() const { return 2.0 / gamma_sum_5a; }
    double t0n_coefficient_5b() const { return 2.0 / gamma_sum_5b; }
    double prep_duration() const { return dt1 + dt2 + dt3 + dt4; }
};

/// exp(-(dt1+dt2+dt3+dt4) (n/T1 + n^2/Tphi)).
double decoherence_prep(int n, const CoherenceBudget& budget);

/// exp(-dt n / coefficient), coefficient = n * T_0n in seconds.
double decoherence_swap(int n, double dt, double t0n_coefficient);

/// sum_n |<n|alpha>|^2 D_1234(n) D_5a(n) D_5b(n) for n = 0..n_terms.
double coherence_fraction(cplx alpha, const CoherenceBudget& budget);

struct CoherencePoint {
    double alpha_abs;
    double fraction;
};

/// Fraction on a uniform grid of |alpha| (real, non-negative amplitudes).
std::vector<CoherencePoint> coherence_sweep(double alpha_min, double alpha_max, int points,
                                            const CoherenceBudget& budget);

}  // namespace kerrlat
