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

#include <vector>

#include "kerrlat/fock.hpp"

namespace kerrlat {

/// |<reference|state>|.
double fidelity(const PureState& state, const PureState& reference);
/// sqrt(<reference|rho|reference>).
double fidelity(const DensityMatrix& rho, const PureState& reference);

struct SuperfidelityBounds {
    double lower;
    double upper;
};

/// Bounds on the squared Uhlmann fidelity F = (tr|sqrt(rho) sqrt(sigma)|)^2:
///   upper = tr(rho sigma) + sqrt((1 - tr rho^2)(1 - tr sigma^2))
///   lower = tr(rho sigma) + sqrt(2) sqrt((tr rho sigma)^2 - tr(rho sigma rho sigma))
/// Negative square-root arguments from rounding are clamped to zero.
SuperfidelityBounds superfidelity_bounds(const DensityMatrix& rho, const DensityMatrix& sigma);

inline constexpr std::size_t kMaxUhlmannDimension = 64;

/// Exact squared Uhlmann fidelity by eigendecomposition. Small inputs only.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// <c_i^dag c_j>.
cplx single_particle_correlator(const PureState& psi, const LatticeSpec& lattice, int i, int j);
cplx single_particle_correlator(const DensityMatrix& rho, const LatticeSpec& lattice, int i, int j);

/// <c^dag c^dag c c> - <c^dag c>^2 at `site`.
double number_fluctuations(const PureState& psi, const LatticeSpec& lattice, int site);
double number_fluctuations(const DensityMatrix& rho, const LatticeSpec& lattice, int site);

/// Mean occupation of `site`.
double mean_occupation(const DensityMatrix& rho, const LatticeSpec& lattice, int site);

/// Var(X_theta), X_theta = (c e^{-i theta} + c^dag e^{i theta}) / sqrt 2, on a
/// single-mode density matrix. Moments use the untruncated identity
/// c c^dag = c^dag c + 1, so vacuum and coherent states give exactly 1/2.
double quadrature_variance(const DensityMatrix& rho, double theta);

struct QuadratureMinimum {
    double variance;
    double theta;
};

/// Closed-form minimum of quadrature_variance over theta.
QuadratureMinimum min_quadrature_variance(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);
cplx trace(const DensityMatrix& rho);

/// Single-site state conditioned on every other site being empty:
/// (<0..|_rest rho |0..>_rest) / p, together with the probability p.
struct ConditionalState {
    DensityMatrix state;
    double probability;
};
ConditionalState vacuum_conditioned_site_state(const DensityMatrix& rho, const LatticeSpec& lattice, int site);

struct WignerSpec {
    double x_min = -6.0;
    double x_max = 6.0;
    double p_min = -6.0;
    double p_max = 6.0;
    int nx = 121;
    int np = 121;

    void validate() const;
};

struct WignerGrid {
    WignerSpec spec;
    std::vector<double> xs;
    std::vector<double> ps;
    /// values(ix, ip).
    Eigen::MatrixXd values;
    /// Riemann sum of W dx dp over the grid.
    double integral = 0.0;
    /// False when the grid holds less than 95% of the state's mass.
    bool contained = true;
};

/// W(x, p) = (1/pi) tr[rho D(beta) Pi D(beta)^dag], beta = (x + i p)/sqrt 2,
/// normalized so that the vacuum peaks at 1/pi and the full-plane integral is 1.
/// Evaluated with the Laguerre recursion on the density matrix elements.
WignerGrid wigner(const DensityMatrix& rho, const WignerSpec& spec = {});

/// Wigner value at a single point.
double wigner_point(const DensityMatrix& rho, double x, double p);

/// Indices and parabolically refined positions of strict local maxima in
/// `values` sampled at `times` (non-uniform spacing allowed). Peaks below
/// `min_height` are skipped.
struct Peak {
    std::size_t index;
    double t;
    double value;
};
std::vector<Peak> find_peaks(const std::vector<double>& times, const std::vector<double>& values,
                             double min_height = -1e300);

}  // namespace kerrlat
