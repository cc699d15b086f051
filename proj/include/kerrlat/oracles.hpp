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

// Closed-form and brute-force references. Nothing here calls into the
// integrators or the state constructors, so agreement with them is a real check.

#include <array>
#include <vector>

#include "kerrlat/fock.hpp"

namespace kerrlat::oracles {

/// Single Kerr mode after accumulating theta = ∫chi dt from |alpha>:
/// amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!) e^{i theta n(n-1)/2}, renormalized
/// on the truncated space.
Vector kerr_evolution_exact(cplx alpha, double theta, int cutoff);

/// Coherent amplitudes of a two-mode product after hopping H = -kappa (c1^dag c2 + h.c.)
/// for kappa t = theta: (a1, a2) -> exp(+i theta sigma_x) (a1, a2).
std::array<cplx, 2> beamsplitter_exact(std::array<cplx, 2> alphas, double theta);

/// weight * |amplitudes[0]>|amplitudes[1]>...
struct CoherentBranch {
    cplx weight;
    std::vector<cplx> amplitudes;
};
using CoherentSuperposition = std::vector<CoherentBranch>;

/// Branch-by-branch beamsplitter on a two-mode superposition.
CoherentSuperposition beamsplitter_exact(const CoherentSuperposition& input, double theta);

/// Truncated state vector of a coherent superposition, normalized.
PureState to_state(const CoherentSuperposition& superposition, const LatticeSpec& lattice);

/// (e^{-i pi/4}|i alpha> + e^{i pi/4}|-i alpha>) |-alpha> / sqrt 2: the Kerr-pi
/// cat on mode one next to |-alpha> on mode two.
CoherentSuperposition cat_beamsplitter_input(cplx alpha);

/// Occupation tuples with total N over M sites, in lexicographic order.
std::vector<std::vector<int>> sector_basis(int sites, int total);

/// Dense H/hbar on the N-boson sector of an open chain.
Eigen::MatrixXd sector_hamiltonian(const std::vector<std::vector<int>>& basis, double chi, double kappa,
                                   bool periodic = false);

struct SectorGroundState {
    std::vector<std::vector<int>> basis;
    double energy = 0.0;
    /// Lowest eigenvector.
    Eigen::VectorXd amplitudes;
    /// Orthonormal columns spanning all eigenvectors within tolerance of the ground energy.
    Eigen::MatrixXd ground_space;
};

inline constexpr std::size_t kMaxSectorDimension = 50000;

/// Lowest eigenpair of the open-chain sector Hamiltonian at chi = 1, kappa = tau (N-1).
/// For N = 1 (no Kerr energy) the hopping-only Hamiltonian is used and tau is ignored.
SectorGroundState exact_ground_state(int sites, int total, double tau);

/// All N bosons in the uniform (k = 0) mode: amplitudes sqrt(N! / prod n_j!) M^{-N/2}.
Eigen::VectorXd superfluid_sector_state(const std::vector<std::vector<int>>& basis, int sites);

/// (1/sqrt M) sum_j |N>_j.
Eigen::VectorXd w_sector_state(const std::vector<std::vector<int>>& basis, int sites);

/// Place a sector vector into the full truncated space.
PureState embed_sector_state(const std::vector<std::vector<int>>& basis, const Eigen::VectorXd& amplitudes,
                             const LatticeSpec& lattice);

/// Squared norm of the projection of `v` onto the column span of `space`.
double projection_weight(const Eigen::MatrixXd& space, const Eigen::VectorXd& v);

}  // namespace kerrlat::oracles
