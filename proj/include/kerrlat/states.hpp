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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kerrlat/fock.hpp"

namespace kerrlat {

/// Largest |alpha|^2 / cutoff accepted by the coherent-state constructors.
inline constexpr double kMaxFillFraction = 0.6;

/// Coherent-state amplitude validated against a target Fock cutoff.
class CoherentAmplitude {
  public:
    CoherentAmplitude(cplx alpha, int cutoff);
    cplx value() const { return alpha_; }
    double mean_occupation() const { return std::norm(alpha_); }

  private:
    cplx alpha_;
};

enum class ReferenceKind { W_ECS, W_ESCS, GHZ_ECS, W_STATE };

std::string to_string(ReferenceKind kind);
ReferenceKind reference_kind_from_string(std::string_view name);

/// Contiguous partition of the chain into blocks, given as block sizes.
using BlockPartition = std::vector<int>;

/// One block per site.
BlockPartition single_site_blocks(int sites);
void validate_partition(const BlockPartition& blocks, const LatticeSpec& lattice);

/// Truncated |alpha>, renormalized.
Vector coherent_state(cplx alpha, int cutoff);

/// (e^{-i pi/4}|i alpha> + e^{i pi/4}|-i alpha>), normalized with the exact
/// branch overlap.
Vector kerr_cat_reference(cplx alpha, int cutoff);

/// e^{-|alpha|^2/2} sum_n e^{i phases[n]} alpha^n / sqrt(n!) |n>, renormalized.
Vector generalized_coherent(cplx alpha, const std::vector<double>& phases, int cutoff);

/// Kerr phases phi_n = theta * n(n-1)/2 for accumulated theta = ∫chi dt.
std::vector<double> kerr_phases(double theta, int cutoff);

/// Entangled-coherent reference states over `blocks`.
///
/// W_ECS   : sum over blocks l of |alpha>_l with vacuum elsewhere, where
///           |alpha>_l places |alpha/sqrt(size_l)> on each site of block l.
/// W_ESCS  : same, each branch carrying the Kerr cat instead of |alpha>.
/// GHZ_ECS : e^{-i pi/4} prod_j |i alpha/sqrt M> + e^{i pi/4} prod_j |-i alpha/sqrt M>;
///           requires a single block spanning the lattice.
/// W_STATE : (1/sqrt M) sum_j |N>_j, with N = `fock_number`.
PureState ecs_reference(ReferenceKind kind, cplx alpha, const LatticeSpec& lattice,
                        const BlockPartition& blocks, int fock_number = 0);

/// Product |alpha/sqrt M> on every site: a coherent state of the k=0 normal mode.
PureState normal_mode_coherent(cplx alpha, const LatticeSpec& lattice);

}  // namespace kerrlat
