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

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kerrlat/evolve.hpp"
#include "kerrlat/model.hpp"
#include "kerrlat/states.hpp"

namespace kerrlat {

/// Normalized step-three profile s(u), u in [0, 1]: chi(t) = chi_max s(t / T_s3).
enum class RampShape { Linear, Constant, Cosine };

std::string to_string(RampShape shape);
RampShape ramp_shape_from_string(const std::string& name);
double ramp_profile(RampShape shape, double u);

/// Durations in seconds, rates in rad/s. Time zero is the start of step one.
struct ProtocolPlan {
    double ramp_up = 10e-9;               // step 1: chi 0 -> chi_max at kappa_max
    double decouple_inter_block = 2e-9;   // step 2: inter-block kappa -> 0
    double hold = 0.0;                    // chi held at chi_max
    double ramp_down = 35e-9;             // step 3: chi chi_max -> 0
    double decouple_intra_block = 2e-9;   // step 4: intra-block kappa -> kappa_floor
    RampShape ramp_down_shape = RampShape::Linear;
    double chi_max = angular_from_mhz(40.0);
    double kappa_max = angular_from_mhz(40.0);
    double kappa_floor = angular_from_mhz(0.1);
    BlockPartition blocks;
    ReferenceKind target = ReferenceKind::W_ECS;
    /// Phase of the fidelity reference amplitude, alpha_ref = |alpha| e^{i phase}.
    double reference_phase = 0.0;

    void validate(const LatticeSpec& lattice) const;

    double end_of_step1() const { return ramp_up; }
    double end_of_step2() const { return end_of_step1() + decouple_inter_block; }
    double end_of_hold() const { return end_of_step2() + hold; }
    double end_of_step3() const { return end_of_hold() + ramp_down; }
    double end_of_step4() const { return end_of_step3() + decouple_intra_block; }
    double duration() const { return end_of_step4(); }
};

/// Reference timings for W_ECS (T_s3 = 35 ns) and W_ESCS (T_s3 = 10.6 ns).
ProtocolPlan default_plan(ReferenceKind target, const LatticeSpec& lattice, const BlockPartition& blocks);

/// Links crossing a block boundary.
std::vector<bool> inter_block_links(const LatticeSpec& lattice, const BlockPartition& blocks);

/// chi(t) and per-link kappa(t) for the plan.
AbhParams build_protocol_params(const ProtocolPlan& plan, const LatticeSpec& lattice,
                                std::vector<double> site_offsets = {});

/// T_s3 such that ∫_0^{T_s3} chi = chi_max t_star for the given profile.
double solve_ramp_down(double t_star, double chi_max, RampShape shape);
/// General non-increasing profile with s(0) = 1, solved by bisection.
double solve_ramp_down(double t_star, double chi_max, const std::function<double(double)>& profile);

struct PlanCheck {
    std::string name;
    bool pass;
    double value;
    double limit;
    std::string detail;
};

struct PlanReport {
    std::vector<PlanCheck> checks;
    bool all_pass() const;
};

inline constexpr double kDefaultCavityFrequency = angular_from_ghz(7.5);

/// Adiabatic ramp bound, disorder bound, nonlinearity constraint, amplitude/cutoff margin.
PlanReport check_plan(const ProtocolPlan& plan, const LatticeSpec& lattice, const std::vector<double>& site_offsets,
                      double alpha_sq = 10.0, double omega_c0 = kDefaultCavityFrequency);

struct RunOptions {
    EvolveOptions evolve;
    DampingModel damping;
    /// Extra per-checkpoint hooks (e.g. positivity checks), called after the
    /// built-in analysis.
    DensityObserver density_hook;
    PureObserver pure_hook;
    /// Override the reference state used for fidelity.
    std::optional<PureState> reference;
};

struct ProtocolRun {
    ProtocolPlan plan;
    AbhParams params;
    Trajectory trajectory;
    std::variant<PureState, DensityMatrix> final_state;
    /// Reduced density matrix of site 0 at the final time.
    DensityMatrix final_site0;
    PureState reference;
    std::vector<std::string> warnings;

    DensityMatrix final_density() const;
};

/// Prepare the k = 0 normal-mode coherent state and integrate the plan.
/// Density-matrix Lindblad evolution when `damped`, Schrodinger otherwise.
ProtocolRun run_protocol(const ProtocolPlan& plan, const LatticeSpec& lattice, cplx alpha, bool damped,
                         const RunOptions& options = {}, std::vector<double> site_offsets = {});

}  // namespace kerrlat
