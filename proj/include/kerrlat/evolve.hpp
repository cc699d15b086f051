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
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrlat/fock.hpp"
#include "kerrlat/model.hpp"

namespace kerrlat {

/// Raised when an integration leaves its numerical validity envelope
/// (trace drift, non-finite values).
class NumericalAbort : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// T1 and Tphi vary linearly in chi between their chi=0 and chi=chi_max values.
/// Interpolation is on the time constants, not on the rates.
struct DampingModel {
    double t1_at_zero = 3e-6;
    double t1_at_max = 1.5e-6;
    double tphi_at_zero = 1.0;
    double tphi_at_max = 100e-6;
    double chi_max = angular_from_mhz(40.0);

    void validate() const;
    /// Every time constant multiplied by `factor`.
    DampingModel scaled(double factor) const;
};

struct DampingTimes {
    double t1;
    double tphi;
};

DampingTimes damping_at(double chi, const DampingModel& model);

/// Per-site dissipation rates (1/s).
struct SiteRates {
    double amplitude = 0.0;  // 1/T1
    double dephasing = 0.0;  // 1/Tphi
};

/// drho/dt = -i[H, rho] + sum_j (1/T1_j) D[c_j]rho + sum_j (1/Tphi_j) G[c_j]rho
/// with H given as H/hbar in rad/s.
Matrix lindblad_rhs(const DensityMatrix& rho, const SparseOperator& hamiltonian, const LatticeOperators& ops,
                    std::span<const SiteRates> rates);

/// Fused Lindblad kernel over a Hamiltonian split as diag(h) + sum_l coef_l * O_l
/// with O_l strictly off-diagonal.
class LindbladKernel {
  public:
    struct OffDiagonalTerm {
        const SparseOperator::Storage* op;
        const SparseOperator::Storage* op_transpose;
        cplx coefficient;
    };

    explicit LindbladKernel(const LatticeOperators& ops);

    void apply(const RealVector& h_diag, std::span<const OffDiagonalTerm> off, std::span<const SiteRates> rates,
               const Matrix& rho, Matrix& out) const;
    void apply_pure(const RealVector& h_diag, std::span<const OffDiagonalTerm> off, const Vector& psi,
                    Vector& out) const;

  private:
    const LatticeOperators& ops_;
};

struct EvolveOptions {
    double dt = 1e-11;
    /// Defaults to the parameter domain when NaN.
    double t_start = std::numeric_limits<double>::quiet_NaN();
    double t_end = std::numeric_limits<double>::quiet_NaN();
    double checkpoint_interval = 5e-11;
    /// Evaluate damping rates once per step instead of at every RK4 stage.
    bool freeze_rates_per_step = false;
    /// |tr rho - 1| beyond this aborts the run.
    double trace_abort = 1e-6;
};

struct CheckpointRecord {
    double t = 0.0;
    double fidelity = std::numeric_limits<double>::quiet_NaN();
    double fidelity_sq = std::numeric_limits<double>::quiet_NaN();
    cplx correlator{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    double trace_re = 1.0;
    double purity = 1.0;
    double chi = 0.0;
    std::optional<Matrix> snapshot;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CheckpointRecord> records;
};

using DensityObserver = std::function<void(double t, const DensityMatrix& rho, CheckpointRecord& record)>;
using PureObserver = std::function<void(double t, const PureState& psi, CheckpointRecord& record)>;

struct DensityEvolution {
    Trajectory trajectory;
    DensityMatrix final_state;
};

struct PureEvolution {
    Trajectory trajectory;
    PureState final_state;
};

/// Classic RK4 on the master equation. H(t) and the damping rates (through
/// chi(t)) are evaluated at the sub-stage times. Without a damping model the
/// dissipators are switched off. rho is re-Hermitized after every step.
DensityEvolution evolve_density(const DensityMatrix& rho0, const AbhParams& params,
                                const std::optional<DampingModel>& damping, const EvolveOptions& options,
                                const DensityObserver& observer = {});

/// RK4 on d psi/dt = -i H(t) psi with renormalization after each step.
PureEvolution evolve_pure(const PureState& psi0, const AbhParams& params, const EvolveOptions& options,
                          const PureObserver& observer = {});

}  // namespace kerrlat
