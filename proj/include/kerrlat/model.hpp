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
#include "kerrlat/schedule.hpp"

namespace kerrlat {

// User-facing frequencies are cyclic (MHz, GHz); everything inside the
// library is angular (rad/s).
inline constexpr double angular_from_mhz(double f_mhz) { return 2.0 * std::numbers::pi * f_mhz * 1e6; }
inline constexpr double angular_from_ghz(double f_ghz) { return 2.0 * std::numbers::pi * f_ghz * 1e9; }
inline constexpr double mhz_from_angular(double w) { return w / (2.0 * std::numbers::pi * 1e6); }

/// Time-dependent parameters of the attractive Bose-Hubbard chain
///   H/hbar = sum_j [eps_j n_j - chi(t)/2 n_j(n_j-1)] - sum_links kappa_l(t) (c_i^dag c_j + h.c.)
struct AbhParams {
    LatticeSpec lattice;
    PiecewiseLinear chi;                 // rad/s
    std::vector<PiecewiseLinear> kappa;  // rad/s, one per entry of lattice.links()
    std::vector<double> site_offsets;    // rad/s; empty means all zero

    void validate() const;
    double t_begin() const;
    double t_end() const;
    double offset(int site) const;
};

/// Time-independent operator pieces of the chain Hamiltonian, built once.
class LatticeOperators {
  public:
    explicit LatticeOperators(const LatticeSpec& lattice);

    const LatticeSpec& lattice() const { return lattice_; }
    std::size_t dimension() const { return lattice_.dimension(); }
    const std::vector<std::pair<int, int>>& links() const { return links_; }

    const SparseOperator& lowering(int site) const { return lowering_.at(static_cast<std::size_t>(site)); }
    const RealVector& number(int site) const { return number_.at(static_cast<std::size_t>(site)); }
    /// sum_j -n_j(n_j-1)/2 on the diagonal.
    const RealVector& kerr_diagonal() const { return kerr_; }
    const RealVector& total_number() const { return total_; }
    /// c_i^dag c_j + c_i c_j^dag for link l (real symmetric).
    const SparseOperator& hopping(std::size_t link) const { return hopping_.at(link); }

    /// Diagonal of H/hbar for the given Kerr strength and site offsets.
    RealVector diagonal(double chi, const std::vector<double>& site_offsets) const;

  private:
    LatticeSpec lattice_;
    std::vector<std::pair<int, int>> links_;
    std::vector<SparseOperator> lowering_;
    std::vector<RealVector> number_;
    std::vector<SparseOperator> hopping_;
    RealVector kerr_;
    RealVector total_;
};

/// H(t)/hbar as a sparse operator (rad/s).
SparseOperator build_hamiltonian(const AbhParams& params, double t);
SparseOperator build_hamiltonian(const AbhParams& params, const LatticeOperators& ops, double t);

/// tau = kappa / (chi (N-1)).
double tau(double kappa, double chi, int total_quanta);

struct CriticalPoints {
    double tau1;
    double tau2;
};

/// tau1 = 0.25 for every M >= 2. tau2 = tau1 for M=2, 0.3 for 3 <= M <= 5
/// (upper end of the transitional range), [2M sin^2(pi/M)]^-1 beyond.
CriticalPoints critical_taus(int sites);

/// Smallest Fock component that crosses the cat transition: ceil(4 kappa/chi + 1).
int min_fock_component(double chi_max, double kappa_max);

/// Adiabatic limit on dchi/dt (rad/s^2): kappa_max^2 / (10 tau2 (n-1)).
double adiabatic_chi_rate_limit(double kappa_max, double tau2, int n);

/// Shortest step-one ramp consistent with the rate limit.
///
/// The rate bound is enforced over a chi span of kappa_max/(n-1), giving the
/// n-independent duration 10 tau2 / kappa_max (0.0398 tau2 us at
/// kappa_max/2pi = 40 MHz). Enforcing it over the full sub-critical span
/// 4 kappa_max/(n-1) is four times longer; pass span_factor = 4 for that.
double min_ramp_duration(double kappa_max, double tau2, int n, double span_factor = 1.0);

/// Largest tolerated spread of on-site energies: 2 pi * 4 MHz / tau2, in rad/s.
double disorder_bound(double tau2);
/// max_i eps_i - min_i eps_i.
double offset_spread(const std::vector<double>& site_offsets);

/// "chi << omega_c0 / (2 |alpha|^2)" operationalized as ratio <= 0.2.
inline constexpr double kNonlinearityRatioLimit = 0.2;

struct NonlinearityCheck {
    double ratio;
    bool pass;
};

NonlinearityCheck validate_nonlinearity(double chi, double omega_c0, double alpha_sq);

}  // namespace kerrlat
