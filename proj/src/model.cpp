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

#include "kerrlat/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kerrlat {

void AbhParams::validate() const {
    lattice.validate();
    if (chi.knots().empty()) {
        throw std::invalid_argument("chi schedule is empty");
    }
    if (chi.min_value() < 0.0) {
        throw std::invalid_argument("chi must be non-negative");
    }
    const auto links = lattice.links();
    if (kappa.size() != links.size()) {
        throw std::invalid_argument("expected " + std::to_string(links.size()) + " hopping schedules, got " +
                                    std::to_string(kappa.size()));
    }
    for (const auto& k : kappa) {
        if (k.knots().empty() || k.min_value() < 0.0) {
            throw std::invalid_argument("hopping schedules must be non-empty and non-negative");
        }
    }
    if (!site_offsets.empty() && site_offsets.size() != static_cast<std::size_t>(lattice.sites)) {
        throw std::invalid_argument("site offsets must have one entry per site");
    }
}

double AbhParams::t_begin() const {
    double t = chi.t_begin();
    for (const auto& k : kappa) {
        t = std::max(t, k.t_begin());
    }
    return t;
}

double AbhParams::t_end() const {
    double t = chi.t_end();
    for (const auto& k : kappa) {
        t = std::min(t, k.t_end());
    }
    return t;
}

double AbhParams::offset(int site) const {
    return site_offsets.empty() ? 0.0 : site_offsets.at(static_cast<std::size_t>(site));
}

// ---------------------------------------------------------------------------

LatticeOperators::LatticeOperators(const LatticeSpec& lattice) : lattice_(lattice), links_(lattice.links()) {
    lattice_.validate();
    const auto c = annihilation(lattice_.cutoff);
    const std::size_t dim = lattice_.dimension();
    kerr_ = RealVector::Zero(static_cast<Eigen::Index>(dim));
    total_ = RealVector::Zero(static_cast<Eigen::Index>(dim));
    for (int j = 0; j < lattice_.sites; ++j) {
        lowering_.push_back(lift_to_site(c, j, lattice_));
        RealVector n = site_number_diagonal(j, lattice_);
        kerr_ -= 0.5 * n.cwiseProduct(n - RealVector::Ones(n.size()));
        total_ += n;
        number_.push_back(std::move(n));
    }
    for (const auto& [i, j] : links_) {
        const SparseOperator& ci = lowering_[static_cast<std::size_t>(i)];
        const SparseOperator& cj = lowering_[static_cast<std::size_t>(j)];
        SparseOperator forward = ci.adjoint() * cj;
        hopping_.push_back(forward + forward.adjoint());
    }
}

RealVector LatticeOperators::diagonal(double chi, const std::vector<double>& site_offsets) const {
    RealVector d = chi * kerr_;
    for (std::size_t j = 0; j < site_offsets.size(); ++j) {
        if (site_offsets[j] != 0.0) {
            d += site_offsets[j] * number_[j];
        }
    }
    return d;
}

SparseOperator build_hamiltonian(const AbhParams& params, const LatticeOperators& ops, double t) {
    if (ops.dimension() != params.lattice.dimension()) {
        throw std::invalid_argument("operator set does not match lattice");
    }
    SparseOperator h = SparseOperator::diagonal(ops.diagonal(params.chi(t), params.site_offsets));
    for (std::size_t l = 0; l < ops.links().size(); ++l) {
        const double k = params.kappa[l](t);
        if (k != 0.0) {
            h = h - cplx{k} * ops.hopping(l);
        }
    }
    return h;
}

SparseOperator build_hamiltonian(const AbhParams& params, double t) {
    params.validate();
    return build_hamiltonian(params, LatticeOperators(params.lattice), t);
}

// ---------------------------------------------------------------------------

double tau(double kappa, double chi, int total_quanta) {
    if (total_quanta <= 1) {
        throw std::domain_error("tau is undefined for N <= 1");
    }
    if (chi == 0.0) {
        throw std::domain_error("tau is undefined for chi = 0");
    }
    return kappa / (chi * (total_quanta - 1));
}

CriticalPoints critical_taus(int sites) {
    if (sites < 2) {
        throw std::invalid_argument("critical points need M >= 2");
    }
    constexpr double tau1 = 0.25;
    if (sites == 2) {
        return {tau1, tau1};
    }
    if (sites <= 5) {
        return {tau1, 0.3};
    }
    const double s = std::sin(std::numbers::pi / sites);
    return {tau1, 1.0 / (2.0 * sites * s * s)};
}

int min_fock_component(double chi_max, double kappa_max) {
    if (chi_max <= 0.0) {
        throw std::domain_error("chi_max must be positive");
    }
    const double bound = 4.0 * kappa_max / chi_max + 1.0;
    return static_cast<int>(std::ceil(bound - 1e-12 * bound));
}

double adiabatic_chi_rate_limit(double kappa_max, double tau2, int n) {
    if (n < 2) {
        throw std::domain_error("rate limit needs n >= 2");
    }
    return kappa_max * kappa_max / (10.0 * tau2 * (n - 1));
}

double min_ramp_duration(double kappa_max, double tau2, int n, double span_factor) {
    const double span = span_factor * kappa_max / (n - 1);
    return span / adiabatic_chi_rate_limit(kappa_max, tau2, n);
}

double disorder_bound(double tau2) {
    if (tau2 <= 0.0) {
        throw std::domain_error("tau2 must be positive");
    }
    return angular_from_mhz(4.0) / tau2;
}

double offset_spread(const std::vector<double>& site_offsets) {
    if (site_offsets.empty()) {
        return 0.0;
    }
    const auto [lo, hi] = std::minmax_element(site_offsets.begin(), site_offsets.end());
    return *hi - *lo;
}

NonlinearityCheck validate_nonlinearity(double chi, double omega_c0, double alpha_sq) {
    const double ratio = chi * 2.0 * alpha_sq / omega_c0;
    return {ratio, ratio <= kNonlinearityRatioLimit};
}

}  // namespace kerrlat
