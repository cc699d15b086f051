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

#include "kerrlat/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kerrlat/analysis.hpp"

namespace kerrlat {

namespace {

// Segments used to represent a curved step-three profile as a piecewise-linear schedule.
constexpr int kCurvedRampSegments = 64;

// Composite Simpson on [0, 1] with an even number of intervals.
double simpson_unit(const std::function<double(double)>& f, int intervals) {
    const double h = 1.0 / intervals;
    double s = f(0.0) + f(1.0);
    for (int k = 1; k < intervals; ++k) {
        s += (k % 2 == 1 ? 4.0 : 2.0) * f(k * h);
    }
    return s * h / 3.0;
}

std::vector<int> site_blocks(const LatticeSpec& lattice, const BlockPartition& blocks) {
    std::vector<int> owner(static_cast<std::size_t>(lattice.sites));
    int site = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int k = 0; k < blocks[b]; ++k) {
            owner[static_cast<std::size_t>(site++)] = static_cast<int>(b);
        }
    }
    return owner;
}

}  // namespace

std::string to_string(RampShape shape) {
    switch (shape) {
        case RampShape::Linear: return "linear";
        case RampShape::Constant: return "constant";
        case RampShape::Cosine: return "cosine";
    }
    return "?";
}

RampShape ramp_shape_from_string(const std::string& name) {
    if (name == "linear") return RampShape::Linear;
    if (name == "constant") return RampShape::Constant;
    if (name == "cosine") return RampShape::Cosine;
    throw std::invalid_argument("unknown ramp shape '" + name + "'");
}

double ramp_profile(RampShape shape, double u) {
    u = std::clamp(u, 0.0, 1.0);
    switch (shape) {
        case RampShape::Linear: return 1.0 - u;
        case RampShape::Constant: return 1.0;
        case RampShape::Cosine: return 0.5 * (1.0 + std::cos(std::numbers::pi * u));
    }
    return 0.0;
}

void ProtocolPlan::validate(const LatticeSpec& lattice) const {
    lattice.validate();
    for (double d : {ramp_up, decouple_inter_block, hold, ramp_down, decouple_intra_block}) {
        if (!std::isfinite(d) || d < 0.0) {
            throw std::invalid_argument("protocol durations must be finite and >= 0");
        }
    }
    if (!(ramp_up > 0.0)) {
        throw std::invalid_argument("ramp_up must be > 0 (chi cannot jump)");
    }
    if (!(chi_max > 0.0) || !std::isfinite(chi_max)) {
        throw std::invalid_argument("chi_max must be positive");
    }
    if (!(kappa_max >= 0.0) || !(kappa_floor >= 0.0) || kappa_floor > kappa_max) {
        throw std::invalid_argument("need 0 <= kappa_floor <= kappa_max");
    }
    if (target != ReferenceKind::W_ECS && target != ReferenceKind::W_ESCS) {
        throw std::invalid_argument("protocol target must be W_ECS or W_ESCS");
    }
    if (ramp_down_shape == RampShape::Constant && ramp_down > 0.0) {
        throw std::invalid_argument("a constant step-three profile never reaches chi = 0; use hold instead");
    }
    validate_partition(blocks, lattice);
    const auto inter = inter_block_links(lattice, blocks);
    const bool has_inter = std::find(inter.begin(), inter.end(), true) != inter.end();
    const bool has_intra = std::find(inter.begin(), inter.end(), false) != inter.end();
    if (has_inter && kappa_max > 0.0 && decouple_inter_block == 0.0) {
        throw std::invalid_argument("inter-block couplings need decouple_inter_block > 0");
    }
    if (has_intra && kappa_max > kappa_floor && decouple_intra_block == 0.0) {
        throw std::invalid_argument("intra-block couplings need decouple_intra_block > 0");
    }
}

ProtocolPlan default_plan(ReferenceKind target, const LatticeSpec& lattice, const BlockPartition& blocks) {
    ProtocolPlan p;
    p.target = target;
    p.blocks = blocks;
    switch (target) {
        case ReferenceKind::W_ECS: p.ramp_down = 35e-9; break;
        case ReferenceKind::W_ESCS: p.ramp_down = 10.6e-9; break;
        default: throw std::invalid_argument("default plans exist for W_ECS and W_ESCS only");
    }
    p.validate(lattice);
    return p;
}

std::vector<bool> inter_block_links(const LatticeSpec& lattice, const BlockPartition& blocks) {
    validate_partition(blocks, lattice);
    const auto owner = site_blocks(lattice, blocks);
    std::vector<bool> out;
    for (const auto& [i, j] : lattice.links()) {
        out.push_back(owner[static_cast<std::size_t>(i)] != owner[static_cast<std::size_t>(j)]);
    }
    return out;
}

AbhParams build_protocol_params(const ProtocolPlan& plan, const LatticeSpec& lattice,
                                std::vector<double> site_offsets) {
    plan.validate(lattice);
    const double t1 = plan.end_of_step1();
    const double t2 = plan.end_of_step2();
    const double t3 = plan.end_of_hold();
    const double t4 = plan.end_of_step3();
    const double t5 = plan.end_of_step4();

    PiecewiseLinear chi({{0.0, 0.0}, {t1, plan.chi_max}});
    chi.extend_to(t3, plan.chi_max);
    double chi_end = plan.chi_max;
    if (plan.ramp_down > 0.0) {
        if (plan.ramp_down_shape == RampShape::Linear) {
            chi.extend_to(t4, 0.0);
        } else {
            for (int k = 1; k <= kCurvedRampSegments; ++k) {
                const double u = static_cast<double>(k) / kCurvedRampSegments;
                chi.extend_to(t3 + u * plan.ramp_down, plan.chi_max * ramp_profile(plan.ramp_down_shape, u));
            }
        }
        chi_end = 0.0;
    }
    chi.extend_to(t5, chi_end);

    AbhParams params;
    params.lattice = lattice;
    params.chi = std::move(chi);
    params.site_offsets = std::move(site_offsets);
    const double k = plan.kappa_max;
    for (bool inter : inter_block_links(lattice, plan.blocks)) {
        PiecewiseLinear s({{0.0, k}});
        if (inter) {
            s.extend_to(t1, k);
            s.extend_to(t2, 0.0);
            s.extend_to(t5, 0.0);
        } else {
            s.extend_to(t4, k);
            s.extend_to(t5, plan.kappa_floor);
        }
        if (s.knots().size() == 1) {
            s = PiecewiseLinear::constant(k, 0.0, t5);
        }
        params.kappa.push_back(std::move(s));
    }
    params.validate();
    return params;
}

double solve_ramp_down(double t_star, double chi_max, RampShape shape) {
    return solve_ramp_down(t_star, chi_max, [shape](double u) { return ramp_profile(shape, u); });
}

double solve_ramp_down(double t_star, double chi_max, const std::function<double(double)>& profile) {
    if (!(t_star > 0.0) || !(chi_max > 0.0)) {
        throw std::invalid_argument("solve_ramp_down needs t_star > 0 and chi_max > 0");
    }
    constexpr int kSamples = 1000;
    double prev = profile(0.0);
    if (std::abs(prev - 1.0) > 1e-12) {
        throw std::invalid_argument("ramp profile must start at 1");
    }
    for (int k = 1; k <= kSamples; ++k) {
        const double v = profile(static_cast<double>(k) / kSamples);
        if (v > prev + 1e-12 || v < -1e-12) {
            throw std::invalid_argument("ramp profile must be non-increasing and non-negative");
        }
        prev = v;
    }
    // ∫_0^T chi_max s(t/T) dt, by Simpson in the scaled variable.
    const double unit = simpson_unit(profile, 4096);
    auto accumulated = [&](double T) { return chi_max * T * unit; };
    const double target = chi_max * t_star;
    double lo = 0.0;
    double hi = t_star;
    while (accumulated(hi) < target) {
        hi *= 2.0;
    }
    while (hi - lo > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        (accumulated(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

bool PlanReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const PlanCheck& c) { return c.pass; });
}

PlanReport check_plan(const ProtocolPlan& plan, const LatticeSpec& lattice, const std::vector<double>& site_offsets,
                      double alpha_sq, double omega_c0) {
    PlanReport report;
    const double tau2 = critical_taus(std::max(lattice.sites, 2)).tau2;

    {
        PlanCheck c{"adiabatic_ramp", true, plan.ramp_up, 0.0, ""};
        if (plan.kappa_max > 0.0 && plan.chi_max > 0.0) {
            const int n = std::max(min_fock_component(plan.chi_max, plan.kappa_max), 2);
            c.limit = min_ramp_duration(plan.kappa_max, tau2, n);
            c.pass = plan.ramp_up >= c.limit * (1.0 - 1e-9);
            std::ostringstream d;
            d << "ramp_up " << plan.ramp_up * 1e9 << " ns vs minimum " << c.limit * 1e9 << " ns (n_min=" << n
              << ", tau2=" << tau2 << ")";
            c.detail = d.str();
        } else {
            c.detail = "no hopping; no adiabatic constraint";
        }
        report.checks.push_back(c);
    }
    {
        const double spread = offset_spread(site_offsets);
        const double bound = disorder_bound(tau2);
        std::ostringstream d;
        d << "on-site spread 2pi*" << mhz_from_angular(spread) << " MHz vs 2pi*" << mhz_from_angular(bound) << " MHz";
        report.checks.push_back({"disorder", spread <= bound, spread, bound, d.str()});
    }
    {
        const auto nl = validate_nonlinearity(plan.chi_max, omega_c0, alpha_sq);
        std::ostringstream d;
        d << "2 chi |alpha|^2 / omega_c0 = " << nl.ratio;
        report.checks.push_back({"nonlinearity", nl.pass, nl.ratio, kNonlinearityRatioLimit, d.str()});
    }
    {
        int smallest = lattice.sites;
        if (!plan.blocks.empty()) {
            smallest = *std::min_element(plan.blocks.begin(), plan.blocks.end());
        }
        const double per_site = alpha_sq / std::max(smallest, 1);
        const double limit = kMaxFillFraction * lattice.cutoff;
        std::ostringstream d;
        d << "per-site branch occupation " << per_site << " vs " << limit << " at cutoff " << lattice.cutoff;
        report.checks.push_back({"cutoff_margin", per_site <= limit, per_site, limit, d.str()});
    }
    {
        std::ostringstream d;
        d << "|alpha|^2 = " << alpha_sq << " (components below n_min must be negligible)";
        report.checks.push_back({"amplitude_floor", alpha_sq >= 10.0, alpha_sq, 10.0, d.str()});
    }
    return report;
}

DensityMatrix ProtocolRun::final_density() const {
    if (const auto* psi = std::get_if<PureState>(&final_state)) {
        return DensityMatrix::from_pure(*psi);
    }
    return std::get<DensityMatrix>(final_state);
}

ProtocolRun run_protocol(const ProtocolPlan& plan, const LatticeSpec& lattice, cplx alpha, bool damped,
                         const RunOptions& options, std::vector<double> site_offsets) {
    ProtocolRun run;
    run.plan = plan;
    run.params = build_protocol_params(plan, lattice, site_offsets);

    const double alpha_sq = std::norm(alpha);
    for (const auto& c : check_plan(plan, lattice, site_offsets, alpha_sq).checks) {
        if (!c.pass) {
            run.warnings.push_back(c.name + ": " + c.detail);
        }
    }

    const PureState psi0 = normal_mode_coherent(alpha, lattice);
    run.reference = options.reference
                        ? *options.reference
                        : ecs_reference(plan.target, std::polar(std::abs(alpha), plan.reference_phase), lattice,
                                        plan.blocks);
    if (run.reference.dimension() != psi0.dimension()) {
        throw std::invalid_argument("reference state does not match lattice");
    }

    const bool has_pair = lattice.sites >= 2;
    const SparseOperator pair =
        has_pair ? lift_to_site(creation(lattice.cutoff), 0, lattice) * lift_to_site(annihilation(lattice.cutoff), 1, lattice)
                 : SparseOperator::zero(lattice.dimension());
    const cplx nan_c{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};

    if (damped) {
        auto observer = [&](double t, const DensityMatrix& rho, CheckpointRecord& rec) {
            rec.fidelity = fidelity(rho, run.reference);
            rec.fidelity_sq = rec.fidelity * rec.fidelity;
            rec.correlator = has_pair ? single_particle_correlator(rho, lattice, 0, 1) : nan_c;
            if (options.density_hook) {
                options.density_hook(t, rho, rec);
            }
        };
        auto result = evolve_density(DensityMatrix::from_pure(psi0), run.params, options.damping, options.evolve,
                                     observer);
        run.trajectory = std::move(result.trajectory);
        run.final_site0 = partial_trace(result.final_state, 0, lattice);
        run.final_state = std::move(result.final_state);
    } else {
        auto observer = [&](double t, const PureState& psi, CheckpointRecord& rec) {
            rec.fidelity = fidelity(psi, run.reference);
            rec.fidelity_sq = rec.fidelity * rec.fidelity;
            rec.correlator = has_pair ? psi.amplitudes.dot(pair.apply(psi.amplitudes)) : nan_c;
            if (options.pure_hook) {
                options.pure_hook(t, psi, rec);
            }
        };
        auto result = evolve_pure(psi0, run.params, options.evolve, observer);
        run.trajectory = std::move(result.trajectory);
        run.final_site0 = partial_trace(result.final_state, 0, lattice);
        run.final_state = std::move(result.final_state);
    }
    return run;
}

}  // namespace kerrlat
