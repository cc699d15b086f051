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

#include <gtest/gtest.h>

#include <numbers>

#include "kerrlat/analysis.hpp"
#include "kerrlat/protocol.hpp"

namespace kerrlat {
namespace {

using std::numbers::pi;

const LatticeSpec kDimer{2, 20, false};

ProtocolPlan default_dimer_plan(ReferenceKind target, const LatticeSpec& lat = kDimer) {
    return default_plan(target, lat, single_site_blocks(lat.sites));
}

const PlanCheck& find_check(const PlanReport& report, const std::string& name) {
    for (const auto& c : report.checks) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::runtime_error("missing check " + name);
}

TEST(DefaultPlan, ReferenceTimings) {
    const auto w = default_dimer_plan(ReferenceKind::W_ECS);
    EXPECT_DOUBLE_EQ(w.ramp_up, 10e-9);
    EXPECT_DOUBLE_EQ(w.decouple_inter_block, 2e-9);
    EXPECT_DOUBLE_EQ(w.ramp_down, 35e-9);
    EXPECT_DOUBLE_EQ(w.decouple_intra_block, 2e-9);
    EXPECT_NEAR(w.duration(), 49e-9, 1e-20);
    EXPECT_DOUBLE_EQ(default_dimer_plan(ReferenceKind::W_ESCS).ramp_down, 10.6e-9);
}

TEST(DefaultPlan, ValidationRejectsBadPlans) {
    auto plan = default_dimer_plan(ReferenceKind::W_ECS);
    plan.ramp_up = 0.0;
    EXPECT_THROW(plan.validate(kDimer), std::invalid_argument);
    plan = default_dimer_plan(ReferenceKind::W_ECS);
    plan.decouple_inter_block = 0.0;
    EXPECT_THROW(plan.validate(kDimer), std::invalid_argument);
    plan = default_dimer_plan(ReferenceKind::W_ECS);
    plan.target = ReferenceKind::W_STATE;
    EXPECT_THROW(plan.validate(kDimer), std::invalid_argument);
    const LatticeSpec four{4, 3, false};
    auto blocked = default_plan(ReferenceKind::W_ECS, four, {2, 2});
    blocked.decouple_intra_block = 0.0;
    EXPECT_THROW(blocked.validate(four), std::invalid_argument);
}

TEST(SolveRampDown, LinearProfile) {
    const double chi = angular_from_mhz(40.0);
    EXPECT_NEAR(solve_ramp_down(17.5e-9, chi, RampShape::Linear), 35e-9, 1e-18);
    EXPECT_NEAR(solve_ramp_down(5.3e-9, chi, RampShape::Linear), 10.6e-9, 1e-18);
}

TEST(SolveRampDown, ConstantAndCosineProfiles) {
    const double chi = angular_from_mhz(40.0);
    EXPECT_NEAR(solve_ramp_down(7e-9, chi, RampShape::Constant), 7e-9, 1e-18);
    EXPECT_NEAR(solve_ramp_down(7e-9, chi, RampShape::Cosine), 14e-9, 1e-17);
}

TEST(SolveRampDown, CustomProfileMatchesIntegralCondition) {
    const double chi = angular_from_mhz(40.0);
    auto quad = [](double u) { return (1.0 - u) * (1.0 - u); };
    EXPECT_NEAR(solve_ramp_down(5e-9, chi, quad), 15e-9, 1e-16);
    EXPECT_THROW(solve_ramp_down(5e-9, chi, [](double u) { return u; }), std::invalid_argument);
    EXPECT_THROW(solve_ramp_down(5e-9, chi, [](double u) { return std::cos(4 * pi * u); }), std::invalid_argument);
    EXPECT_THROW(solve_ramp_down(-1.0, chi, RampShape::Linear), std::invalid_argument);
}

TEST(RampShape, NamesAndProfiles) {
    for (auto s : {RampShape::Linear, RampShape::Constant, RampShape::Cosine}) {
        EXPECT_EQ(ramp_shape_from_string(to_string(s)), s);
        EXPECT_DOUBLE_EQ(ramp_profile(s, 0.0), 1.0);
    }
    EXPECT_DOUBLE_EQ(ramp_profile(RampShape::Linear, 0.25), 0.75);
    EXPECT_NEAR(ramp_profile(RampShape::Cosine, 0.5), 0.5, 1e-15);
    EXPECT_THROW(ramp_shape_from_string("cubic"), std::invalid_argument);
}

TEST(ProtocolParams, SchedulesFollowTheSteps) {
    const auto plan = default_dimer_plan(ReferenceKind::W_ECS);
    const auto p = build_protocol_params(plan, kDimer);
    EXPECT_DOUBLE_EQ(p.chi(0.0), 0.0);
    EXPECT_NEAR(p.chi(5e-9), 0.5 * plan.chi_max, 1e-3);
    EXPECT_NEAR(p.chi(plan.end_of_step2()), plan.chi_max, 1e-3);
    EXPECT_NEAR(p.chi(plan.end_of_step2() + 17.5e-9), 0.5 * plan.chi_max, 1e-3);
    EXPECT_NEAR(p.chi(plan.duration()), 0.0, 1e-6);
    ASSERT_EQ(p.kappa.size(), 1u);
    EXPECT_NEAR(p.kappa[0](plan.end_of_step1()), plan.kappa_max, 1e-3);
    EXPECT_NEAR(p.kappa[0](11e-9), 0.5 * plan.kappa_max, 1e-3);
    EXPECT_EQ(p.kappa[0](plan.end_of_step2()), 0.0);
    EXPECT_EQ(p.kappa[0](plan.duration()), 0.0);
    EXPECT_NEAR(p.chi.integral(plan.end_of_step2(), plan.duration()), plan.chi_max * 17.5e-9, 1e-3);
}

TEST(ProtocolParams, IntraBlockLinksDropToFloor) {
    const LatticeSpec four{4, 3, false};
    const auto plan = default_plan(ReferenceKind::W_ECS, four, {2, 2});
    const auto inter = inter_block_links(four, plan.blocks);
    ASSERT_EQ(inter, (std::vector<bool>{false, true, false}));
    const auto p = build_protocol_params(plan, four);
    EXPECT_NEAR(p.kappa[0](plan.end_of_step3()), plan.kappa_max, 1e-3);
    EXPECT_NEAR(p.kappa[0](plan.duration()), plan.kappa_floor, 1e-3);
    EXPECT_EQ(p.kappa[1](plan.duration()), 0.0);
}

TEST(ProtocolParams, SchedulesAreContinuous) {
    for (auto shape : {RampShape::Linear, RampShape::Cosine}) {
        auto plan = default_dimer_plan(ReferenceKind::W_ECS);
        plan.hold = 3e-9;
        plan.ramp_down_shape = shape;
        const auto p = build_protocol_params(plan, kDimer);
        const double eps = 1e-15;
        for (double t : {plan.end_of_step1(), plan.end_of_step2(), plan.end_of_hold(), plan.end_of_step3()}) {
            EXPECT_NEAR(p.chi(t - eps), p.chi(t + eps), 1e-3 * plan.chi_max);
            EXPECT_NEAR(p.kappa[0](t - eps), p.kappa[0](t + eps), 1e-3 * plan.kappa_max);
        }
    }
}

TEST(ProtocolParams, ZeroRampDownHoldsChi) {
    auto plan = default_dimer_plan(ReferenceKind::W_ECS);
    plan.ramp_down = 0.0;
    plan.hold = 40e-9;
    const auto p = build_protocol_params(plan, kDimer);
    EXPECT_NEAR(p.chi(plan.duration()), plan.chi_max, 1e-3);
}

TEST(CheckPlan, PaperDefaultsPass) {
    const auto report = check_plan(default_dimer_plan(ReferenceKind::W_ECS), kDimer, {});
    for (const auto& c : report.checks) {
        EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
    }
    EXPECT_TRUE(report.all_pass());
}

TEST(CheckPlan, ShortRampFailsAdiabaticBound) {
    auto plan = default_dimer_plan(ReferenceKind::W_ECS);
    plan.ramp_up = 1e-9;
    const auto report = check_plan(plan, kDimer, {});
    EXPECT_FALSE(find_check(report, "adiabatic_ramp").pass);
    EXPECT_FALSE(report.all_pass());
}

TEST(CheckPlan, LargeDisorderFails) {
    const auto report =
        check_plan(default_dimer_plan(ReferenceKind::W_ECS), kDimer, {0.0, angular_from_mhz(100.0)});
    EXPECT_FALSE(find_check(report, "disorder").pass);
    EXPECT_TRUE(find_check(report, "adiabatic_ramp").pass);
}

TEST(CheckPlan, NonlinearityAndAmplitude) {
    const auto plan = default_dimer_plan(ReferenceKind::W_ECS);
    EXPECT_FALSE(find_check(check_plan(plan, kDimer, {}, 20.0), "nonlinearity").pass);
    EXPECT_FALSE(find_check(check_plan(plan, kDimer, {}, 4.0), "amplitude_floor").pass);
    EXPECT_FALSE(find_check(check_plan(plan, LatticeSpec{2, 12, false}, {}, 10.0), "cutoff_margin").pass);
}

TEST(RunProtocol, VacuumStaysVacuum) {
    RunOptions options;
    options.evolve.checkpoint_interval = 1e-9;
    const LatticeSpec lat{2, 6, false};
    const auto run = run_protocol(default_dimer_plan(ReferenceKind::W_ECS, lat), lat, 0.0, false, options);
    for (const auto& r : run.trajectory.records) {
        EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
    }
    EXPECT_FALSE(run.warnings.empty());  // amplitude floor
}

TEST(RunProtocol, StartMatchesReferenceOverlap) {
    RunOptions options;
    options.evolve.checkpoint_interval = 1e-9;
    options.evolve.t_end = 1e-9;
    const cplx alpha{std::sqrt(10.0)};
    const auto run = run_protocol(default_dimer_plan(ReferenceKind::W_ECS), kDimer, alpha, false, options);
    const auto psi0 = normal_mode_coherent(alpha, kDimer);
    const auto ref = ecs_reference(ReferenceKind::W_ECS, alpha, kDimer, single_site_blocks(2));
    EXPECT_NEAR(run.trajectory.records.front().fidelity, fidelity(psi0, ref), 1e-14);
    EXPECT_NEAR(run.trajectory.records.front().t, 0.0, 0.0);
}

TEST(RunProtocol, UndampedConservesTotalNumber) {
    const auto plan = default_dimer_plan(ReferenceKind::W_ECS);
    RunOptions options;
    options.evolve.checkpoint_interval = 1e-9;
    RealVector ntot = site_number_diagonal(0, kDimer) + site_number_diagonal(1, kDimer);
    double n0 = -1.0;
    double worst = 0.0;
    options.pure_hook = [&](double, const PureState& psi, CheckpointRecord&) {
        const double n = (psi.amplitudes.cwiseAbs2().array() * ntot.array()).sum();
        if (n0 < 0.0) {
            n0 = n;
        }
        worst = std::max(worst, std::abs(n - n0) / n0);
    };
    const auto run = run_protocol(plan, kDimer, std::sqrt(10.0), false, options);
    EXPECT_LE(worst, 1e-6);
    EXPECT_TRUE(std::holds_alternative<PureState>(run.final_state));
    EXPECT_NEAR(run.final_site0.trace().real(), 1.0, 1e-10);
}

// The drift above is RK4 amplitude error on the highest Fock levels, not a
// number-changing Hamiltonian: it falls by ~2^5 per halving of dt.
TEST(RunProtocol, NumberDriftShrinksAsDtToTheFifth) {
    const auto plan = default_dimer_plan(ReferenceKind::W_ECS);
    const RealVector ntot = site_number_diagonal(0, kDimer) + site_number_diagonal(1, kDimer);
    auto drift = [&](double dt) {
        RunOptions options;
        options.evolve.dt = dt;
        options.evolve.checkpoint_interval = 1e-9;
        double n0 = -1.0;
        double worst = 0.0;
        options.pure_hook = [&](double, const PureState& psi, CheckpointRecord&) {
            const double n = (psi.amplitudes.cwiseAbs2().array() * ntot.array()).sum();
            if (n0 < 0.0) {
                n0 = n;
            }
            worst = std::max(worst, std::abs(n - n0) / n0);
        };
        run_protocol(plan, kDimer, std::sqrt(10.0), false, options);
        return worst;
    };
    const double coarse = drift(1e-11);
    const double fine = drift(5e-12);
    const double finer = drift(2.5e-12);
    EXPECT_GE(coarse / fine, 24.0);
    EXPECT_GE(fine / finer, 24.0);
    EXPECT_LE(finer, 1e-6);
}

TEST(RunProtocol, DampedFidelityFlatOnceChiIsZero) {
    const LatticeSpec lat{2, 12, false};
    const auto plan = default_dimer_plan(ReferenceKind::W_ECS, lat);
    RunOptions options;
    options.evolve.checkpoint_interval = 0.1e-9;
    const auto run = run_protocol(plan, lat, std::sqrt(5.0), true, options);
    double lo3 = 1.0, hi3 = 0.0, lo4 = 1.0, hi4 = 0.0;
    for (const auto& r : run.trajectory.records) {
        if (r.t >= plan.end_of_hold() && r.t <= plan.end_of_step3() - 5e-9) {
            lo3 = std::min(lo3, r.fidelity);
            hi3 = std::max(hi3, r.fidelity);
        }
        if (r.t >= plan.end_of_step3()) {
            lo4 = std::min(lo4, r.fidelity);
            hi4 = std::max(hi4, r.fidelity);
        }
    }
    EXPECT_GT(hi3 - lo3, 0.05);
    EXPECT_LT(hi4 - lo4, 5e-3);
    EXPECT_LT(run.final_density().purity(), 1.0);
    EXPECT_LT(run.trajectory.records.back().purity, 1.0);
}

TEST(RunProtocol, CustomReferenceAndSiteOffsets) {
    RunOptions options;
    options.evolve.checkpoint_interval = 1e-9;
    options.evolve.t_end = 2e-9;
    const LatticeSpec lat{2, 6, false};
    options.reference = normal_mode_coherent(1.0, lat);
    const auto run = run_protocol(default_dimer_plan(ReferenceKind::W_ECS, lat), lat, 1.0, false, options,
                                  {angular_from_mhz(1.0), 0.0});
    EXPECT_NEAR(run.trajectory.records.front().fidelity, 1.0, 1e-14);
    options.reference = PureState{Vector::Zero(3)};
    EXPECT_THROW(run_protocol(default_dimer_plan(ReferenceKind::W_ECS, lat), lat, 1.0, false, options), std::invalid_argument);
}

// The bipartite W_ESCS plan should leave the site-zero branch close to the Kerr
// cat (best rotation angle), using the state conditioned on the other site being empty.
TEST(RunProtocol, EscsTerminalBranchIsKerrCat) {
    const auto plan = default_dimer_plan(ReferenceKind::W_ESCS);
    RunOptions options;
    options.evolve.checkpoint_interval = 1e-9;
    const cplx alpha{std::sqrt(10.0)};
    const auto run = run_protocol(plan, kDimer, alpha, false, options);
    const auto cond = vacuum_conditioned_site_state(run.final_density(), kDimer, 0);
    const Vector cat = kerr_cat_reference(alpha, kDimer.cutoff);
    double best = 0.0;
    for (int k = 0; k < 720; ++k) {
        Vector v = cat;
        for (int n = 0; n <= kDimer.cutoff; ++n) {
            v[n] *= std::polar(1.0, k * pi / 360 * n);
        }
        best = std::max(best, (v.adjoint() * cond.state.values * v)(0, 0).real());
    }
    EXPECT_GE(best, 0.95);
}

}  // namespace
}  // namespace kerrlat
