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

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "kerrlat/analysis.hpp"
#include "kerrlat/cli.hpp"
#include "kerrlat/coherence.hpp"
#include "kerrlat/oracles.hpp"
#include "kerrlat/protocol.hpp"

namespace kerrlat::cli {

using nlohmann::json;

namespace {

constexpr int kCsvPrecision = 12;

// Typed access that turns JSON type errors into config errors naming the field.
template <typename T>
T get(const json& config, const std::string& dotted) {
    const json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!node->is_object() || !node->contains(key)) {
            throw ConfigError("missing field '" + dotted + "'");
        }
        node = &node->at(key);
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }
    try {
        return node->get<T>();
    } catch (const json::exception&) {
        throw ConfigError("field '" + dotted + "' has the wrong type");
    }
}

std::optional<double> get_optional(const json& config, const std::string& dotted) {
    const auto v = get<json>(config, dotted);
    if (v.is_null()) {
        return std::nullopt;
    }
    return v.get<double>();
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << std::setprecision(kCsvPrecision);
    return out;
}

void write_manifest(const std::filesystem::path& path, const json& config, const json& outputs, const json& summary) {
    json manifest{{"code_version", KERRLAT_VERSION},
                  {"command", config.at("command")},
                  {"config", config},
                  {"outputs", outputs},
                  {"summary", summary}};
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << manifest.dump(2) << "\n";
}

void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& grid) {
    auto out = open_output(path);
    out << "x,p,w\n";
    for (std::size_t i = 0; i < grid.xs.size(); ++i) {
        for (std::size_t k = 0; k < grid.ps.size(); ++k) {
            out << grid.xs[i] << "," << grid.ps[k] << ","
                << grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) << "\n";
        }
    }
}

LatticeSpec lattice_from(const json& config) {
    LatticeSpec lat{get<int>(config, "lattice.sites"), get<int>(config, "lattice.cutoff"),
                    get<bool>(config, "lattice.periodic")};
    lat.validate();
    return lat;
}

WignerSpec wigner_spec_from(const json& config) {
    WignerSpec s{get<double>(config, "wigner.x_min"), get<double>(config, "wigner.x_max"),
                 get<double>(config, "wigner.p_min"), get<double>(config, "wigner.p_max"),
                 get<int>(config, "wigner.nx"),      get<int>(config, "wigner.np")};
    s.validate();
    return s;
}

cplx alpha_from(const json& config) { return {get<double>(config, "alpha.re"), get<double>(config, "alpha.im")}; }

ProtocolPlan plan_from(const json& config, const LatticeSpec& lattice) {
    auto blocks = get<std::vector<int>>(config, "plan.blocks");
    if (blocks.empty()) {
        blocks = single_site_blocks(lattice.sites);
    }
    const ReferenceKind target = reference_kind_from_string(get<std::string>(config, "plan.target"));
    ProtocolPlan plan = default_plan(target, lattice, blocks);
    plan.ramp_up = get<double>(config, "plan.ramp_up_ns") * 1e-9;
    plan.decouple_inter_block = get<double>(config, "plan.decouple_inter_block_ns") * 1e-9;
    plan.hold = get<double>(config, "plan.hold_ns") * 1e-9;
    plan.decouple_intra_block = get<double>(config, "plan.decouple_intra_block_ns") * 1e-9;
    plan.ramp_down_shape = ramp_shape_from_string(get<std::string>(config, "plan.ramp_down_shape"));
    plan.chi_max = angular_from_mhz(get<double>(config, "plan.chi_max_mhz"));
    plan.kappa_max = angular_from_mhz(get<double>(config, "plan.kappa_max_mhz"));
    plan.kappa_floor = angular_from_mhz(get<double>(config, "plan.kappa_floor_mhz"));
    plan.reference_phase = get<double>(config, "plan.reference_phase_rad");
    const auto t_star = get_optional(config, "plan.t_star_ns");
    const auto ramp_down = get_optional(config, "plan.ramp_down_ns");
    if (t_star && ramp_down) {
        throw ConfigError("set at most one of plan.t_star_ns and plan.ramp_down_ns");
    }
    if (t_star) {
        plan.ramp_down = solve_ramp_down(*t_star * 1e-9, plan.chi_max, plan.ramp_down_shape);
    } else if (ramp_down) {
        plan.ramp_down = *ramp_down * 1e-9;
    }
    plan.validate(lattice);
    return plan;
}

std::vector<double> offsets_from(const json& config, const LatticeSpec& lattice) {
    auto mhz = get<std::vector<double>>(config, "site_offsets_mhz");
    if (!mhz.empty() && mhz.size() != static_cast<std::size_t>(lattice.sites)) {
        throw ConfigError("site_offsets_mhz needs one entry per site");
    }
    for (double& v : mhz) {
        v = angular_from_mhz(v);
    }
    return mhz;
}

// ---------------------------------------------------------------------------

int cmd_run_protocol(const json& config, const std::filesystem::path& out_dir, std::ostream& log) {
    const LatticeSpec lattice = lattice_from(config);
    const ProtocolPlan plan = plan_from(config, lattice);
    const auto offsets = offsets_from(config, lattice);
    const cplx alpha = alpha_from(config);
    const bool damped = get<bool>(config, "damping.enabled");

    RunOptions options;
    options.evolve.dt = get<double>(config, "integration.dt_s");
    options.evolve.checkpoint_interval = get<double>(config, "integration.checkpoint_interval_ns") * 1e-9;
    options.evolve.trace_abort = get<double>(config, "integration.trace_abort");
    options.evolve.freeze_rates_per_step = get<bool>(config, "damping.freeze_rates_per_step");
    options.damping.t1_at_zero = get<double>(config, "damping.t1_at_zero_us") * 1e-6;
    options.damping.t1_at_max = get<double>(config, "damping.t1_at_max_us") * 1e-6;
    options.damping.tphi_at_zero = get<double>(config, "damping.tphi_at_zero_s");
    options.damping.tphi_at_max = get<double>(config, "damping.tphi_at_max_us") * 1e-6;
    options.damping.chi_max = plan.chi_max;
    options.damping.validate();
    if (!(options.evolve.dt > 0.0) || !(options.evolve.checkpoint_interval > 0.0)) {
        throw ConfigError("integration.dt_s and integration.checkpoint_interval_ns must be positive");
    }
    const WignerSpec wspec = wigner_spec_from(config);

    const auto report = check_plan(plan, lattice, offsets, std::norm(alpha),
                                   angular_from_ghz(get<double>(config, "plan.omega_c0_ghz")));
    log << "plan: " << to_string(plan.target) << ", total " << plan.duration() * 1e9 << " ns, T_s3 "
        << plan.ramp_down * 1e9 << " ns, " << (damped ? "damped" : "undamped") << "\n";
    json checks = json::array();
    for (const auto& c : report.checks) {
        log << "  check " << c.name << ": " << (c.pass ? "pass" : "FAIL") << " (" << c.detail << ")\n";
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"limit", c.limit}});
    }

    const ProtocolRun run = run_protocol(plan, lattice, alpha, damped, options, offsets);

    const auto traj_path = out_dir / get<std::string>(config, "output.trajectory");
    {
        auto out = open_output(traj_path);
        out << "t_s,fidelity,fidelity_sq,corr_re,corr_im,trace_re,purity\n";
        for (const auto& r : run.trajectory.records) {
            out << r.t << "," << r.fidelity << "," << r.fidelity_sq << "," << r.correlator.real() << ","
                << r.correlator.imag() << "," << r.trace_re << "," << r.purity << "\n";
        }
    }
    json outputs{{"trajectory", traj_path.filename().string()}};
    json summary;
    if (get<bool>(config, "output.final_wigner")) {
        const auto grid = wigner(run.final_site0, wspec);
        const auto w_path = out_dir / get<std::string>(config, "output.wigner");
        write_wigner_csv(w_path, grid);
        outputs["wigner"] = w_path.filename().string();
        summary["wigner_integral"] = grid.integral;
        if (!grid.contained) {
            log << "warning: Wigner window holds less than 95% of the state\n";
        }
    }
    const auto& last = run.trajectory.records.back();
    const auto q = min_quadrature_variance(run.final_site0);
    summary["final_fidelity"] = last.fidelity;
    summary["final_purity"] = last.purity;
    summary["final_trace"] = last.trace_re;
    summary["site0_min_quadrature_variance"] = q.variance;
    summary["ramp_down_ns"] = plan.ramp_down * 1e9;
    summary["duration_ns"] = plan.duration() * 1e9;
    summary["plan_checks"] = checks;
    summary["warnings"] = run.warnings;
    for (const auto& w : run.warnings) {
        log << "warning: " << w << "\n";
    }
    write_manifest(out_dir / get<std::string>(config, "output.manifest"), config, outputs, summary);
    log << "final fidelity " << last.fidelity << ", purity " << last.purity << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct CheckLine {
    std::string name;
    double value;
    double threshold;
    bool pass;
};

double pure_overlap(const Vector& a, const Vector& b) { return std::abs(a.dot(b)); }

AbhParams constant_params(const LatticeSpec& lattice, double chi, double kappa, double t_end) {
    AbhParams p;
    p.lattice = lattice;
    p.chi = PiecewiseLinear::constant(chi, 0.0, t_end);
    for (std::size_t l = 0; l < lattice.links().size(); ++l) {
        p.kappa.push_back(PiecewiseLinear::constant(kappa, 0.0, t_end));
    }
    return p;
}

Vector evolve_to(const PureState& psi0, const AbhParams& p, double dt = EvolveOptions{}.dt) {
    EvolveOptions opt;
    opt.dt = dt;
    opt.checkpoint_interval = 1.0;
    return evolve_pure(psi0, p, opt).final_state.amplitudes;
}

// Random density matrix rho = G G^dag / tr, G with complex Gaussian entries and a random rank.
DensityMatrix random_density(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> rank_dist(1, dim);
    const int rank = rank_dist(rng);
    Matrix m(dim, rank);
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < rank; ++k) {
            m(i, k) = cplx(g(rng), g(rng));
        }
    }
    Matrix rho = m * m.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix{rho};
}

int cmd_oracle_check(const json& config, const std::filesystem::path& out_dir, std::ostream& log) {
    std::vector<CheckLine> lines;
    const double chi = angular_from_mhz(40.0);
    const double kappa = angular_from_mhz(40.0);

    {
        const LatticeSpec one{1, 20, false};
        const cplx alpha{2.0};
        const PureState psi0{oracles::kerr_evolution_exact(alpha, 0.0, 20)};
        for (double theta : {std::numbers::pi / 4, std::numbers::pi, 2 * std::numbers::pi}) {
            // RK4 phase error on the n ~ 15 levels exceeds 1e-8 at dt = 1e-11 by theta = 2 pi.
            const Vector sim = evolve_to(psi0, constant_params(one, chi, 0.0, theta / chi), 5e-12);
            const Vector exact = oracles::kerr_evolution_exact(alpha, theta, 20);
            std::ostringstream name;
            name << "kerr_exact_theta_" << std::setprecision(4) << theta;
            const double f = pure_overlap(sim, exact);
            lines.push_back({name.str(), f, 1.0 - 1e-8, f >= 1.0 - 1e-8});
        }
        const Vector cat_sim = evolve_to(psi0, constant_params(one, chi, 0.0, std::numbers::pi / chi));
        const double f = pure_overlap(cat_sim, kerr_cat_reference(alpha, 20));
        lines.push_back({"kerr_cat_reference", f, 1.0 - 1e-6, f >= 1.0 - 1e-6});
    }
    {
        const LatticeSpec two{2, 20, false};
        const std::array<cplx, 2> in{cplx(1.2, 0.3), cplx(-0.4, 0.9)};
        const oracles::CoherentSuperposition product{{cplx{1.0}, {in[0], in[1]}}};
        const PureState psi0 = oracles::to_state(product, two);
        for (double theta : {std::numbers::pi / 8, std::numbers::pi / 4, std::numbers::pi / 2}) {
            const Vector sim = evolve_to(psi0, constant_params(two, 0.0, kappa, theta / kappa));
            const PureState exact = oracles::to_state(oracles::beamsplitter_exact(product, theta), two);
            std::ostringstream name;
            name << "beamsplitter_theta_" << std::setprecision(4) << theta;
            const double f = pure_overlap(sim, exact.amplitudes);
            lines.push_back({name.str(), f, 1.0 - 1e-6, f >= 1.0 - 1e-6});
        }
        const auto cat_in = oracles::cat_beamsplitter_input(cplx{std::numbers::sqrt2});
        const Vector sim = evolve_to(oracles::to_state(cat_in, two),
                                     constant_params(two, 0.0, kappa, std::numbers::pi / 4 / kappa));
        const PureState exact = oracles::to_state(oracles::beamsplitter_exact(cat_in, std::numbers::pi / 4), two);
        const double f = pure_overlap(sim, exact.amplitudes);
        lines.push_back({"cat_beamsplitter_branchwise", f, 1.0 - 1e-6, f >= 1.0 - 1e-6});
    }
    {
        const LatticeSpec two{2, 1, false};
        Vector v = Vector::Zero(4);
        v[two.index_of({1, 0})] = 1.0;
        const double kt = 0.7;
        const Vector sim = evolve_to(PureState{v}, constant_params(two, 0.0, kappa, kt / kappa));
        const double p2 = std::norm(sim[two.index_of({0, 1})]);
        const double err = std::abs(p2 - std::sin(kt) * std::sin(kt));
        lines.push_back({"rabi_single_particle", err, 1e-8, err <= 1e-8});
    }
    {
        const auto w = oracles::exact_ground_state(2, 6, 0.01);
        const double ow = std::sqrt(oracles::projection_weight(w.ground_space, oracles::w_sector_state(w.basis, 2)));
        lines.push_back({"ground_state_w_overlap", ow, 0.99, ow >= 0.99});
        const auto s = oracles::exact_ground_state(2, 6, 10.0);
        const double os =
            std::sqrt(oracles::projection_weight(s.ground_space, oracles::superfluid_sector_state(s.basis, 2)));
        lines.push_back({"ground_state_superfluid_overlap", os, 0.99, os >= 0.99});
    }
    {
        const CoherenceBudget budget;
        const double frac = coherence_fraction(cplx{std::sqrt(10.0)}, budget);
        lines.push_back({"coherence_fraction_alpha_sq_10", frac, 0.6, frac > 0.6});
    }
    {
        std::mt19937_64 rng(get<std::uint64_t>(config, "seed"));
        std::uniform_int_distribution<int> dim_dist(2, 16);
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const int d = dim_dist(rng);
            const auto rho = random_density(rng, d);
            const auto sigma = random_density(rng, d);
            const auto b = superfidelity_bounds(rho, sigma);
            const double f = uhlmann_fidelity(rho, sigma);
            worst = std::max({worst, b.lower - f, f - b.upper});
        }
        lines.push_back({"superfidelity_bracketing", worst, 1e-10, worst <= 1e-10});
    }

    json report = json::array();
    bool all = true;
    for (const auto& l : lines) {
        log << (l.pass ? "PASS " : "FAIL ") << l.name << " value=" << std::setprecision(12) << l.value
            << " threshold=" << l.threshold << "\n";
        report.push_back({{"name", l.name}, {"value", l.value}, {"threshold", l.threshold}, {"pass", l.pass}});
        all = all && l.pass;
    }
    const auto report_path = out_dir / get<std::string>(config, "output.report");
    {
        std::ofstream out(report_path);
        out << report.dump(2) << "\n";
    }
    write_manifest(out_dir / get<std::string>(config, "output.manifest"), config,
                   {{"report", report_path.filename().string()}}, {{"all_pass", all}});
    return all ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

int cmd_coherence_budget(const json& config, const std::filesystem::path& out_dir, std::ostream& log) {
    CoherenceBudget b;
    b.dt1 = get<double>(config, "coherence.dt1_us") * 1e-6;
    b.dt2 = get<double>(config, "coherence.dt2_us") * 1e-6;
    b.dt3 = get<double>(config, "coherence.dt3_us") * 1e-6;
    b.dt4 = get<double>(config, "coherence.dt4_us") * 1e-6;
    b.dt5a = get<double>(config, "coherence.dt5a_us") * 1e-6;
    b.dt5b = get<double>(config, "coherence.dt5b_us") * 1e-6;
    b.t1_eff = get<double>(config, "coherence.t1_eff_us") * 1e-6;
    b.tphi_eff = get<double>(config, "coherence.tphi_eff_us") * 1e-6;
    b.gamma_sum_5a = 2.0 / (get<double>(config, "coherence.t0n_5a_us") * 1e-6);
    b.gamma_sum_5b = 2.0 / (get<double>(config, "coherence.t0n_5b_us") * 1e-6);
    b.n_terms = get<int>(config, "coherence.n_terms");
    b.validate();
    const auto sweep = coherence_sweep(get<double>(config, "coherence.alpha_min"),
                                       get<double>(config, "coherence.alpha_max"),
                                       get<int>(config, "coherence.points"), b);
    const auto path = out_dir / get<std::string>(config, "output.coherence");
    bool monotone = true;
    {
        auto out = open_output(path);
        out << "alpha_abs,fraction\n";
        for (std::size_t k = 0; k < sweep.size(); ++k) {
            out << sweep[k].alpha_abs << "," << sweep[k].fraction << "\n";
            if (k > 0 && sweep[k].fraction > sweep[k - 1].fraction) {
                monotone = false;
            }
        }
    }
    const double at10 = coherence_fraction(cplx{std::sqrt(10.0)}, b);
    log << "coherence fraction at |alpha|^2=10: " << at10 << (monotone ? ", sweep monotone\n" : ", sweep NOT monotone\n");
    write_manifest(out_dir / get<std::string>(config, "output.manifest"), config,
                   {{"coherence", path.filename().string()}},
                   {{"fraction_alpha_sq_10", at10}, {"monotone", monotone}});
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepRow {
    double tau;
    double energy;
    long degeneracy;
    double w_overlap;
    double superfluid_overlap;
    double fluctuations;
    cplx nn_correlator;
};

SweepRow ground_state_row(int sites, int total, double tau) {
    const auto g = oracles::exact_ground_state(sites, total, tau);
    SweepRow row{tau, g.energy, static_cast<long>(g.ground_space.cols()), 0.0, 0.0, 0.0, 0.0};
    row.w_overlap = std::sqrt(oracles::projection_weight(g.ground_space, oracles::w_sector_state(g.basis, sites)));
    row.superfluid_overlap =
        std::sqrt(oracles::projection_weight(g.ground_space, oracles::superfluid_sector_state(g.basis, sites)));
    std::map<std::vector<int>, std::size_t> lookup;
    for (std::size_t k = 0; k < g.basis.size(); ++k) {
        lookup.emplace(g.basis[k], k);
    }
    double mean = 0.0;
    double fact2 = 0.0;
    double corr = 0.0;
    for (std::size_t k = 0; k < g.basis.size(); ++k) {
        const double a = g.amplitudes[static_cast<Eigen::Index>(k)];
        const int n0 = g.basis[k][0];
        mean += a * a * n0;
        fact2 += a * a * n0 * (n0 - 1);
        if (sites >= 2 && g.basis[k][1] > 0) {
            auto target = g.basis[k];
            target[1] -= 1;
            target[0] += 1;
            corr += g.amplitudes[static_cast<Eigen::Index>(lookup.at(target))] * a *
                    std::sqrt(static_cast<double>(g.basis[k][1]) * target[0]);
        }
    }
    row.fluctuations = fact2 - mean * mean;
    row.nn_correlator = corr;
    return row;
}

int cmd_ground_state_sweep(const json& config, const std::filesystem::path& out_dir, std::ostream& log) {
    const int sites = get<int>(config, "sweep.sites");
    const int total = get<int>(config, "sweep.total");
    const auto taus = get<std::vector<double>>(config, "sweep.taus");
    if (sites < 1 || total < 2 || taus.empty()) {
        throw ConfigError("sweep needs sites >= 1, total >= 2 and at least one tau");
    }
    for (double t : taus) {
        if (!(t >= 0.0)) {
            throw ConfigError("sweep.taus must be non-negative");
        }
    }
    oracles::sector_basis(sites, total);  // size check before fanning out

    std::vector<SweepRow> rows(taus.size());
    std::vector<std::string> errors(taus.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < taus.size(); k = next++) {
            try {
                rows[k] = ground_state_row(sites, total, taus[k]);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    const int n_workers = std::min<int>(worker_count(), static_cast<int>(taus.size()));
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (!e.empty()) {
            throw std::runtime_error("ground-state sweep failed: " + e);
        }
    }
    const auto path = out_dir / get<std::string>(config, "output.sweep");
    {
        auto out = open_output(path);
        out << "tau,energy,degeneracy,w_overlap,superfluid_overlap,number_fluctuations,corr_re\n";
        for (const auto& r : rows) {
            out << r.tau << "," << r.energy << "," << r.degeneracy << "," << r.w_overlap << ","
                << r.superfluid_overlap << "," << r.fluctuations << "," << r.nn_correlator.real() << "\n";
        }
    }
    log << "ground-state sweep: " << rows.size() << " points, M=" << sites << ", N=" << total << ", "
        << n_workers << " worker(s)\n";
    write_manifest(out_dir / get<std::string>(config, "output.manifest"), config,
                   {{"sweep", path.filename().string()}}, {{"points", rows.size()}});
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_wigner(const json& config, const std::filesystem::path& out_dir, std::ostream& log) {
    const int cutoff = get<int>(config, "wigner.state_cutoff");
    const std::string kind = get<std::string>(config, "wigner.state");
    const cplx alpha = alpha_from(config);
    Vector psi;
    if (kind == "vacuum") {
        psi = coherent_state(0.0, cutoff);
    } else if (kind == "coherent") {
        psi = coherent_state(alpha, cutoff);
    } else if (kind == "cat") {
        psi = kerr_cat_reference(alpha, cutoff);
    } else if (kind == "fock") {
        const int n = get<int>(config, "wigner.fock_n");
        if (n < 0 || n > cutoff) {
            throw ConfigError("wigner.fock_n must lie in [0, state_cutoff]");
        }
        psi = Vector::Zero(cutoff + 1);
        psi[n] = 1.0;
    } else {
        throw ConfigError("wigner.state must be vacuum, coherent, cat or fock");
    }
    const auto grid = wigner(DensityMatrix::from_pure(PureState{psi}), wigner_spec_from(config));
    const auto path = out_dir / get<std::string>(config, "output.wigner");
    write_wigner_csv(path, grid);
    if (!grid.contained) {
        log << "warning: Wigner window holds less than 95% of the state\n";
    }
    log << "wigner: " << kind << " state, integral " << grid.integral << "\n";
    write_manifest(out_dir / get<std::string>(config, "output.manifest"), config,
                   {{"wigner", path.filename().string()}},
                   {{"integral", grid.integral}, {"min", grid.values.minCoeff()}, {"max", grid.values.maxCoeff()}});
    return kExitOk;
}

}  // namespace

int run(const json& config, const std::filesystem::path& out_dir, std::ostream& log) {
    const std::string command = get<std::string>(config, "command");
    try {
        std::filesystem::create_directories(out_dir);
        if (command == "run-protocol") return cmd_run_protocol(config, out_dir, log);
        if (command == "oracle-check") return cmd_oracle_check(config, out_dir, log);
        if (command == "coherence-budget") return cmd_coherence_budget(config, out_dir, log);
        if (command == "ground-state-sweep") return cmd_ground_state_sweep(config, out_dir, log);
        if (command == "wigner") return cmd_wigner(config, out_dir, log);
    } catch (const NumericalAbort& e) {
        log << "numerical abort: " << e.what() << "\n";
        return kExitNumericalAbort;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const std::out_of_range& e) {
        throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown command '" + command +
                      "' (expected run-protocol, oracle-check, coherence-budget, ground-state-sweep or wigner)");
}

int main_entry(int argc, char** argv) {
    CLI::App app{"kerrlat: Kerr-lattice entangled coherent state simulator"};
    std::string config_path;
    std::string out_dir = "kerrlat_out";
    std::vector<std::string> overrides;
    std::string command;
    app.add_option("command", command,
                   "run-protocol | oracle-check | coherence-budget | ground-state-sweep | wigner (overrides config)");
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--override", overrides, "Dotted key=value override (repeatable)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }
    try {
        if (!command.empty()) {
            overrides.insert(overrides.begin(), "command=" + command);
        }
        std::optional<std::filesystem::path> file;
        if (!config_path.empty()) {
            file = config_path;
        }
        const json config = resolve_config(file, overrides);
        return run(config, out_dir, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

}  // namespace kerrlat::cli
