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

#include "kerrlat/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kerrlat {

void DampingModel::validate() const {
    if (!(t1_at_zero > 0 && t1_at_max > 0 && tphi_at_zero > 0 && tphi_at_max > 0)) {
        throw std::invalid_argument("damping time constants must be positive");
    }
    if (!(chi_max > 0)) {
        throw std::invalid_argument("damping model needs chi_max > 0");
    }
}

DampingModel DampingModel::scaled(double factor) const {
    DampingModel m = *this;
    m.t1_at_zero *= factor;
    m.t1_at_max *= factor;
    m.tphi_at_zero *= factor;
    m.tphi_at_max *= factor;
    return m;
}

DampingTimes damping_at(double chi, const DampingModel& model) {
    model.validate();
    const double slack = 1e-9 * model.chi_max;
    if (chi < -slack || chi > model.chi_max + slack) {
        throw std::out_of_range("chi outside [0, chi_max] for the damping model");
    }
    const double f = std::clamp(chi / model.chi_max, 0.0, 1.0);
    return {std::lerp(model.t1_at_zero, model.t1_at_max, f), std::lerp(model.tphi_at_zero, model.tphi_at_max, f)};
}

// ---------------------------------------------------------------------------

LindbladKernel::LindbladKernel(const LatticeOperators& ops) : ops_(ops) {}

void LindbladKernel::apply(const RealVector& h, std::span<const OffDiagonalTerm> off, std::span<const SiteRates> rates,
                           const Matrix& rho, Matrix& out) const {
    const Eigen::Index d = rho.rows();
    const int sites = ops_.lattice().sites;
    if (rho.cols() != d || h.size() != d || d != static_cast<Eigen::Index>(ops_.dimension())) {
        throw std::invalid_argument("Lindblad kernel: dimension mismatch");
    }
    if (rates.size() != static_cast<std::size_t>(sites)) {
        throw std::invalid_argument("Lindblad kernel: need one rate pair per site");
    }
    out.resize(d, d);

    // Anticommutator part of D[c]: -(gamma/2) (n_a + n_b) rho_ab.
    RealVector damp = RealVector::Zero(d);
    struct Dephasing {
        const double* n;
        double half_rate;
    };
    std::vector<Dephasing> dephasing;
    for (int j = 0; j < sites; ++j) {
        const auto& r = rates[static_cast<std::size_t>(j)];
        if (r.amplitude != 0.0) {
            damp += 0.5 * r.amplitude * ops_.number(j);
        }
        if (r.dephasing != 0.0) {
            dephasing.push_back({ops_.number(j).data(), 0.5 * r.dephasing});
        }
    }

    const cplx* rho_data = rho.data();
    for (Eigen::Index b = 0; b < d; ++b) {
        const cplx* rb = rho_data + b * d;
        cplx* ob = out.data() + b * d;
        const double hb = h[b];
        const double db = damp[b];

        // Diagonal Hamiltonian, anticommutator of D and all of G (which is
        // diagonal in the Fock basis: -(gamma/2)(n_a - n_b)^2 rho_ab).
        if (dephasing.empty()) {
            for (Eigen::Index a = 0; a < d; ++a) {
                ob[a] = cplx(-(damp[a] + db), hb - h[a]) * rb[a];
            }
        } else {
            for (Eigen::Index a = 0; a < d; ++a) {
                double g = damp[a] + db;
                for (const auto& dp : dephasing) {
                    const double diff = dp.n[a] - dp.n[b];
                    g += dp.half_rate * diff * diff;
                }
                ob[a] = cplx(-g, hb - h[a]) * rb[a];
            }
        }

        for (const auto& term : off) {
            const auto& op = *term.op;
            const auto* outer = op.outerIndexPtr();
            const auto* inner = op.innerIndexPtr();
            const cplx* val = op.valuePtr();
            const cplx left = -kI * term.coefficient;
            for (Eigen::Index a = 0; a < d; ++a) {
                cplx s{};
                for (auto p = outer[a]; p < outer[a + 1]; ++p) {
                    s += val[p] * rb[inner[p]];
                }
                ob[a] += left * s;
            }
            const auto& opt = *term.op_transpose;
            const auto* t_outer = opt.outerIndexPtr();
            const auto* t_inner = opt.innerIndexPtr();
            const cplx* t_val = opt.valuePtr();
            const cplx right = kI * term.coefficient;
            for (auto p = t_outer[b]; p < t_outer[b + 1]; ++p) {
                const cplx w = right * t_val[p];
                const cplx* rk = rho_data + t_inner[p] * d;
                for (Eigen::Index a = 0; a < d; ++a) {
                    ob[a] += w * rk[a];
                }
            }
        }

        // Jump part of D: gamma * c rho c^dag.
        for (int j = 0; j < sites; ++j) {
            const double g1 = rates[static_cast<std::size_t>(j)].amplitude;
            if (g1 == 0.0) {
                continue;
            }
            const auto& c = ops_.lowering(j).storage();
            const auto* outer = c.outerIndexPtr();
            const auto* inner = c.innerIndexPtr();
            const cplx* val = c.valuePtr();
            for (auto p = outer[b]; p < outer[b + 1]; ++p) {
                const cplx w = g1 * std::conj(val[p]);
                const cplx* rl = rho_data + inner[p] * d;
                for (Eigen::Index a = 0; a < d; ++a) {
                    cplx s{};
                    for (auto q = outer[a]; q < outer[a + 1]; ++q) {
                        s += val[q] * rl[inner[q]];
                    }
                    ob[a] += w * s;
                }
            }
        }
    }
}

void LindbladKernel::apply_pure(const RealVector& h, std::span<const OffDiagonalTerm> off, const Vector& psi,
                                Vector& out) const {
    const Eigen::Index d = psi.size();
    if (h.size() != d) {
        throw std::invalid_argument("Schrodinger kernel: dimension mismatch");
    }
    out.resize(d);
    for (Eigen::Index a = 0; a < d; ++a) {
        out[a] = h[a] * psi[a];
    }
    for (const auto& term : off) {
        const auto& op = *term.op;
        const auto* outer = op.outerIndexPtr();
        const auto* inner = op.innerIndexPtr();
        const cplx* val = op.valuePtr();
        for (Eigen::Index a = 0; a < d; ++a) {
            cplx s{};
            for (auto p = outer[a]; p < outer[a + 1]; ++p) {
                s += val[p] * psi[inner[p]];
            }
            out[a] += term.coefficient * s;
        }
    }
    out *= -kI;
}

Matrix lindblad_rhs(const DensityMatrix& rho, const SparseOperator& hamiltonian, const LatticeOperators& ops,
                    std::span<const SiteRates> rates) {
    if (rho.dimension() != hamiltonian.dimension() || rho.dimension() != ops.dimension()) {
        throw std::invalid_argument("lindblad_rhs: dimension mismatch");
    }
    auto [diag, offdiag] = hamiltonian.split_diagonal();
    if (diag.imag().cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, diag.real().cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("lindblad_rhs: Hamiltonian has a complex diagonal");
    }
    const RealVector h = diag.real();
    const SparseOperator::Storage transposed = offdiag.storage().transpose();
    const LindbladKernel::OffDiagonalTerm term{&offdiag.storage(), &transposed, cplx{1.0}};
    LindbladKernel kernel(ops);
    Matrix out;
    kernel.apply(h, std::span(&term, offdiag.nnz() > 0 ? 1 : 0), rates, rho.values, out);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kTimeSlack = 1e-9;

/// Coefficients of the chain generator at one instant.
struct Stage {
    RealVector h;
    std::vector<LindbladKernel::OffDiagonalTerm> off;
    std::vector<SiteRates> rates;
    double chi = 0.0;
};

class ChainGenerator {
  public:
    ChainGenerator(const AbhParams& params, std::optional<DampingModel> damping)
        : params_(params), ops_(params.lattice), kernel_(ops_), damping_(std::move(damping)) {
        params_.validate();
        if (damping_) {
            damping_->validate();
        }
        for (std::size_t l = 0; l < ops_.links().size(); ++l) {
            transposes_.emplace_back(ops_.hopping(l).storage().transpose());
        }
    }

    const LatticeOperators& ops() const { return ops_; }
    const LindbladKernel& kernel() const { return kernel_; }

    void fill(double t_hamiltonian, double t_rates, Stage& s) const {
        s.chi = params_.chi(t_hamiltonian);
        s.h = ops_.diagonal(s.chi, params_.site_offsets);
        s.off.clear();
        for (std::size_t l = 0; l < ops_.links().size(); ++l) {
            const double k = params_.kappa[l](t_hamiltonian);
            if (k != 0.0) {
                s.off.push_back({&ops_.hopping(l).storage(), &transposes_[l], cplx{-k}});
            }
        }
        s.rates.assign(static_cast<std::size_t>(params_.lattice.sites), SiteRates{});
        if (damping_) {
            const double chi_r = t_rates == t_hamiltonian ? s.chi : params_.chi(t_rates);
            const auto times = damping_at(chi_r, *damping_);
            for (auto& r : s.rates) {
                r.amplitude = 1.0 / times.t1;
                r.dephasing = 1.0 / times.tphi;
            }
        }
    }

  private:
    const AbhParams& params_;
    LatticeOperators ops_;
    LindbladKernel kernel_;
    std::optional<DampingModel> damping_;
    std::vector<SparseOperator::Storage> transposes_;
};

struct StepPlan {
    double t0;
    double t1;
    long long steps;
    long long every;
};

StepPlan plan_steps(const AbhParams& params, const EvolveOptions& options) {
    if (!(options.dt > 0.0)) {
        throw std::invalid_argument("time step must be positive");
    }
    const double t0 = std::isnan(options.t_start) ? params.t_begin() : options.t_start;
    const double t1 = std::isnan(options.t_end) ? params.t_end() : options.t_end;
    if (!(t1 > t0)) {
        throw std::invalid_argument("empty integration window");
    }
    const double span = std::max(params.t_end() - params.t_begin(), 1e-30);
    if (t0 < params.t_begin() - kTimeSlack * span || t1 > params.t_end() + kTimeSlack * span) {
        std::ostringstream msg;
        msg << "integration window [" << t0 << ", " << t1 << "] exceeds schedule domain [" << params.t_begin() << ", "
            << params.t_end() << "]";
        throw std::out_of_range(msg.str());
    }
    const auto steps = std::max<long long>(1, static_cast<long long>(std::ceil((t1 - t0) / options.dt - 1e-6)));
    const auto every =
        std::max<long long>(1, static_cast<long long>(std::llround(options.checkpoint_interval / options.dt)));
    return {t0, t1, steps, every};
}

double step_time(const StepPlan& plan, long long i, double dt) {
    return i >= plan.steps ? plan.t1 : plan.t0 + static_cast<double>(i) * dt;
}

}  // namespace

DensityEvolution evolve_density(const DensityMatrix& rho0, const AbhParams& params,
                                const std::optional<DampingModel>& damping, const EvolveOptions& options,
                                const DensityObserver& observer) {
    ChainGenerator gen(params, damping);
    if (rho0.dimension() != gen.ops().dimension() || rho0.values.cols() != rho0.values.rows()) {
        throw std::invalid_argument("initial density matrix does not match lattice");
    }
    const StepPlan plan = plan_steps(params, options);
    const double trace0 = rho0.trace().real();

    DensityEvolution result;
    DensityMatrix rho = rho0;
    const Eigen::Index d = rho.values.rows();
    Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
    Stage s1, s2, s3;

    auto record = [&](double t) {
        CheckpointRecord rec;
        rec.t = t;
        rec.chi = params.chi(t);
        rec.trace_re = rho.trace().real();
        rec.purity = rho.purity();
        if (observer) {
            observer(t, rho, rec);
        }
        result.trajectory.times.push_back(t);
        result.trajectory.records.push_back(std::move(rec));
    };

    record(plan.t0);
    for (long long i = 0; i < plan.steps; ++i) {
        const double t = step_time(plan, i, options.dt);
        const double t_next = step_time(plan, i + 1, options.dt);
        const double h = t_next - t;
        const double tm = t + 0.5 * h;

        gen.fill(t, t, s1);
        gen.fill(tm, options.freeze_rates_per_step ? t : tm, s2);
        gen.fill(t_next, options.freeze_rates_per_step ? t : t_next, s3);
        if (options.freeze_rates_per_step) {
            s2.rates = s1.rates;
            s3.rates = s1.rates;
        }

        const auto& kernel = gen.kernel();
        kernel.apply(s1.h, s1.off, s1.rates, rho.values, k1);
        tmp.noalias() = rho.values + (0.5 * h) * k1;
        kernel.apply(s2.h, s2.off, s2.rates, tmp, k2);
        tmp.noalias() = rho.values + (0.5 * h) * k2;
        kernel.apply(s2.h, s2.off, s2.rates, tmp, k3);
        tmp.noalias() = rho.values + h * k3;
        kernel.apply(s3.h, s3.off, s3.rates, tmp, k4);
        rho.values += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        tmp = rho.values.adjoint();
        rho.values = 0.5 * (rho.values + tmp);

        const double tr = rho.trace().real();
        if (!std::isfinite(tr) || std::abs(tr - trace0) > options.trace_abort) {
            std::ostringstream msg;
            msg << "trace drifted to " << tr << " (start " << trace0 << ") at t=" << t_next
                << " s; reduce dt (currently " << options.dt << " s)";
            throw NumericalAbort(msg.str());
        }
        if ((i + 1) % plan.every == 0 || i + 1 == plan.steps) {
            // Diagonal-only dynamics keep the trace exact while coherences overflow.
            if (!rho.values.allFinite()) {
                std::ostringstream msg;
                msg << "non-finite density matrix at t=" << t_next << " s; reduce dt (currently " << options.dt
                    << " s)";
                throw NumericalAbort(msg.str());
            }
            record(t_next);
        }
    }
    result.final_state = std::move(rho);
    return result;
}

PureEvolution evolve_pure(const PureState& psi0, const AbhParams& params, const EvolveOptions& options,
                          const PureObserver& observer) {
    ChainGenerator gen(params, std::nullopt);
    if (psi0.dimension() != gen.ops().dimension()) {
        throw std::invalid_argument("initial state does not match lattice");
    }
    const StepPlan plan = plan_steps(params, options);

    PureEvolution result;
    PureState psi = psi0;
    const Eigen::Index d = psi.amplitudes.size();
    Vector k1(d), k2(d), k3(d), k4(d), tmp(d);
    Stage s1, s2, s3;

    auto record = [&](double t) {
        CheckpointRecord rec;
        rec.t = t;
        rec.chi = params.chi(t);
        rec.trace_re = psi.amplitudes.squaredNorm();
        rec.purity = 1.0;
        if (observer) {
            observer(t, psi, rec);
        }
        result.trajectory.times.push_back(t);
        result.trajectory.records.push_back(std::move(rec));
    };

    record(plan.t0);
    for (long long i = 0; i < plan.steps; ++i) {
        const double t = step_time(plan, i, options.dt);
        const double t_next = step_time(plan, i + 1, options.dt);
        const double h = t_next - t;
        const double tm = t + 0.5 * h;

        gen.fill(t, t, s1);
        gen.fill(tm, tm, s2);
        gen.fill(t_next, t_next, s3);
        const auto& kernel = gen.kernel();
        kernel.apply_pure(s1.h, s1.off, psi.amplitudes, k1);
        tmp.noalias() = psi.amplitudes + (0.5 * h) * k1;
        kernel.apply_pure(s2.h, s2.off, tmp, k2);
        tmp.noalias() = psi.amplitudes + (0.5 * h) * k2;
        kernel.apply_pure(s2.h, s2.off, tmp, k3);
        tmp.noalias() = psi.amplitudes + h * k3;
        kernel.apply_pure(s3.h, s3.off, tmp, k4);
        psi.amplitudes += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double n = psi.amplitudes.norm();
        if (!std::isfinite(n) || std::abs(n - 1.0) > options.trace_abort) {
            std::ostringstream msg;
            msg << "norm drifted to " << n << " at t=" << t_next << " s; reduce dt (currently " << options.dt
                << " s)";
            throw NumericalAbort(msg.str());
        }
        psi.amplitudes /= n;
        if ((i + 1) % plan.every == 0 || i + 1 == plan.steps) {
            record(t_next);
        }
    }
    result.final_state = std::move(psi);
    return result;
}

}  // namespace kerrlat
