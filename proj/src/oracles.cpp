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

#include "kerrlat/oracles.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace kerrlat::oracles {

namespace {

// <n|alpha> without truncation renormalization, via log-gamma so large n stays finite.
cplx coherent_amplitude(cplx alpha, int n) {
    const double r = std::abs(alpha);
    if (r == 0.0) {
        return n == 0 ? cplx{1.0} : cplx{0.0};
    }
    const double log_mag = -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
    return std::polar(std::exp(log_mag), n * std::arg(alpha));
}

}  // namespace

Vector kerr_evolution_exact(cplx alpha, double theta, int cutoff) {
    if (cutoff < 1) {
        throw std::invalid_argument("cutoff must be >= 1");
    }
    Vector v(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) {
        const double phase = theta * 0.5 * static_cast<double>(n) * (n - 1);
        v[n] = coherent_amplitude(alpha, n) * std::polar(1.0, phase);
    }
    return v / v.norm();
}

std::array<cplx, 2> beamsplitter_exact(std::array<cplx, 2> alphas, double theta) {
    const double c = std::cos(theta);
    const cplx is = kI * std::sin(theta);
    return {c * alphas[0] + is * alphas[1], is * alphas[0] + c * alphas[1]};
}

CoherentSuperposition beamsplitter_exact(const CoherentSuperposition& input, double theta) {
    CoherentSuperposition out;
    out.reserve(input.size());
    for (const auto& branch : input) {
        if (branch.amplitudes.size() != 2) {
            throw std::invalid_argument("beamsplitter acts on two modes");
        }
        const auto rotated = beamsplitter_exact({branch.amplitudes[0], branch.amplitudes[1]}, theta);
        out.push_back({branch.weight, {rotated[0], rotated[1]}});
    }
    return out;
}

PureState to_state(const CoherentSuperposition& superposition, const LatticeSpec& lattice) {
    lattice.validate();
    const std::size_t dim = lattice.dimension();
    Vector total = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (const auto& branch : superposition) {
        if (branch.amplitudes.size() != static_cast<std::size_t>(lattice.sites)) {
            throw std::invalid_argument("branch has the wrong number of modes");
        }
        for (std::size_t idx = 0; idx < dim; ++idx) {
            cplx a = branch.weight;
            for (int j = 0; j < lattice.sites && a != 0.0; ++j) {
                a *= coherent_amplitude(branch.amplitudes[static_cast<std::size_t>(j)], lattice.occupation(idx, j));
            }
            total[static_cast<Eigen::Index>(idx)] += a;
        }
    }
    const double n = total.norm();
    if (n == 0.0) {
        throw std::invalid_argument("coherent superposition vanishes");
    }
    return PureState{total / n};
}

CoherentSuperposition cat_beamsplitter_input(cplx alpha) {
    const double s = 1.0 / std::numbers::sqrt2;
    return {{s * std::polar(1.0, -std::numbers::pi / 4), {kI * alpha, -alpha}},
            {s * std::polar(1.0, std::numbers::pi / 4), {-kI * alpha, -alpha}}};
}

// ---------------------------------------------------------------------------

std::vector<std::vector<int>> sector_basis(int sites, int total) {
    if (sites < 1 || total < 0) {
        throw std::invalid_argument("sector needs M >= 1 and N >= 0");
    }
    std::vector<std::vector<int>> basis;
    std::vector<int> occ(static_cast<std::size_t>(sites), 0);
    // Enumerate compositions in lexicographic order by recursive fill.
    auto fill = [&](auto&& self, int site, int remaining) -> void {
        if (site == sites - 1) {
            occ[static_cast<std::size_t>(site)] = remaining;
            basis.push_back(occ);
            if (basis.size() > kMaxSectorDimension) {
                throw std::length_error("sector dimension exceeds " + std::to_string(kMaxSectorDimension));
            }
            return;
        }
        for (int n = 0; n <= remaining; ++n) {
            occ[static_cast<std::size_t>(site)] = n;
            self(self, site + 1, remaining - n);
        }
    };
    fill(fill, 0, total);
    return basis;
}

Eigen::MatrixXd sector_hamiltonian(const std::vector<std::vector<int>>& basis, double chi, double kappa,
                                   bool periodic) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    if (dim == 0) {
        throw std::invalid_argument("empty sector");
    }
    const int sites = static_cast<int>(basis.front().size());
    std::map<std::vector<int>, Eigen::Index> lookup;
    for (Eigen::Index k = 0; k < dim; ++k) {
        lookup.emplace(basis[static_cast<std::size_t>(k)], k);
    }
    std::vector<std::pair<int, int>> links;
    for (int j = 0; j + 1 < sites; ++j) {
        links.emplace_back(j, j + 1);
    }
    if (periodic && sites > 2) {
        links.emplace_back(sites - 1, 0);
    }

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const auto& occ = basis[static_cast<std::size_t>(k)];
        for (int n : occ) {
            h(k, k) -= 0.5 * chi * n * (n - 1);
        }
        // -kappa c_i^dag c_j and its conjugate, per link.
        for (const auto& [i, j] : links) {
            for (const auto& [to, from] : {std::pair{i, j}, std::pair{j, i}}) {
                const int nf = occ[static_cast<std::size_t>(from)];
                if (nf == 0) {
                    continue;
                }
                auto target = occ;
                target[static_cast<std::size_t>(from)] -= 1;
                target[static_cast<std::size_t>(to)] += 1;
                const double amp = std::sqrt(static_cast<double>(nf) * target[static_cast<std::size_t>(to)]);
                h(lookup.at(target), k) -= kappa * amp;
            }
        }
    }
    return h;
}

SectorGroundState exact_ground_state(int sites, int total, double tau) {
    if (total < 1) {
        throw std::invalid_argument("ground state needs N >= 1");
    }
    SectorGroundState out;
    out.basis = sector_basis(sites, total);
    // N = 1 has no Kerr energy and tau is undefined: use the hopping-only sector.
    const double chi = total == 1 ? 0.0 : 1.0;
    const double kappa = total == 1 ? 1.0 : tau * (total - 1);
    const Eigen::MatrixXd h = sector_hamiltonian(out.basis, chi, kappa);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("sector diagonalization failed");
    }
    const auto& evals = es.eigenvalues();
    out.energy = evals[0];
    out.amplitudes = es.eigenvectors().col(0);
    const double tol = 1e-10 * std::max(1.0, evals.cwiseAbs().maxCoeff());
    Eigen::Index count = 1;
    while (count < evals.size() && evals[count] - evals[0] <= tol) {
        ++count;
    }
    out.ground_space = es.eigenvectors().leftCols(count);
    return out;
}

Eigen::VectorXd superfluid_sector_state(const std::vector<std::vector<int>>& basis, int sites) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        int total = 0;
        double log_amp = 0.0;
        for (int n : basis[k]) {
            total += n;
            log_amp -= std::lgamma(n + 1.0);
        }
        log_amp += std::lgamma(total + 1.0) - total * std::log(static_cast<double>(sites));
        v[static_cast<Eigen::Index>(k)] = std::exp(0.5 * log_amp);
    }
    return v;
}

Eigen::VectorXd w_sector_state(const std::vector<std::vector<int>>& basis, int sites) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        int occupied = 0;
        for (int n : basis[k]) {
            occupied += n > 0 ? 1 : 0;
        }
        if (occupied == 1) {
            v[static_cast<Eigen::Index>(k)] = 1.0 / std::sqrt(static_cast<double>(sites));
        }
    }
    return v;
}

PureState embed_sector_state(const std::vector<std::vector<int>>& basis, const Eigen::VectorXd& amplitudes,
                             const LatticeSpec& lattice) {
    if (static_cast<std::size_t>(amplitudes.size()) != basis.size()) {
        throw std::invalid_argument("amplitude count does not match sector basis");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(lattice.dimension()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        v[static_cast<Eigen::Index>(lattice.index_of(basis[k]))] = amplitudes[static_cast<Eigen::Index>(k)];
    }
    return PureState{v};
}

double projection_weight(const Eigen::MatrixXd& space, const Eigen::VectorXd& v) {
    return (space.transpose() * v).squaredNorm();
}

}  // namespace kerrlat::oracles
