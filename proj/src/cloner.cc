// Copyright 2026 The qbroadcast Authors
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

#include "qbroadcast/cloner.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qbroadcast/errors.h"

namespace qbroadcast {

namespace {

std::string fmt17(double v) {
    std::stringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

}  // namespace

ClonerParameter ClonerParameter::make(double xi) {
    if (!std::isfinite(xi)) {
        throw OutOfRange("machine parameter xi is not finite", kXiMin);
    }
    if (xi < kXiMin - kXiSlack) {
        throw OutOfRange("machine parameter xi=" + fmt17(xi) + " below lower bound " + fmt17(kXiMin), kXiMin);
    }
    if (xi > kXiMax + kXiSlack) {
        throw OutOfRange("machine parameter xi=" + fmt17(xi) + " above upper bound " + fmt17(kXiMax), kXiMax);
    }
    return ClonerParameter(xi, false);
}

ClonerParameter ClonerParameter::analysis_only(double xi) {
    if (!std::isfinite(xi)) {
        throw OutOfRange("machine parameter xi is not finite", kXiMin);
    }
    return ClonerParameter(xi, true);
}

std::string_view machine_kind_name(MachineKind kind) {
    switch (kind) {
        case MachineKind::Literal2D:
            return "Literal2D";
        case MachineKind::AbstractBH:
            return "AbstractBH";
    }
    return "?";
}

GramMatrix gram_matrix(const ClonerParameter &p) {
    double eta = p.eta();
    double xi = p.xi();
    GramMatrix g{};
    // Order: Q0, Y0, Q1, Y1.
    g[0][0] = eta;
    g[1][1] = xi;
    g[2][2] = eta;
    g[3][3] = xi;
    g[0][3] = g[3][0] = eta / 2;
    g[2][1] = g[1][2] = eta / 2;
    return g;
}

ComplexMatrix abstract_machine_vectors(const ClonerParameter &p) {
    GramMatrix g = gram_matrix(p);
    ComplexMatrix gm(4, 4);
    for (size_t r = 0; r < 4; r++) {
        for (size_t c = 0; c < 4; c++) {
            gm(r, c) = g[r][c];
        }
    }
    // G = V diag(lambda) V^T, so the columns of diag(sqrt lambda) V^T realize G.
    auto eig = hermitian_eigensystem(gm);
    double min_eig = eig.values.front();
    if (min_eig < -1e-10) {
        throw GramNotPSD(
            "no machine realizes the inner products at xi=" + fmt17(p.xi()) + " (Gram eigenvalue " + fmt17(min_eig) +
                ")",
            min_eig);
    }
    ComplexMatrix vectors(4, 4);
    for (size_t k = 0; k < 4; k++) {
        double s = std::sqrt(std::max(0.0, eig.values[k]));
        for (size_t c = 0; c < 4; c++) {
            vectors(k, c) = s * std::conj(eig.vectors(c, k));
        }
    }
    return vectors;
}

ComplexMatrix literal_isometry(const ClonerParameter &p) {
    // Row index = 4a + 2b + x.
    double keep = std::sqrt(p.eta());
    double spread = std::sqrt(p.xi());  // sqrt(2 xi) / sqrt(2) per |01>, |10> component
    ComplexMatrix v(8, 2);
    constexpr size_t up = 0, down = 1;
    v(0b000 + up, 0) = keep;
    v(0b010 + down, 0) = spread;
    v(0b100 + down, 0) = spread;
    v(0b110 + down, 1) = keep;
    v(0b010 + up, 1) = spread;
    v(0b100 + up, 1) = spread;
    return v;
}

ComplexMatrix abstract_isometry(const ClonerParameter &p) {
    ComplexMatrix machine = abstract_machine_vectors(p);
    ComplexMatrix v(16, 2);
    // Row index = 8a + 4b + m.
    for (size_t m = 0; m < 4; m++) {
        Complex q0 = machine(m, 0), y0 = machine(m, 1), q1 = machine(m, 2), y1 = machine(m, 3);
        v(0 * 4 + m, 0) = q0;
        v(1 * 4 + m, 0) = y0;
        v(2 * 4 + m, 0) = y0;
        v(3 * 4 + m, 1) = q1;
        v(1 * 4 + m, 1) = y1;
        v(2 * 4 + m, 1) = y1;
    }
    return v;
}

MachineIsometry machine_isometry(const ClonerParameter &p, MachineKind kind) {
    if (kind == MachineKind::Literal2D) {
        return {literal_isometry(p), TensorLayout{{2, 2, 2}}};
    }
    return {abstract_isometry(p), TensorLayout{{2, 2, 4}}};
}

namespace {

ComplexMatrix clone_pair_matrix(const DensityOperator &input, const ClonerParameter &p, MachineKind kind) {
    if (input.dimension() != 2) {
        throw DimensionError("cloner input must be a single qubit");
    }
    auto iso = machine_isometry(p, kind);
    ComplexMatrix full = iso.map * input.matrix() * iso.map.adjoint();
    const size_t keep[] = {0, 1};
    return partial_trace(full, iso.layout, keep);
}

}  // namespace

DensityOperator clone_density(const DensityOperator &input, const ClonerParameter &p, MachineKind kind) {
    return DensityOperator(clone_pair_matrix(input, p, kind));
}

DensityOperator single_clone(const DensityOperator &input, const ClonerParameter &p, MachineKind kind) {
    const size_t keep[] = {0};
    return DensityOperator(partial_trace(clone_pair_matrix(input, p, kind), TensorLayout{{2, 2}}, keep));
}

double clone_fidelity(std::span<const Complex> psi, const ClonerParameter &p, MachineKind kind) {
    if (psi.size() != 2) {
        throw DimensionError("clone_fidelity expects a qubit state");
    }
    double norm = std::norm(psi[0]) + std::norm(psi[1]);
    if (std::abs(norm - 1) > 1e-12) {
        throw PreconditionError("clone_fidelity input not normalized (norm^2 = " + fmt17(norm) + ")");
    }
    DensityOperator in(ComplexMatrix::projector(psi));
    ComplexMatrix rho = single_clone(in, p, kind).matrix();
    Complex f = 0;
    for (size_t r = 0; r < 2; r++) {
        for (size_t c = 0; c < 2; c++) {
            f += std::conj(psi[r]) * rho(r, c) * psi[c];
        }
    }
    return f.real();
}

std::array<Complex, 2> bloch_state(double theta, double phi) {
    return {Complex(std::cos(theta / 2), 0), std::polar(std::sin(theta / 2), phi)};
}

UniversalityReport universality_report(const ClonerParameter &p, MachineKind kind, size_t sample_count) {
    if (sample_count < 2) {
        throw PreconditionError("universality_report needs at least 2 samples");
    }
    constexpr double pi = std::numbers::pi;
    std::vector<std::array<Complex, 2>> states;
    states.reserve(sample_count + 6);
    states.push_back(bloch_state(0, 0));
    states.push_back(bloch_state(pi, 0));
    states.push_back(bloch_state(pi / 2, 0));
    states.push_back(bloch_state(pi / 2, pi));
    states.push_back(bloch_state(pi / 2, pi / 2));
    states.push_back(bloch_state(pi / 2, -pi / 2));
    const double golden_angle = pi * (3 - std::sqrt(5.0));
    for (size_t i = 0; i < sample_count; i++) {
        double z = 1 - 2 * (static_cast<double>(i) + 0.5) / static_cast<double>(sample_count);
        states.push_back(bloch_state(std::acos(z), golden_angle * static_cast<double>(i)));
    }

    UniversalityReport report{1, 0, 0, states.size()};
    for (const auto &psi : states) {
        double f = clone_fidelity(psi, p, kind);
        report.min_fidelity = std::min(report.min_fidelity, f);
        report.max_fidelity = std::max(report.max_fidelity, f);
    }
    report.spread = report.max_fidelity - report.min_fidelity;
    return report;
}

}  // namespace qbroadcast
