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

#pragma once

#include <array>
#include <cmath>
#include <string_view>

#include "qbroadcast/densecx.h"

namespace qbroadcast {

/// Lower end of the admissible machine parameter, 1/2 - 1/(2 sqrt 2) (where eta = 1/sqrt 2).
inline const double kXiMin = 0.5 - 1.0 / (2.0 * std::sqrt(2.0));
inline constexpr double kXiMax = 0.5;
/// The optimal symmetric 1->2 machine.
inline constexpr double kXiOptimal = 1.0 / 6.0;
inline constexpr double kXiSlack = 1e-12;

/// The cloning machine parameter xi with eta = 1 - 2 xi.
///
/// `make` enforces kXiMin <= xi <= kXiMax (with kXiSlack at both ends). `analysis_only` skips the
/// range check so closed-form criteria can be probed outside the protocol's range; the flag
/// travels with the value.
class ClonerParameter {
   public:
    static ClonerParameter make(double xi);
    static ClonerParameter analysis_only(double xi);

    double xi() const {
        return xi_;
    }
    double eta() const {
        return eta_;
    }
    bool is_analysis_only() const {
        return analysis_only_;
    }

   private:
    ClonerParameter(double xi, bool analysis_only) : xi_(xi), eta_(1 - 2 * xi), analysis_only_(analysis_only) {
    }
    double xi_;
    double eta_;
    bool analysis_only_;
};

enum class MachineKind {
    /// Two-dimensional machine with orthonormal |up>, |down> exactly as the transformation is written.
    Literal2D,
    /// Four machine vectors Q0, Y0, Q1, Y1 fixed only through their inner products.
    AbstractBH,
};

std::string_view machine_kind_name(MachineKind kind);

/// Inner products of (Q0, Y0, Q1, Y1), in that order.
using GramMatrix = std::array<std::array<double, 4>, 4>;

GramMatrix gram_matrix(const ClonerParameter &p);

/// Columns are Q0, Y0, Q1, Y1 as vectors in a 4-dimensional machine space, with
/// column_i^dagger column_j = gram_matrix(p)[i][j]. Throws GramNotPSD when the Gram matrix has
/// an eigenvalue below -1e-10 (xi below 1/6).
ComplexMatrix abstract_machine_vectors(const ClonerParameter &p);

/// 8x2 isometry on factors (a, b, x) with x two-dimensional (index 0 = up, 1 = down):
///   |0> -> sqrt(eta)|00>|up>   + sqrt(2 xi)|+>|down>
///   |1> -> sqrt(eta)|11>|down> + sqrt(2 xi)|+>|up>
/// where |+> = (|01> + |10>)/sqrt 2.
ComplexMatrix literal_isometry(const ClonerParameter &p);

/// 16x2 isometry on factors (a, b, m) with m four-dimensional:
///   |0> -> |00>Q0 + (|01> + |10>)Y0,   |1> -> |11>Q1 + (|01> + |10>)Y1.
ComplexMatrix abstract_isometry(const ClonerParameter &p);

/// Isometry of the requested kind together with the (a, b, machine) layout of its output.
struct MachineIsometry {
    ComplexMatrix map;
    TensorLayout layout;
};
MachineIsometry machine_isometry(const ClonerParameter &p, MachineKind kind);

/// Two-clone state on (a, b) after tracing out the machine. `input` must be a 2x2 density operator.
DensityOperator clone_density(const DensityOperator &input, const ClonerParameter &p, MachineKind kind);

/// Single-clone reduction (clone a) of clone_density.
DensityOperator single_clone(const DensityOperator &input, const ClonerParameter &p, MachineKind kind);

/// <psi| rho_a |psi> for a normalized pure input.
double clone_fidelity(std::span<const Complex> psi, const ClonerParameter &p, MachineKind kind);

struct UniversalityReport {
    double min_fidelity;
    double max_fidelity;
    double spread;
    size_t samples;
};

/// Fidelity range over a Fibonacci sweep of `sample_count` Bloch-sphere points plus the six axis
/// states. Deterministic; no seed involved.
UniversalityReport universality_report(const ClonerParameter &p, MachineKind kind, size_t sample_count);

/// Pure qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
std::array<Complex, 2> bloch_state(double theta, double phi);

}  // namespace qbroadcast
