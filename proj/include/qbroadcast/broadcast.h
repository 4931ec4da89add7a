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

#include "qbroadcast/cloner.h"
#include "qbroadcast/densecx.h"

namespace qbroadcast {

/// alpha|00> + beta|11> with alpha, beta >= 0 and alpha^2 + beta^2 = 1. The sign of beta only flips
/// the sign of the |00><11| coherence, which no criterion here is sensitive to.
class EntangledInput {
   public:
    /// Throws PreconditionError unless 0 <= alpha <= 1.
    static EntangledInput from_alpha(double alpha);
    /// Throws PreconditionError unless 0 <= alpha_sq <= 1.
    static EntangledInput from_alpha_sq(double alpha_sq);

    double alpha() const {
        return alpha_;
    }
    double beta() const {
        return beta_;
    }
    double alpha_sq() const {
        return alpha_sq_;
    }
    /// alpha^2 and beta^2 exchanged; maps to the bit-flipped state.
    EntangledInput swapped() const;

   private:
    EntangledInput(double alpha_sq);
    double alpha_sq_;
    double alpha_;
    double beta_;
};

/// State of a cross pair (a_i, b_j), i != j:
///   diag(A, C, C, B) with A = alpha^2 eta + xi^2, B = beta^2 eta + xi^2, C = xi(1 - xi),
///   and D = alpha beta eta^2 on |00><11| and |11><00|.
/// No physicality restriction on xi beyond what ClonerParameter enforces.
DensityOperator nonlocal_state(const EntangledInput &in, const ClonerParameter &p);

/// State of a copy pair (a_i, b_i): alpha^2 eta|00><00| + beta^2 eta|11><11| + 2 xi|+><+|.
DensityOperator local_state(const EntangledInput &in, const ClonerParameter &p);

struct BroadcastOutputs {
    DensityOperator local;     // (a1, b1)
    DensityOperator nonlocal;  // (a1, b2)
    /// Largest entrywise difference between (a1,b1)/(a2,b2) and between (a1,b2)/(a2,b1).
    double symmetry_defect;
};

/// Factors of the global broadcast state, in order a1, b1, m1, a2, b2, m2.
inline const TensorLayout kBroadcastLayout{{2, 2, 4, 2, 2, 4}};

/// The 256-amplitude pure state obtained by applying the AbstractBH machine at each site to
/// alpha|00> + beta|11>. Throws GramNotPSD when xi < 1/6.
std::vector<Complex> broadcast_state_vector(const EntangledInput &in, const ClonerParameter &p);

/// |psi><psi| for the global state, filled in parallel.
ComplexMatrix broadcast_density(const EntangledInput &in, const ClonerParameter &p);

/// Independent route to the closed forms: build the global state, then trace down to each pair.
BroadcastOutputs oracle_broadcast(const EntangledInput &in, const ClonerParameter &p);

/// |psi><psi| written by rows in parallel; serial::outer_product is the plain double loop.
ComplexMatrix outer_product(std::span<const Complex> psi);

namespace serial {
ComplexMatrix outer_product(std::span<const Complex> psi);
}  // namespace serial

}  // namespace qbroadcast
