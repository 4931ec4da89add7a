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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qbroadcast {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Sized for the small operators used here (dimension <= 256).
///
/// All matrices share the lexicographic computational basis: for two qubits the row/column
/// order is |00>, |01>, |10>, |11>, with the leftmost factor most significant.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(size_t rows, size_t cols);
    ComplexMatrix(size_t rows, size_t cols, std::vector<Complex> entries);

    /// Builds a matrix from nested rows; every row must have the same length.
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    static ComplexMatrix identity(size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    /// Column vector |v>.
    static ComplexMatrix column(std::span<const Complex> v);
    /// |v><v|.
    static ComplexMatrix projector(std::span<const Complex> v);

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    bool is_square() const {
        return rows_ == cols_;
    }

    Complex &operator()(size_t r, size_t c) {
        return data_[r * cols_ + c];
    }
    const Complex &operator()(size_t r, size_t c) const {
        return data_[r * cols_ + c];
    }
    std::span<const Complex> entries() const {
        return data_;
    }
    std::span<Complex> entries() {
        return data_;
    }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    Complex trace() const;
    bool all_finite() const;
    /// max_{ij} |m_ij - conj(m_ji)|.
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scale);

    bool operator==(const ComplexMatrix &other) const = default;

    std::string str() const;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);

/// max_{ij} |a_ij - b_ij|; throws DimensionError on shape mismatch.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

/// Local dimensions of the tensor factors of a composite system, leftmost most significant.
struct TensorLayout {
    std::vector<size_t> factor_dims;

    size_t dimension() const;
    size_t num_factors() const {
        return factor_dims.size();
    }
    /// Throws DimensionError unless `m` is square with matching dimension.
    void check(const ComplexMatrix &m) const;
};

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

/// Reduced operator on the factors listed in `keep` (order of `keep` is ignored; kept
/// factors stay in layout order). Parallel over the output entries.
ComplexMatrix partial_trace(const ComplexMatrix &m, const TensorLayout &layout, std::span<const size_t> keep);

/// Transposes the indices of one tensor factor.
ComplexMatrix partial_transpose(const ComplexMatrix &m, const TensorLayout &layout, size_t subsystem);

/// Eigenvalues in ascending order. Throws PreconditionError if `m` is not Hermitian to 1e-12.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m);

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k pairs with values[k]
};
EigenSystem hermitian_eigensystem(const ComplexMatrix &m);

/// Singular values in descending order (square roots of the eigenvalues of m^dagger m).
std::vector<double> singular_values(const ComplexMatrix &m);

/// A validated state: square, Hermitian (1e-12), unit trace (1e-12), PSD (min eigenvalue >= -1e-10).
class DensityOperator {
   public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-12;
    static constexpr double kPsdTol = 1e-10;

    /// Throws PreconditionError with the failed condition.
    explicit DensityOperator(ComplexMatrix m);

    const ComplexMatrix &matrix() const {
        return m_;
    }
    size_t dimension() const {
        return m_.rows();
    }

   private:
    ComplexMatrix m_;
};

namespace serial {

/// Reference partial trace: walks every entry of `m`, decodes its multi-index and accumulates the
/// entries whose traced digits match. Kept for tests and benchmarks.
ComplexMatrix partial_trace(const ComplexMatrix &m, const TensorLayout &layout, std::span<const size_t> keep);

}  // namespace serial

}  // namespace qbroadcast
