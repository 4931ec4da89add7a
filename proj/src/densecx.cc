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

#include "qbroadcast/densecx.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qbroadcast/errors.h"
#include "qbroadcast/parallel.h"

namespace qbroadcast {

ComplexMatrix::ComplexMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
}

ComplexMatrix::ComplexMatrix(size_t rows, size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw DimensionError(
            "ComplexMatrix: " + std::to_string(data_.size()) + " entries for shape " + std::to_string(rows) + "x" +
            std::to_string(cols));
    }
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    size_t r = rows.size();
    size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> data;
    data.reserve(r * c);
    for (const auto &row : rows) {
        if (row.size() != c) {
            throw DimensionError("ComplexMatrix::from_rows: ragged rows");
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(data));
}

ComplexMatrix ComplexMatrix::identity(size_t n) {
    ComplexMatrix m(n, n);
    for (size_t k = 0; k < n; k++) {
        m(k, k) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (size_t k = 0; k < diag.size(); k++) {
        m(k, k) = diag[k];
    }
    return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> v) {
    return ComplexMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::projector(std::span<const Complex> v) {
    ComplexMatrix m(v.size(), v.size());
    for (size_t r = 0; r < v.size(); r++) {
        for (size_t c = 0; c < v.size(); c++) {
            m(r, c) = v[r] * std::conj(v[c]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) {
        throw DimensionError("trace of non-square matrix");
    }
    Complex t = 0;
    for (size_t k = 0; k < rows_; k++) {
        t += (*this)(k, k);
    }
    return t;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](Complex z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

double ComplexMatrix::hermiticity_defect() const {
    if (!is_square()) {
        throw DimensionError("hermiticity of non-square matrix");
    }
    double worst = 0;
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = r; c < cols_; c++) {
            worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return worst;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    return is_square() && hermiticity_defect() <= tol;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("matrix sum shape mismatch");
    }
    for (size_t k = 0; k < data_.size(); k++) {
        data_[k] += other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("matrix difference shape mismatch");
    }
    for (size_t k = 0; k < data_.size(); k++) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scale) {
    for (auto &z : data_) {
        z *= scale;
    }
    return *this;
}

std::string ComplexMatrix::str() const {
    std::stringstream ss;
    ss.precision(6);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            Complex z = (*this)(r, c);
            ss << (c ? " " : "") << z.real();
            if (z.imag() != 0) {
                ss << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
            }
        }
        ss << "\n";
    }
    return ss.str();
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
    a -= b;
    return a;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw DimensionError(
            "matrix product shape mismatch: " + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()));
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (size_t r = 0; r < a.rows(); r++) {
        for (size_t k = 0; k < a.cols(); k++) {
            Complex ark = a(r, k);
            if (ark == Complex{0, 0}) {
                continue;
            }
            for (size_t c = 0; c < b.cols(); c++) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix m) {
    m *= scale;
    return m;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff shape mismatch");
    }
    double worst = 0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (size_t k = 0; k < ea.size(); k++) {
        worst = std::max(worst, std::abs(ea[k] - eb[k]));
    }
    return worst;
}

size_t TensorLayout::dimension() const {
    return std::accumulate(factor_dims.begin(), factor_dims.end(), size_t{1}, std::multiplies<>());
}

void TensorLayout::check(const ComplexMatrix &m) const {
    if (factor_dims.empty() || std::find(factor_dims.begin(), factor_dims.end(), 0) != factor_dims.end()) {
        throw DimensionError("tensor layout needs at least one factor and positive factor dimensions");
    }
    if (!m.is_square() || m.rows() != dimension()) {
        throw DimensionError(
            "tensor layout of dimension " + std::to_string(dimension()) + " does not match " +
            std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
    }
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t ar = 0; ar < a.rows(); ar++) {
        for (size_t ac = 0; ac < a.cols(); ac++) {
            Complex s = a(ar, ac);
            for (size_t br = 0; br < b.rows(); br++) {
                for (size_t bc = 0; bc < b.cols(); bc++) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

namespace {

std::vector<size_t> strides_of(const TensorLayout &layout) {
    std::vector<size_t> strides(layout.num_factors());
    size_t s = 1;
    for (size_t f = layout.num_factors(); f-- > 0;) {
        strides[f] = s;
        s *= layout.factor_dims[f];
    }
    return strides;
}

/// Membership mask of the kept factors; rejects out-of-range and repeated indices.
std::vector<bool> keep_mask(const TensorLayout &layout, std::span<const size_t> keep) {
    if (keep.empty()) {
        throw DimensionError("partial_trace: keep set must be non-empty");
    }
    std::vector<bool> mask(layout.num_factors(), false);
    for (size_t f : keep) {
        if (f >= layout.num_factors()) {
            throw DimensionError(
                "partial_trace: factor " + std::to_string(f) + " not in layout of " +
                std::to_string(layout.num_factors()) + " factors");
        }
        if (mask[f]) {
            throw DimensionError("partial_trace: factor " + std::to_string(f) + " listed twice");
        }
        mask[f] = true;
    }
    return mask;
}

/// Full-index offsets of every multi-index over the selected factors, in lexicographic order.
std::vector<size_t> offsets_over(const TensorLayout &layout, const std::vector<bool> &select) {
    auto strides = strides_of(layout);
    std::vector<size_t> offsets{0};
    for (size_t f = 0; f < layout.num_factors(); f++) {
        if (!select[f]) {
            continue;
        }
        std::vector<size_t> next;
        next.reserve(offsets.size() * layout.factor_dims[f]);
        for (size_t base : offsets) {
            for (size_t d = 0; d < layout.factor_dims[f]; d++) {
                next.push_back(base + d * strides[f]);
            }
        }
        offsets = std::move(next);
    }
    return offsets;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix &m, const TensorLayout &layout, std::span<const size_t> keep) {
    layout.check(m);
    auto mask = keep_mask(layout, keep);
    std::vector<bool> traced(mask.size());
    for (size_t f = 0; f < mask.size(); f++) {
        traced[f] = !mask[f];
    }
    auto kept_off = offsets_over(layout, mask);
    auto traced_off = offsets_over(layout, traced);

    const size_t dk = kept_off.size();
    const long long n_out = static_cast<long long>(dk * dk);
    ComplexMatrix out(dk, dk);
    QBROADCAST_OMP_PRAGMA("omp parallel for schedule(static)")
    for (long long k = 0; k < n_out; k++) {
        size_t i = static_cast<size_t>(k) / dk;
        size_t j = static_cast<size_t>(k) % dk;
        Complex acc = 0;
        for (size_t t : traced_off) {
            acc += m(kept_off[i] + t, kept_off[j] + t);
        }
        out(i, j) = acc;
    }
    return out;
}

namespace serial {

ComplexMatrix partial_trace(const ComplexMatrix &m, const TensorLayout &layout, std::span<const size_t> keep) {
    layout.check(m);
    auto mask = keep_mask(layout, keep);
    size_t nf = layout.num_factors();
    size_t dk = 1;
    for (size_t f = 0; f < nf; f++) {
        if (mask[f]) {
            dk *= layout.factor_dims[f];
        }
    }
    ComplexMatrix out(dk, dk);
    std::vector<size_t> rd(nf), cd(nf);
    auto decode = [&](size_t index, std::vector<size_t> &digits) {
        for (size_t f = nf; f-- > 0;) {
            digits[f] = index % layout.factor_dims[f];
            index /= layout.factor_dims[f];
        }
    };
    for (size_t r = 0; r < m.rows(); r++) {
        decode(r, rd);
        for (size_t c = 0; c < m.cols(); c++) {
            decode(c, cd);
            bool match = true;
            size_t kr = 0, kc = 0;
            for (size_t f = 0; f < nf; f++) {
                if (mask[f]) {
                    kr = kr * layout.factor_dims[f] + rd[f];
                    kc = kc * layout.factor_dims[f] + cd[f];
                } else if (rd[f] != cd[f]) {
                    match = false;
                    break;
                }
            }
            if (match) {
                out(kr, kc) += m(r, c);
            }
        }
    }
    return out;
}

}  // namespace serial

ComplexMatrix partial_transpose(const ComplexMatrix &m, const TensorLayout &layout, size_t subsystem) {
    layout.check(m);
    if (subsystem >= layout.num_factors()) {
        throw DimensionError(
            "partial_transpose: subsystem " + std::to_string(subsystem) + " not in layout of " +
            std::to_string(layout.num_factors()) + " factors");
    }
    size_t stride = strides_of(layout)[subsystem];
    size_t d = layout.factor_dims[subsystem];
    ComplexMatrix out(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); r++) {
        size_t rdig = (r / stride) % d;
        for (size_t c = 0; c < m.cols(); c++) {
            size_t cdig = (c / stride) % d;
            size_t r2 = r - rdig * stride + cdig * stride;
            size_t c2 = c - cdig * stride + rdig * stride;
            out(r2, c2) = m(r, c);
        }
    }
    return out;
}

namespace {

/// Cyclic Jacobi on a Hermitian matrix. Each rotation first removes the phase of a_pq, then
/// applies the real symmetric rotation that annihilates it.
EigenSystem jacobi(ComplexMatrix a) {
    const size_t n = a.rows();
    ComplexMatrix v = ComplexMatrix::identity(n);
    double frob = 0;
    for (Complex z : a.entries()) {
        frob += std::norm(z);
    }
    frob = std::sqrt(frob);

    for (int sweep = 0; sweep < 100; sweep++) {
        double off = 0;
        for (size_t p = 0; p < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                off += std::norm(a(p, q));
            }
        }
        if (std::sqrt(off) <= 1e-17 * frob || off == 0) {
            break;
        }
        for (size_t p = 0; p < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                Complex apq = a(p, q);
                double mag = std::abs(apq);
                if (mag == 0) {
                    continue;
                }
                Complex phase = apq / mag;
                double theta = (a(q, q).real() - a(p, p).real()) / (2 * mag);
                double t = 1 / (std::abs(theta) + std::sqrt(theta * theta + 1));
                if (theta < 0) {
                    t = -t;
                }
                double c = 1 / std::sqrt(t * t + 1);
                double s = t * c;
                Complex jpp = c;
                Complex jpq = s;
                Complex jqp = -s * std::conj(phase);
                Complex jqq = c * std::conj(phase);

                for (size_t k = 0; k < n; k++) {
                    Complex akp = a(k, p);
                    Complex akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                    Complex vkp = v(k, p);
                    Complex vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
                for (size_t k = 0; k < n; k++) {
                    Complex apk = a(p, k);
                    Complex aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        return a(x, x).real() < a(y, y).real();
    });
    EigenSystem out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (size_t k = 0; k < n; k++) {
        out.values[k] = a(order[k], order[k]).real();
        for (size_t r = 0; r < n; r++) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

void require_hermitian(const ComplexMatrix &m, const char *who) {
    if (!m.is_square()) {
        throw DimensionError(std::string(who) + ": matrix is not square");
    }
    if (!m.all_finite()) {
        throw PreconditionError(std::string(who) + ": non-finite entry");
    }
    double defect = m.hermiticity_defect();
    if (defect > 1e-12) {
        throw PreconditionError(std::string(who) + ": matrix not Hermitian (defect " + std::to_string(defect) + ")");
    }
}

}  // namespace

EigenSystem hermitian_eigensystem(const ComplexMatrix &m) {
    require_hermitian(m, "hermitian_eigensystem");
    return jacobi(m);
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m) {
    require_hermitian(m, "hermitian_eigenvalues");
    return jacobi(m).values;
}

std::vector<double> singular_values(const ComplexMatrix &m) {
    if (!m.all_finite()) {
        throw PreconditionError("singular_values: non-finite entry");
    }
    ComplexMatrix gram = m.adjoint() * m;
    ComplexMatrix sym = 0.5 * (gram + gram.adjoint());
    auto values = jacobi(sym).values;
    std::vector<double> out;
    out.reserve(values.size());
    for (auto it = values.rbegin(); it != values.rend(); ++it) {
        out.push_back(std::sqrt(std::max(0.0, *it)));
    }
    return out;
}

DensityOperator::DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
    if (!m_.is_square() || m_.rows() == 0) {
        throw PreconditionError("density operator must be a non-empty square matrix");
    }
    if (!m_.all_finite()) {
        throw PreconditionError("density operator has a non-finite entry");
    }
    double defect = m_.hermiticity_defect();
    if (defect > kHermitianTol) {
        throw PreconditionError("density operator not Hermitian (defect " + std::to_string(defect) + ")");
    }
    Complex tr = m_.trace();
    if (std::abs(tr - Complex{1, 0}) > kTraceTol) {
        std::stringstream ss;
        ss.precision(17);
        ss << "density operator trace " << tr.real() << " != 1";
        throw PreconditionError(ss.str());
    }
    double min_eig = jacobi(m_).values.front();
    if (min_eig < -kPsdTol) {
        throw PreconditionError("density operator not PSD (min eigenvalue " + std::to_string(min_eig) + ")");
    }
}

}  // namespace qbroadcast
