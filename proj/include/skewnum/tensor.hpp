#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewnum/matrix.hpp"

namespace skewnum {

/// A Hermitian operator together with the factor dimensions of the tensor
/// product space it lives on. Dimension-1 factors are allowed; they carry
/// the scalar factor used by the subadditivity embedding.
struct MultipartiteOperator {
    HermitianMatrix matrix;
    std::vector<int> dims;

    MultipartiteOperator(HermitianMatrix m, std::vector<int> factor_dims)
        : matrix(std::move(m)), dims(std::move(factor_dims)) {
        long long product = 1;
        for (int d : dims) {
            if (d < 1) throw std::invalid_argument("MultipartiteOperator: factor dims must be >= 1");
            product *= d;
        }
        if (dims.empty() || product != matrix.dim())
            throw std::invalid_argument("MultipartiteOperator: product of dims must equal matrix dim");
    }

    int factor_count() const { return static_cast<int>(dims.size()); }
};

/// Kronecker product with basis order e_i⊗f_j, i.e. row (i,j) ↦ i·dim(b)+j.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    const int da = a.dim(), db = b.dim();
    Matrix c(da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l) c(i * db + k, j * db + l) = aij * b(k, l);
        }
    return c;
}

inline HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(kron(a.matrix(), b.matrix()));
}

/// Σ_i 1⊗...⊗k_i⊗...⊗1 — the lift of local observables to the product
/// space. observables[i] must act on a space of dimension dims[i].
inline MultipartiteOperator local_sum(const std::vector<HermitianMatrix>& observables,
                                      const std::vector<int>& dims) {
    if (observables.size() != dims.size())
        throw std::invalid_argument("local_sum: one observable per factor required");
    if (dims.empty()) throw std::invalid_argument("local_sum: at least one factor required");
    int total = 1;
    for (size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < 1) throw std::invalid_argument("local_sum: factor dims must be >= 1");
        if (observables[i].dim() != dims[i])
            throw std::invalid_argument("local_sum: observable " + std::to_string(i) +
                                        " does not match its factor dimension");
        total *= dims[i];
    }

    Matrix acc(total);
    for (size_t i = 0; i < dims.size(); ++i) {
        int left = 1, right = 1;
        for (size_t j = 0; j < i; ++j) left *= dims[j];
        for (size_t j = i + 1; j < dims.size(); ++j) right *= dims[j];
        acc += kron(kron(Matrix::identity(left), observables[i].matrix()),
                    Matrix::identity(right));
    }
    return MultipartiteOperator(HermitianMatrix(acc), dims);
}

/// Partial trace onto the factors listed in `keep` (0-based): sums matrix
/// elements over an orthonormal basis of the complementary factors.
/// Preserves the trace. Note the explicit keep-set: `keep = {0}` returns
/// the operator acting on the first factor.
inline MultipartiteOperator partial_trace(const MultipartiteOperator& op,
                                          const std::vector<int>& keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
        throw std::invalid_argument("partial_trace: duplicate factor index");
    for (int f : kept)
        if (f < 0 || f >= op.factor_count())
            throw std::invalid_argument("partial_trace: factor index out of range");

    const std::vector<int>& dims = op.dims;
    std::vector<int> traced;
    for (int f = 0; f < op.factor_count(); ++f)
        if (!std::binary_search(kept.begin(), kept.end(), f)) traced.push_back(f);

    // Row-major mixed radix: factor 0 is the most significant digit,
    // matching the kron convention above.
    std::vector<int> stride(dims.size(), 1);
    for (int f = static_cast<int>(dims.size()) - 2; f >= 0; --f)
        stride[f] = stride[f + 1] * dims[f + 1];

    int keep_dim = 1, traced_dim = 1;
    std::vector<int> kept_dims;
    for (int f : kept) {
        keep_dim *= dims[f];
        kept_dims.push_back(dims[f]);
    }
    for (int f : traced) traced_dim *= dims[f];

    // Offset of a compound index within the full space, given the digit
    // expansion over the listed factors.
    auto offset = [&](int compound, const std::vector<int>& factors) {
        int off = 0;
        for (int f = static_cast<int>(factors.size()) - 1; f >= 0; --f) {
            const int d = dims[factors[f]];
            off += (compound % d) * stride[factors[f]];
            compound /= d;
        }
        return off;
    };

    std::vector<int> trace_offsets(traced_dim);
    for (int t = 0; t < traced_dim; ++t) trace_offsets[t] = offset(t, traced);

    const Matrix& src = op.matrix.matrix();
    Matrix out(keep_dim);
    for (int r = 0; r < keep_dim; ++r) {
        const int row_base = offset(r, kept);
        for (int c = 0; c < keep_dim; ++c) {
            const int col_base = offset(c, kept);
            Complex s = 0.0;
            for (int t : trace_offsets) s += src(row_base + t, col_base + t);
            out(r, c) = s;
        }
    }
    return MultipartiteOperator(HermitianMatrix(out), kept_dims);
}

inline MultipartiteOperator partial_trace(const MultipartiteOperator& op,
                                          std::initializer_list<int> keep) {
    return partial_trace(op, std::vector<int>(keep));
}

}  // namespace skewnum
