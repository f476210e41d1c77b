#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace xiqed {

using Complex = std::complex<double>;

/// Row-major dense matrix. Sizes in this model never exceed a few dozen.
template <class T>
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

    static DenseMatrix identity(std::size_t dim) {
        DenseMatrix m(dim, dim);
        for(std::size_t i = 0; i < dim; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<T> &data() const noexcept { return data_; }

    bool operator==(const DenseMatrix &) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix    = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<Complex>;

template <class T>
struct EigenDecomposition {
    std::vector<double> values; // ascending
    DenseMatrix<T> vectors;     // column k belongs to values[k]
};

inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps    = 100;

/// Cyclic Jacobi diagonalization of a real symmetric or complex Hermitian
/// matrix. Only the upper triangle is trusted. Converges when the
/// off-diagonal Frobenius norm drops below tolerance * max(1, |A|_F);
/// throws ModelError(EigensolverNonConvergence) after max_sweeps.
template <class T>
EigenDecomposition<T> jacobi_eigen(const DenseMatrix<T> &a, double tolerance = kJacobiTolerance,
                                   int max_sweeps = kJacobiMaxSweeps);

extern template EigenDecomposition<double> jacobi_eigen(const RealMatrix &, double, int);
extern template EigenDecomposition<Complex> jacobi_eigen(const ComplexMatrix &, double, int);

/// max_{ij} |a_ij - b_ij|
template <class T>
double max_abs_diff(const DenseMatrix<T> &a, const DenseMatrix<T> &b) {
    double worst = 0.0;
    for(std::size_t i = 0; i < a.data().size(); ++i) {
        double d = std::abs(a.data()[i] - b.data()[i]);
        if(d > worst) worst = d;
    }
    return worst;
}

} // namespace xiqed
