#pragma once

#include <vector>

#include "xiqed/dynamics.hpp"
#include "xiqed/linalg.hpp"

namespace xiqed {

/// Square complex matrix used for reduced states and their partial transposes.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    explicit DensityMatrix(std::size_t dim) : entries_(dim, dim) {}
    explicit DensityMatrix(ComplexMatrix entries);

    std::size_t dim() const noexcept { return entries_.rows(); }

    Complex &operator()(std::size_t r, std::size_t c) { return entries_(r, c); }
    const Complex &operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }

    const ComplexMatrix &entries() const noexcept { return entries_; }

    Complex trace() const;
    /// Tr(rho^2) = sum_{rs} |rho_rs|^2, valid for Hermitian input.
    double purity() const;
    /// max_{rs} |rho_rs - conj(rho_sr)|
    double hermiticity_error() const;

  private:
    ComplexMatrix entries_;
};

/// Two-atom basis order |11>,|12>,|13>,|21>,|22>,|23>,|31>,|32>,|33>
/// and the amplitude (0-based) each basis state carries.
inline constexpr std::array<int, 9> kAtomBasisAmplitude{0, 1, 2, 1, 4, 3, 2, 3, 5};

/// rho_{A1A2} = Tr_F |psi><psi|, 9x9.
DensityMatrix atoms_reduced(const WaveFunction &wf);

/// Tr over atom 2 of a 9x9 two-atom matrix, 3x3.
DensityMatrix atom1_reduced(const DensityMatrix &rho9);

/// Tr over atom 1 of a 9x9 two-atom matrix, 3x3.
DensityMatrix atom2_reduced(const DensityMatrix &rho9);

/// rho_F[n][m] = sum_k w_k C_k(n) C_k(m)^* with weights (1,2,2,2,1,1).
DensityMatrix field_reduced(const WaveFunction &wf);

/// Transpose on atom 2: out[(i,l),(k,j)] = in[(i,j),(k,l)].
DensityMatrix partial_transpose_second(const DensityMatrix &rho9);

/// Ascending eigenvalues of a Hermitian matrix (complex cyclic Jacobi).
std::vector<double> hermitian_eigenvalues(const DensityMatrix &m);

} // namespace xiqed
