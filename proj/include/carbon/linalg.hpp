#pragma once

#include <array>
#include <cstddef>

namespace carbon::linalg {

template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Mat<N> identity();

template <std::size_t N>
Mat<N> mat_mul(const Mat<N>& a, const Mat<N>& b);

template <std::size_t N>
Vec<N> mat_vec(const Mat<N>& a, const Vec<N>& x);

template <std::size_t N>
struct SymmetricEigen {
    Vec<N> values;
    Mat<N> vectors;  // columns are the eigenvectors
};

// Cyclic Jacobi rotations; input must be symmetric.
template <std::size_t N>
SymmetricEigen<N> jacobi_eigen(Mat<N> a);

// Real fractional power of a transfer matrix with chain coupling
// (adjacent off-diagonal entries positive, non-adjacent zero, as in the
// three-box carbon cycle and the two-box temperature model). The matrix is
// symmetrized by a diagonal similarity, decomposed, and rebuilt with
// powered eigenvalues; eigenvalues must be positive.
template <std::size_t N>
Mat<N> fractional_power(const Mat<N>& m, double power);

// Pushes any column-sum drift into the diagonal so each column sums to
// `target` exactly. Used to keep the carbon transfer matrix mass conserving
// to machine precision after the fractional power.
template <std::size_t N>
void force_column_sums(Mat<N>& m, double target);

}  // namespace carbon::linalg
