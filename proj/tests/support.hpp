#pragma once

// Random generators shared by the unit tests. Everything is seeded so a
// failing case can be replayed.

#include <cstdint>
#include <random>

#include "covlocc/channel.hpp"
#include "covlocc/linalg.hpp"

namespace covlocc::testing {

inline Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(int n, std::uint64_t seed) {
  const Matrix m = random_matrix(n, n, seed);
  return 0.5 * (m + m.adjoint());
}

inline Matrix random_density(int n, std::uint64_t seed) {
  const Matrix m = random_matrix(n, n, seed);
  Matrix rho = m * m.adjoint();
  return rho / rho.trace().real();
}

/// Trace-preserving Kraus set with `count` operators, taken from the blocks of
/// a random isometry C^4 -> C^(4 count).
inline KrausSet random_kraus(int count, std::uint64_t seed) {
  const Matrix v = random_matrix(4 * count, 4, seed).householderQr().householderQ() *
                   Matrix::Identity(4 * count, 4);
  KrausSet k;
  for (int i = 0; i < count; ++i) k.push_back(v.block(4 * i, 0, 4, 4));
  return k;
}

inline Matrix swap_unitary() { return ops::swap(); }

}  // namespace covlocc::testing
