#pragma once

#include "carnot/lie_algebra.hpp"

/// Standard graded algebras used by the bundled examples and the tests.
namespace carnot::catalog {

/// H^{2n+1}: [x_i, y_i] = z, layers {x, y}, {z}.
GradedAlgebra heisenberg(int n);

/// H^3 with the non-Carnot weight grading {e1}, {e2}, {e3} (weights 1, 2, 3).
GradedAlgebra heisenberg3_weighted();

/// Exceptional filiform algebra of dimension r+3, basis y0, z0, y1..y_{r+1}:
/// [z0, y_i] = y_{i+1} and [y_i, y_{r-i}] = (-1)^i y_{r+1} for 0 <= i <= r.
GradedAlgebra exceptional_filiform(int r);

/// Quaternionic Heisenberg algebra: layer 0 = H, layer 1 = Im H, [x, y] = Im(conj(x) y).
GradedAlgebra quaternionic_heisenberg();

/// Abelian R^n with a single layer.
GradedAlgebra abelian(int n);

}  // namespace carnot::catalog
