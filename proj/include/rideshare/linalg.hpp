#pragma once

#include <vector>

#include "rideshare/matrix.hpp"

namespace rideshare {

// Solves A x = b by Gaussian elimination with partial pivoting.
// Throws std::runtime_error when A is numerically singular.
Vec solve_linear(Matrix a, Vec b);

// Stationary flow of the row-stochastic chain T: returns x > 0 with
// x^T T = x^T, normalized to sum 1. Requires the chain restricted to its
// positive-entry graph to be strongly connected; throws otherwise.
Vec chain_stationary(const Matrix& transition);

// Strong connectivity of the directed graph with an edge i -> j whenever
// transition(i, j) > tol.
bool strongly_connected(const Matrix& transition, double tol = 0.0);

}  // namespace rideshare
