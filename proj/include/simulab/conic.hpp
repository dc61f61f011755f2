#pragma once

#include <string>
#include <vector>

#include "simulab/linalg.hpp"

// Primal-dual interior-point solver for linear programs over a product of
// complex Hermitian PSD cones:
//
//   minimise   sum_k Tr(C_k X_k)
//   subject to sum_k Tr(A_ik X_k) = b_i,   X_k >= 0,
//
// with dual  maximise b.y  subject to  S_k = C_k - sum_i y_i A_ik >= 0.
// A 1x1 block is an ordinary nonnegative scalar.
//
// The iteration is an infeasible-start path-following method with the
// HKM search direction and Mehrotra predictor-corrector steps. Linearly
// dependent equality rows are detected by a rank-revealing QR and dropped
// before iterating.

namespace simulab::conic {

struct BlockTerm {
  int block = 0;
  Matrix value;  // Hermitian, block_dims[block] square
};

struct Constraint {
  std::vector<BlockTerm> terms;
  double rhs = 0.0;
};

struct Problem {
  std::vector<int> block_dims;
  std::vector<BlockTerm> objective;
  std::vector<Constraint> constraints;
};

struct Settings {
  double gap_tol = 1e-8;   // |primal objective - dual objective|
  double feas_tol = 1e-8;  // largest entry of the primal and dual residuals
  int max_iterations = 120;
  bool remove_dependent_rows = true;
};

enum class Status { optimal, max_iterations, infeasible };

std::string to_string(Status s);

struct Solution {
  Status status = Status::max_iterations;
  std::vector<Matrix> x;
  std::vector<Matrix> s;
  RealVector y;  // one entry per original constraint; dropped rows get 0
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  int dropped_rows = 0;
};

Solution solve(const Problem& problem, const Settings& settings = {});

/// Orthonormal basis of the real space of n x n Hermitian matrices under
/// <A, B> = Tr(AB): E_pp, (E_pq + E_qp)/sqrt2 and i(E_pq - E_qp)/sqrt2, p < q.
std::vector<Matrix> hermitian_basis(int n);

/// Coordinates of a Hermitian matrix in hermitian_basis(n).
RealVector hermitian_coordinates(const Matrix& a);

}  // namespace simulab::conic
