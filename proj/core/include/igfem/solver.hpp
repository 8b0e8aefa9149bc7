#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace igfem {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Square matrix in compressed sparse row form with sorted columns.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  /// Duplicate entries are summed.
  static CsrMatrix from_triplets(int n, std::vector<Triplet> entries);

  int rows() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }
  const std::vector<int>& row_offsets() const { return offsets_; }
  const std::vector<int>& columns() const { return cols_; }
  const std::vector<double>& values() const { return values_; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;
  double at(int r, int c) const;
  std::vector<double> diagonal() const;
  double max_abs() const;
  /// max |A(i,j) - A(j,i)|
  double symmetry_defect() const;

  /// Coordinate text format: a "rows nonzeros" header, then "row col value" lines (0-based).
  void write_coo(std::ostream& os) const;

 private:
  int n_ = 0;
  std::vector<int> offsets_{0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  double seconds = 0.0;
  /// Directions of (numerically) zero curvature removed during the solve.
  int deflated = 0;
  bool converged = false;
};

struct CgOptions {
  double rel_tol = 1e-13;
  /// Zero means 20 * n.
  int max_iter = 0;
  bool jacobi = true;
  /// Called after every iteration with the current iterate.
  std::function<void(int, std::span<const double>)> monitor;
};

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, SolveStats stats) : std::runtime_error(what), stats_(stats) {}
  const SolveStats& stats() const { return stats_; }

 private:
  SolveStats stats_;
};

struct SolveResult {
  std::vector<double> x;
  SolveStats stats;
};

/// Preconditioned conjugate gradients from a zero initial guess. Throws
/// SolveError when the tolerance is not met within max_iter iterations.
SolveResult cg_solve(const CsrMatrix& A, std::span<const double> F, const CgOptions& options = {});

struct ConditionEstimate {
  double lambda_max = 0.0;
  double lambda_min = 0.0;  // smallest nonzero eigenvalue
  double condition = 0.0;
  int null_dimension = 0;
  bool max_converged = false;
  bool min_converged = false;

  friend bool operator==(const ConditionEstimate&, const ConditionEstimate&) = default;
};

struct ConditionOptions {
  double rel_tol = 1e-3;
  int max_iter = 2000;
  unsigned seed = 12345;
};

/// Power iteration for lambda_max and CG-based inverse iteration for the
/// smallest nonzero eigenvalue, deflating a null vector if one shows up.
ConditionEstimate estimate_condition(const CsrMatrix& A, const ConditionOptions& options = {});

}  // namespace igfem
