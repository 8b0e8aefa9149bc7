#include "igfem/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

namespace igfem {

CsrMatrix CsrMatrix::from_triplets(int n, std::vector<Triplet> entries) {
  if (n < 0) throw std::invalid_argument("CsrMatrix: negative dimension");
  for (const auto& t : entries)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::out_of_range("CsrMatrix: triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                              ") outside " + std::to_string(n) + "x" + std::to_string(n));
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  CsrMatrix m;
  m.n_ = n;
  m.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    double v = 0.0;
    while (j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col) v += entries[j++].value;
    m.cols_.push_back(entries[i].col);
    m.values_.push_back(v);
    ++m.offsets_[entries[i].row + 1];
    i = j;
  }
  std::partial_sum(m.offsets_.begin(), m.offsets_.end(), m.offsets_.begin());
  return m;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(n_) || y.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("CsrMatrix::multiply: size mismatch");
  for (int r = 0; r < n_; ++r) {
    double s = 0.0;
    for (int p = offsets_[r]; p < offsets_[r + 1]; ++p) s += values_[p] * x[cols_[p]];
    y[r] = s;
  }
}

std::vector<double> CsrMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

double CsrMatrix::at(int r, int c) const {
  const auto first = cols_.begin() + offsets_[r];
  const auto last = cols_.begin() + offsets_[r + 1];
  const auto it = std::lower_bound(first, last, c);
  return it != last && *it == c ? values_[it - cols_.begin()] : 0.0;
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(n_);
  for (int r = 0; r < n_; ++r) d[r] = at(r, r);
  return d;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::symmetry_defect() const {
  double d = 0.0;
  for (int r = 0; r < n_; ++r)
    for (int p = offsets_[r]; p < offsets_[r + 1]; ++p) d = std::max(d, std::abs(values_[p] - at(cols_[p], r)));
  return d;
}

void CsrMatrix::write_coo(std::ostream& os) const {
  os << n_ << ' ' << values_.size() << '\n';
  const auto old = os.precision(17);
  for (int r = 0; r < n_; ++r)
    for (int p = offsets_[r]; p < offsets_[r + 1]; ++p) os << r << ' ' << cols_[p] << ' ' << values_[p] << '\n';
  os.precision(old);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void project_out(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& z : basis) {
    const double c = dot(v, z);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * z[i];
  }
}

}  // namespace

SolveResult cg_solve(const CsrMatrix& A, std::span<const double> F, const CgOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const int n = A.rows();
  if (F.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("cg_solve: right-hand side size mismatch");
  const int max_iter = options.max_iter > 0 ? options.max_iter : std::max(20 * n, 20);

  SolveResult res;
  res.x.assign(n, 0.0);
  SolveStats& st = res.stats;
  auto finish = [&] {
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const double fnorm = norm(F);
  if (n == 0 || fnorm == 0.0) {
    st.converged = true;
    finish();
    return res;
  }

  std::vector<double> inv_diag(n, 1.0);
  if (options.jacobi) {
    const auto d = A.diagonal();
    for (int i = 0; i < n; ++i) inv_diag[i] = d[i] > 0.0 ? 1.0 / d[i] : 1.0;
  }
  const double curvature_floor = 1e-14 * A.max_abs();

  std::vector<double> r(F.begin(), F.end());
  std::vector<double> z(n), p(n), q(n);
  std::vector<std::vector<double>> null_dirs;
  auto precondition = [&] {
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  };
  precondition();
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= max_iter; ++it) {
    A.multiply(p, q);
    const double pq = dot(p, q);
    const double pp = dot(p, p);
    if (!(pq > curvature_floor * pp)) {
      // p spans a (near) null direction: remove it and restart the recurrence.
      std::vector<double> dir = p;
      project_out(dir, null_dirs);
      const double dn = norm(dir);
      if (dn == 0.0 || ++st.deflated > 8) break;
      for (double& v : dir) v /= dn;
      null_dirs.push_back(std::move(dir));
      project_out(r, null_dirs);
      precondition();
      project_out(z, null_dirs);
      p = z;
      rz = dot(r, z);
      continue;
    }
    const double alpha = rz / pq;
    for (int i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    st.iterations = it;
    st.relative_residual = norm(r) / fnorm;
    if (options.monitor) options.monitor(it, res.x);
    if (st.relative_residual <= options.rel_tol) {
      st.converged = true;
      break;
    }
    precondition();
    if (!null_dirs.empty()) project_out(z, null_dirs);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  if (!st.converged) {
    // Report the true residual, which is what the caller cares about.
    const auto ax = A * std::span<const double>(res.x);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += (F[i] - ax[i]) * (F[i] - ax[i]);
    st.relative_residual = std::sqrt(s) / fnorm;
    st.converged = st.relative_residual <= options.rel_tol;
  }
  finish();
  if (!st.converged) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "CG did not reach relative residual %.3g in %d iterations (residual %.3g)",
                  options.rel_tol, st.iterations, st.relative_residual);
    throw SolveError(msg, st);
  }
  return res;
}

ConditionEstimate estimate_condition(const CsrMatrix& A, const ConditionOptions& options) {
  ConditionEstimate est;
  const int n = A.rows();
  if (n == 0) return est;
  std::mt19937 rng(options.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto random_unit = [&] {
    std::vector<double> v(n);
    for (double& x : v) x = uni(rng);
    const double s = norm(v);
    for (double& x : v) x /= s;
    return v;
  };

  // Largest eigenvalue by power iteration with Rayleigh quotients.
  std::vector<double> x = random_unit();
  std::vector<double> y(n);
  double lam = 0.0;
  for (int it = 0; it < options.max_iter; ++it) {
    A.multiply(x, y);
    lam = dot(x, y);
    double res = 0.0;
    for (int i = 0; i < n; ++i) res += (y[i] - lam * x[i]) * (y[i] - lam * x[i]);
    if (std::sqrt(res) <= options.rel_tol * std::abs(lam)) {
      est.max_converged = true;
      break;
    }
    const double yn = norm(y);
    if (yn == 0.0) break;
    for (int i = 0; i < n; ++i) x[i] = y[i] / yn;
  }
  est.lambda_max = lam;

  CgOptions cg;
  cg.rel_tol = 1e-12;
  cg.max_iter = std::max(50 * n, 200);

  // Null space: r minus the range-space solution of A y = A r.
  std::vector<std::vector<double>> null_dirs;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> r = random_unit();
    project_out(r, null_dirs);
    const auto ar = A * std::span<const double>(r);
    std::vector<double> yr;
    try {
      yr = cg_solve(A, ar, cg).x;
    } catch (const SolveError&) {
      break;
    }
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = r[i] - yr[i];
    project_out(z, null_dirs);
    const double zn = norm(z);
    if (zn <= 1e-6 * norm(r)) break;
    for (double& v : z) v /= zn;
    null_dirs.push_back(std::move(z));
  }
  est.null_dimension = static_cast<int>(null_dirs.size());

  // Smallest nonzero eigenvalue by inverse iteration on the complement.
  x = random_unit();
  project_out(x, null_dirs);
  double mu = 0.0;
  bool ok = true;
  for (int it = 0; it < options.max_iter; ++it) {
    const double xn = norm(x);
    for (double& v : x) v /= xn;
    std::vector<double> w;
    try {
      w = cg_solve(A, x, cg).x;
    } catch (const SolveError&) {
      ok = false;
      break;
    }
    project_out(w, null_dirs);
    mu = dot(w, x) / dot(w, w);
    // Residual of the normalized iterate: |x - mu w| / |w|.
    double res = 0.0;
    for (int i = 0; i < n; ++i) res += (x[i] - mu * w[i]) * (x[i] - mu * w[i]);
    x = std::move(w);
    if (std::sqrt(res) / norm(x) <= options.rel_tol * std::abs(mu)) {
      est.min_converged = true;
      break;
    }
  }
  est.lambda_min = ok ? mu : 0.0;
  est.condition = est.lambda_min > 0.0 ? est.lambda_max / est.lambda_min : 0.0;
  return est;
}

}  // namespace igfem
