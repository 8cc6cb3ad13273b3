#include "superpos/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "superpos/error.hpp"

namespace superpos {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const Complex z = m.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

int total_dim(const Dims& dims) {
  long long n = 1;
  for (int d : dims) {
    if (d < 1) throw InvalidInput("subsystem dimension must be >= 1, got " + std::to_string(d));
    n *= d;
    if (n > kMaxTotalDim) {
      throw InvalidInput("total dimension exceeds the supported maximum of " + std::to_string(kMaxTotalDim));
    }
  }
  return static_cast<int>(n);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > kMaxTotalDim || cols > kMaxTotalDim) {
    throw InvalidInput("kron result exceeds the supported dimension limit");
  }
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::vector<int> permutation_indices(const Dims& dims, std::span<const int> order) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n) throw InvalidInput("permutation length does not match subsystem count");
  std::vector<int> seen(n, 0);
  for (int k : order) {
    if (k < 0 || k >= n || seen[k]++) throw InvalidInput("invalid subsystem permutation");
  }
  const int total = total_dim(dims);
  // strides of the original layout
  std::vector<int> stride(n, 1);
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];

  std::vector<int> out(total);
  std::vector<int> digits(n, 0);  // digits in permuted order
  for (int idx = 0; idx < total; ++idx) {
    int orig = 0;
    for (int k = 0; k < n; ++k) orig += digits[k] * stride[order[k]];
    out[idx] = orig;
    for (int k = n - 1; k >= 0; --k) {
      if (++digits[k] < dims[order[k]]) break;
      digits[k] = 0;
    }
  }
  return out;
}

namespace {

void check_subsystems(const Dims& dims, std::span<const int> which) {
  std::vector<int> seen(dims.size(), 0);
  for (int k : which) {
    if (k < 0 || k >= static_cast<int>(dims.size())) {
      throw InvalidInput("subsystem index " + std::to_string(k) + " out of range");
    }
    if (seen[k]++) throw InvalidInput("subsystem index " + std::to_string(k) + " repeated");
  }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& rho, const Dims& dims, std::span<const int> keep) {
  const int total = total_dim(dims);
  if (rho.rows() != total || rho.cols() != total) {
    throw InvalidInput("partial_trace: matrix size does not match the product of dims");
  }
  check_subsystems(dims, keep);
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  std::vector<int> order = kept;
  int dk = 1;
  for (int k : kept) dk *= dims[k];
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (!std::binary_search(kept.begin(), kept.end(), k)) order.push_back(k);
  }
  const int dr = total / dk;
  const auto perm = permutation_indices(dims, order);

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (int a = 0; a < dk; ++a) {
    for (int b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (int c = 0; c < dr; ++c) acc += rho(perm[a * dr + c], perm[b * dr + c]);
      out(a, b) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const Dims& dims, std::span<const int> which) {
  const int total = total_dim(dims);
  if (rho.rows() != total || rho.cols() != total) {
    throw InvalidInput("partial_transpose: matrix size does not match the product of dims");
  }
  check_subsystems(dims, which);
  const int n = static_cast<int>(dims.size());
  std::vector<int> stride(n, 1);
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];

  ComplexMatrix out(total, total);
  for (int r = 0; r < total; ++r) {
    for (int c = 0; c < total; ++c) {
      int nr = r;
      int nc = c;
      for (int k : which) {
        const int dr = (r / stride[k]) % dims[k];
        const int dc = (c / stride[k]) % dims[k];
        nr += (dc - dr) * stride[k];
        nc += (dr - dc) * stride[k];
      }
      out(nr, nc) = rho(r, c);
    }
  }
  return out;
}

SvdResult svd(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).norm();
}

EigResult eig_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("eig_hermitian: matrix is not square");
  const double defect = hermiticity_defect(m);
  if (!(defect <= kHermitianTol)) {
    throw InvalidInput("eig_hermitian: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: eigensolver failed");
  const Eigen::Index n = m.rows();
  EigResult out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

ComplexMatrix plane_rotation(int dim, int i, int j, double theta, double phi) {
  ComplexMatrix g = ComplexMatrix::Identity(dim, dim);
  const double s = std::sin(theta / 2);
  const double c = std::cos(theta / 2);
  const Complex e = std::polar(1.0, phi);
  g(i, i) = s;
  g(j, i) = e * c;
  g(i, j) = -std::conj(e) * c;
  g(j, j) = s;
  return g;
}

namespace {

ComplexMatrix rotation_product(int dim, std::span<const double> thetas, std::span<const double> phis) {
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  std::size_t k = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j, ++k) {
      // right-multiply by the plane rotation: only columns i and j change
      const double s = std::sin(thetas[k] / 2);
      const double c = std::cos(thetas[k] / 2);
      const Complex e = std::polar(1.0, phis[k]);
      const ComplexVector ci = u.col(i);
      const ComplexVector cj = u.col(j);
      u.col(i) = s * ci + e * c * cj;
      u.col(j) = -std::conj(e) * c * ci + s * cj;
    }
  }
  return u;
}

}  // namespace

ComplexMatrix unitary_from_angles(const UnitaryParams& p) {
  if (p.dim < 1) throw InvalidInput("unitary_from_angles: dim must be >= 1");
  const std::size_t d = static_cast<std::size_t>(p.dim);
  if (p.angles.size() != d * d) {
    throw InvalidInput("unitary_from_angles: expected " + std::to_string(d * d) + " angles, got " +
                       std::to_string(p.angles.size()));
  }
  const std::size_t m = d * (d - 1) / 2;
  std::span<const double> all(p.angles);
  ComplexMatrix u = rotation_product(p.dim, all.subspan(0, m), all.subspan(m, m));
  for (std::size_t k = 0; k < d; ++k) u.col(static_cast<Eigen::Index>(k)) *= std::polar(1.0, all[2 * m + k]);
  return u;
}

ComplexMatrix basis_from_angles(int dim, std::span<const double> angles) {
  const std::size_t m = static_cast<std::size_t>(dim) * (dim - 1) / 2;
  if (angles.size() != 2 * m) throw InvalidInput("basis_from_angles: wrong parameter count");
  return rotation_product(dim, angles.subspan(0, m), angles.subspan(m, m));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexMatrix random_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidInput("random_unitary: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

}  // namespace superpos
