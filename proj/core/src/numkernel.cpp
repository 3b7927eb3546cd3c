#include "metric_energy/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "metric_energy/error.hpp"

namespace metric_energy {

namespace {

// Flip v so its first component of magnitude above 1e-12 is positive.
void normalise_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

// Orders eigenpairs by value (descending); exact ties fall back to a
// descending lexicographic comparison of the sign-normalised eigenvectors.
void sort_eigenpairs(Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values[a] != values[b]) return values[a] > values[b];
    for (Eigen::Index k = 0; k < n; ++k) {
      if (vectors(k, a) != vectors(k, b)) return vectors(k, a) > vectors(k, b);
    }
    return false;
  });
  Eigen::VectorXd sorted_values(n);
  Eigen::MatrixXd sorted_vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted_values[i] = values[order[static_cast<std::size_t>(i)]];
    sorted_vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index q = 1; q < n; ++q) {
    const double* col = a.col(q).data();
    for (Eigen::Index p = 0; p < q; ++p) sum += col[p] * col[p];
  }
  return std::sqrt(2.0 * sum);
}

}  // namespace

void ToleranceConfig::validate() const {
  if (!(rel_eig_zero > 0.0) || !(abs_floor > 0.0) || max_jacobi_sweeps < 1) {
    throw Error(ErrorCode::BadParameter,
                "tolerances must be positive and max_jacobi_sweeps >= 1");
  }
}

double ToleranceConfig::zero_threshold(double spectral_radius) const {
  return std::max(abs_floor, rel_eig_zero * spectral_radius);
}

double SpectralDecomposition::spectral_radius() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

Eigen::MatrixXd SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

Eigen::Index SpectralDecomposition::rank() const {
  return (eigenvalues.array().abs() > zero_threshold).count();
}

SpectralDecomposition SpectralDecomposition::negated() const {
  SpectralDecomposition out;
  out.dim = dim;
  out.zero_threshold = zero_threshold;
  out.residual = residual;
  out.eigenvalues = eigenvalues.reverse() * -1.0;
  out.eigenvectors = eigenvectors.rowwise().reverse();
  return out;
}

SpectralDecomposition sym_eig(const Eigen::MatrixXd& s, const ToleranceConfig& tol) {
  tol.validate();
  if (s.rows() != s.cols()) {
    throw Error(ErrorCode::NotSquare, "sym_eig needs a square matrix");
  }
  const Eigen::Index n = s.rows();
  if (n == 0) throw Error(ErrorCode::BadParameter, "sym_eig needs n >= 1");

  const double scale = s.cwiseAbs().maxCoeff();
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw Error(ErrorCode::NotSymmetric,
                "asymmetry " + std::to_string(asym) + " exceeds 1e-12 relative", {}, {asym});
  }

  Eigen::MatrixXd a = 0.5 * (s + s.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double frob = a.norm();
  const double eps = std::numeric_limits<double>::epsilon();

  bool converged = off_diagonal_norm(a) <= eps * frob;
  for (int sweep = 0; sweep < tol.max_jacobi_sweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Negligible relative to both diagonal entries: zero it outright.
        if (std::abs(apq) < 1e-3 * eps * std::min(std::abs(app), std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;

        double* cp = a.col(p).data();
        double* cq = a.col(q).data();
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = cp[k];
          const double akq = cq[k];
          cp[k] = c * akp - sn * akq;
          cq[k] = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          a(p, k) = cp[k];
          a(q, k) = cq[k];
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        double* vp = v.col(p).data();
        double* vq = v.col(q).data();
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = vp[k];
          const double vkq = vq[k];
          vp[k] = c * vkp - sn * vkq;
          vq[k] = sn * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_norm(a) <= eps * frob;
  }

  if (!converged) {
    const double off = off_diagonal_norm(a);
    throw Error(ErrorCode::NoConvergence,
                "off-diagonal norm " + std::to_string(off) + " after " +
                    std::to_string(tol.max_jacobi_sweeps) + " sweeps",
                {}, {off});
  }

  SpectralDecomposition dec;
  dec.dim = n;
  dec.eigenvalues = a.diagonal();
  dec.eigenvectors = std::move(v);
  for (Eigen::Index i = 0; i < n; ++i) normalise_sign(dec.eigenvectors.col(i));
  sort_eigenpairs(dec.eigenvalues, dec.eigenvectors);
  dec.zero_threshold = tol.zero_threshold(dec.spectral_radius());

  const Eigen::MatrixXd r =
      s * dec.eigenvectors - dec.eigenvectors * dec.eigenvalues.asDiagonal();
  dec.residual = r.colwise().norm().maxCoeff();
  return dec;
}

PinvSolution pinv_apply(const SpectralDecomposition& dec, const Eigen::VectorXd& g) {
  if (g.size() != dec.dim) {
    throw Error(ErrorCode::BadParameter, "pinv_apply: vector length does not match dimension");
  }
  const Eigen::VectorXd coeff = dec.eigenvectors.transpose() * g;
  Eigen::VectorXd scaled = Eigen::VectorXd::Zero(dec.dim);
  double null_sq = 0.0;
  for (Eigen::Index i = 0; i < dec.dim; ++i) {
    const double lambda = dec.eigenvalues[i];
    if (std::abs(lambda) > dec.zero_threshold) {
      scaled[i] = coeff[i] / lambda;
    } else {
      null_sq += coeff[i] * coeff[i];
    }
  }
  PinvSolution out;
  out.x = dec.eigenvectors * scaled;
  out.in_range = std::sqrt(null_sq) <= dec.zero_threshold * (1.0 + g.norm());
  const Eigen::VectorXd sx =
      dec.eigenvectors * (dec.eigenvalues.cwiseProduct(dec.eigenvectors.transpose() * out.x));
  out.residual = (sx - g).norm();
  return out;
}

Eigen::MatrixXd mass_zero_projection(Eigen::Index n) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "mass_zero_projection needs n >= 1");
  const double inv = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(n, n, -inv);
  p.diagonal().array() += 1.0;
  return p;
}

Eigen::MatrixXd mass_zero_basis(Eigen::Index n) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "mass_zero_basis needs n >= 1");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double m = static_cast<double>(k + 1);
    const double norm = std::sqrt(m * (m + 1.0));
    for (Eigen::Index j = 0; j <= k; ++j) q(j, k) = 1.0 / norm;
    q(k + 1, k) = -m / norm;
  }
  return q;
}

}  // namespace metric_energy
