#pragma once

// Metric candidates Theta = sum_k c_k P^(k), positivity, the Dyson factor
// Omega = Theta^(1/2), and the hermitized Hamiltonian h = Omega H Omega^-1.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ptlat/dieudonne.hpp"
#include "ptlat/errors.hpp"
#include "ptlat/lattice.hpp"
#include "ptlat/spectra.hpp"

namespace ptlat {

enum class Positivity { positive_definite, indefinite, singular };

inline std::string to_string(Positivity p) {
  switch (p) {
    case Positivity::positive_definite: return "positive_definite";
    case Positivity::indefinite: return "indefinite";
    case Positivity::singular: return "singular";
  }
  return "unknown";
}

inline constexpr double kPositivityTol = 1e-12;

struct PositivityReport {
  Positivity tag = Positivity::singular;
  double min_eigenvalue = 0.0;
  bool cholesky_ok = false;  // only attempted for positive_definite
};

/// Classifies a symmetric matrix by its smallest eigenvalue. Eigenvalues with
/// magnitude at most tol * (largest magnitude) count as zero, so the tag is
/// invariant under positive rescaling.
inline PositivityReport positivity_check(const Eigen::MatrixXd& theta, double tol = kPositivityTol) {
  PositivityReport rep;
  if (theta.size() == 0) return rep;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  rep.min_eigenvalue = ev.minCoeff();
  const double scale = ev.cwiseAbs().maxCoeff();
  const double zero = tol * scale;
  if (scale == 0.0 || std::abs(rep.min_eigenvalue) <= zero) {
    rep.tag = Positivity::singular;
  } else if (rep.min_eigenvalue > 0.0) {
    rep.tag = Positivity::positive_definite;
    rep.cholesky_ok = Eigen::LLT<Eigen::MatrixXd>(theta).info() == Eigen::Success;
  } else {
    rep.tag = Positivity::indefinite;
  }
  return rep;
}

struct MetricCandidate {
  std::size_t n = 0;
  Eigen::MatrixXd theta;
  std::vector<double> coefficients;
  BasisSource basis_source = BasisSource::rank_one;
  Positivity positivity = Positivity::singular;
  double min_eigenvalue = 0.0;
};

inline MetricCandidate assemble_metric(const PseudometricBasis& basis, std::span<const double> coefficients) {
  if (coefficients.size() != basis.members.size() || basis.members.size() != basis.n)
    throw DimensionMismatch("need exactly one coefficient per basis member");
  MetricCandidate m;
  m.n = basis.n;
  m.basis_source = basis.source;
  m.coefficients.assign(coefficients.begin(), coefficients.end());
  const auto n = static_cast<Eigen::Index>(basis.n);
  m.theta = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < basis.members.size(); ++k) m.theta += coefficients[k] * basis.members[k].entries;
  const auto rep = positivity_check(m.theta);
  m.positivity = rep.tag;
  m.min_eigenvalue = rep.min_eigenvalue;
  return m;
}

inline MetricCandidate assemble_metric(const PseudometricBasis& basis, const std::vector<double>& coefficients) {
  return assemble_metric(basis, std::span<const double>(coefficients));
}

struct InnerProduct {
  double value = 0.0;
  bool indefinite_metric = false;  // set when theta is not positive definite
};

/// phi^T Theta psi. The value is returned even for indefinite Theta, flagged.
inline InnerProduct physical_inner_product(const Eigen::MatrixXd& theta, const Eigen::VectorXd& phi, const Eigen::VectorXd& psi) {
  if (theta.rows() != phi.size() || theta.cols() != psi.size()) throw DimensionMismatch("inner product dimensions differ");
  InnerProduct ip;
  ip.value = phi.dot(theta * psi);
  ip.indefinite_metric = positivity_check(theta).tag != Positivity::positive_definite;
  return ip;
}

struct DysonFactorization {
  Eigen::MatrixXd omega;  // symmetric positive-definite, omega * omega = theta
  Eigen::MatrixXd h;      // omega * H * omega^-1
  double sym_residual = 0.0;            // max |h - h^T|
  double isospectrality_residual = 0.0;  // max difference of sorted spectra of h and H
  double square_residual = 0.0;          // max |omega^2 - theta|
  double roundtrip_residual = 0.0;       // max |omega^-1 h omega - H|
};

inline DysonFactorization dyson_factor(const MetricCandidate& metric, const LatticeHamiltonian<double>& hamiltonian) {
  if (metric.positivity != Positivity::positive_definite)
    throw NotPositiveDefinite("metric is " + to_string(metric.positivity));
  if (metric.n != hamiltonian.size()) throw DimensionMismatch("metric and Hamiltonian sizes differ");

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric.theta);
  const Eigen::VectorXd d = es.eigenvalues();
  if (d.minCoeff() <= 0.0) throw NotPositiveDefinite("metric has a non-positive eigenvalue");
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::MatrixXd hd = to_dense(hamiltonian);

  DysonFactorization f;
  f.omega = v * d.cwiseSqrt().asDiagonal() * v.transpose();
  const Eigen::MatrixXd omega_inv = v * d.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  f.h = f.omega * hd * omega_inv;
  f.sym_residual = (f.h - f.h.transpose()).cwiseAbs().maxCoeff();
  f.square_residual = (f.omega * f.omega - metric.theta).cwiseAbs().maxCoeff();
  f.roundtrip_residual = (omega_inv * f.h * f.omega - hd).cwiseAbs().maxCoeff();

  const Eigen::MatrixXd hs = 0.5 * (f.h + f.h.transpose());
  Eigen::VectorXd ev_h = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hs, Eigen::EigenvaluesOnly).eigenvalues();
  const Spectrum spec = eigenvalues(hamiltonian);
  double worst = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    worst = std::max(worst, std::abs(spec.eigenvalues[i] - Complex(ev_h(static_cast<Eigen::Index>(i)))));
  }
  f.isospectrality_residual = worst;
  return f;
}

/// max |Theta^-1 H^T Theta - H|.
inline double quasi_hermiticity_residual(const LatticeHamiltonian<double>& h, const Eigen::MatrixXd& theta) {
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(theta);
  if (!lu.isInvertible()) throw SingularTheta("theta is singular");
  const Eigen::MatrixXd hd = to_dense(h);
  return (lu.solve(hd.transpose() * theta) - hd).cwiseAbs().maxCoeff();
}

struct ChargeCandidate {
  Eigen::MatrixXd c_matrix;  // P * Theta
  double involution_residual = 0.0;  // max |C^2 - I|
};

/// Diagnostic only: C = P Theta and how far it is from an involution.
inline ChargeCandidate charge_candidate(const Eigen::MatrixXd& theta, const ParityMatrix& parity) {
  if (static_cast<std::size_t>(theta.rows()) != parity.n || theta.rows() != theta.cols())
    throw DimensionMismatch("parity and metric sizes differ");
  ChargeCandidate c;
  c.c_matrix = Eigen::MatrixXd(theta.rows(), theta.cols());
  // Row reversal is exact; no floating-point product involved.
  for (std::size_t i = 0; i < parity.n; ++i)
    c.c_matrix.row(static_cast<Eigen::Index>(i)) = theta.row(static_cast<Eigen::Index>(parity.image(i)));
  const Eigen::MatrixXd sq = c.c_matrix * c.c_matrix;
  c.involution_residual = (sq - Eigen::MatrixXd::Identity(theta.rows(), theta.cols())).cwiseAbs().maxCoeff();
  return c;
}

}  // namespace ptlat
