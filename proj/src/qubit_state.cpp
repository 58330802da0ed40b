#include "qprobe/qubit_state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qprobe {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kSupportCut = 1e-12;

SpectralDecomposition decompose(const Matrix2c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("qubit eigensolver failed");
  SpectralDecomposition d;
  d.eigenvalues = es.eigenvalues();
  d.eigenvectors = es.eigenvectors();
  return d;
}

}  // namespace

QubitState::QubitState(const Matrix2c& m) {
  if (std::abs(m(0, 0).imag()) > kHermitianTol || std::abs(m(1, 1).imag()) > kHermitianTol ||
      std::abs(m(0, 1) - std::conj(m(1, 0))) > kHermitianTol) {
    throw std::invalid_argument("QubitState: matrix is not Hermitian within 1e-12");
  }
  const double tr = m(0, 0).real() + m(1, 1).real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream msg;
    msg << "QubitState: trace " << tr << " differs from 1 by more than 1e-12";
    throw std::invalid_argument(msg.str());
  }
  m_ = 0.5 * (m + m.adjoint().eval());
  auto d = decompose(m_);
  if (d.eigenvalues(0) < -kPsdTol) {
    std::ostringstream msg;
    msg << "QubitState: eigenvalue " << d.eigenvalues(0) << " below -1e-10, not a density matrix";
    throw std::invalid_argument(msg.str());
  }
  if (d.eigenvalues(0) < 0.0) {
    Eigen::Vector2d ev = d.eigenvalues.cwiseMax(0.0);
    ev /= ev.sum();
    m_ = d.eigenvectors * ev.asDiagonal() * d.eigenvectors.adjoint();
  }
}

QubitState QubitState::pure(const Vector2c& amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-15) throw std::invalid_argument("QubitState::pure: zero vector");
  Vector2c v = amplitudes / n;
  QubitState s;
  s.m_ = v * v.adjoint();
  return s;
}

QubitState QubitState::from_bloch(double rx, double ry, double rz) {
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  if (r > 1.0 + 1e-12) throw std::invalid_argument("QubitState::from_bloch: |r| > 1");
  QubitState s;
  s.m_ << std::complex<double>(0.5 * (1.0 + rz), 0.0),
      std::complex<double>(0.5 * rx, -0.5 * ry),
      std::complex<double>(0.5 * rx, 0.5 * ry),
      std::complex<double>(0.5 * (1.0 - rz), 0.0);
  return s;
}

QubitState QubitState::dephased_plus(std::complex<double> kappa) {
  if (std::abs(kappa) > 1.0 + 1e-12) throw std::invalid_argument("dephased_plus: |kappa| > 1");
  QubitState s;
  s.m_ << 0.5, 0.5 * kappa, 0.5 * std::conj(kappa), 0.5;
  return s;
}

Eigen::Vector3d QubitState::bloch() const {
  return {2.0 * m_(0, 1).real(), -2.0 * m_(0, 1).imag(), m_(0, 0).real() - m_(1, 1).real()};
}

SpectralDecomposition QubitState::spectral() const { return decompose(m_); }

double trace_distance(const QubitState& a, const QubitState& b) {
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double alpha_fidelity(const QubitState& a, const QubitState& b, double alpha) {
  if (!(alpha >= 0.5 && alpha < 1.0)) {
    throw std::domain_error("alpha_fidelity: alpha must lie in [1/2, 1)");
  }
  const double expo = (1.0 - alpha) / (2.0 * alpha);
  auto db = b.spectral();
  Eigen::Vector2d powed;
  for (int i = 0; i < 2; ++i) {
    const double ev = db.eigenvalues(i);
    powed(i) = ev > kSupportCut ? std::pow(ev, expo) : 0.0;
  }
  Matrix2c bp = db.eigenvectors * powed.asDiagonal() * db.eigenvectors.adjoint();
  Matrix2c m = bp * a.matrix() * bp;
  m = 0.5 * (m + m.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(m, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > 0.0) f += std::pow(ev, alpha);
  }
  return f;
}

double fidelity(const QubitState& a, const QubitState& b) {
  return alpha_fidelity(a, b, 0.5);
}

double purity(const QubitState& a) {
  return (a.matrix() * a.matrix()).trace().real();
}

double von_neumann_entropy(const QubitState& a) {
  auto d = a.spectral();
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double ev = d.eigenvalues(i);
    if (ev > 0.0 && ev < 1.0) s -= ev * std::log(ev);
  }
  return s;
}

}  // namespace qprobe
