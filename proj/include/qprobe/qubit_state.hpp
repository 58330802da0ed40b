#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace qprobe {

using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

// Eigen-decomposition of a density matrix. Eigenvalues are ascending, lie in
// [0, 1] and sum to 1; eigenvector columns are orthonormal.
struct SpectralDecomposition {
  Eigen::Vector2d eigenvalues;
  Matrix2c eigenvectors;
};

// A 2x2 density matrix in the {|H>, |V>} basis. Construction validates
// Hermiticity (1e-12), unit trace (1e-12) and positivity: eigenvalues in
// [-1e-10, 0) are clamped to zero (tomography feeds near-boundary states),
// anything more negative is rejected.
class QubitState {
 public:
  // Basis convention for every matrix in this library.
  static constexpr std::array<const char*, 2> kBasisLabels{"H", "V"};

  explicit QubitState(const Matrix2c& m);

  static QubitState pure(const Vector2c& amplitudes);
  static QubitState from_bloch(double rx, double ry, double rz);

  static QubitState horizontal() { return from_bloch(0, 0, 1); }
  static QubitState vertical() { return from_bloch(0, 0, -1); }
  static QubitState plus() { return from_bloch(1, 0, 0); }
  static QubitState minus() { return from_bloch(-1, 0, 0); }
  static QubitState maximally_mixed() { return from_bloch(0, 0, 0); }

  // |+><+| with its coherence scaled by kappa: 1/2 [[1, k], [k*, 1]].
  static QubitState dephased_plus(std::complex<double> kappa);

  const Matrix2c& matrix() const { return m_; }
  std::complex<double> entry(int i, int j) const { return m_(i, j); }

  Eigen::Vector3d bloch() const;
  SpectralDecomposition spectral() const;

 private:
  QubitState() = default;
  Matrix2c m_;
};

// 1/2 ||a - b||_1: probability advantage for distinguishing equally likely
// states with the optimal measurement.
double trace_distance(const QubitState& a, const QubitState& b);

// tr[(b^{(1-alpha)/(2alpha)} a b^{(1-alpha)/(2alpha)})^alpha] for
// alpha in [1/2, 1). Fractional powers of b are taken on its support
// (eigenvalues below 1e-12 count as zero). Equals the standard fidelity at
// alpha = 1/2; returns 0 for orthogonal supports.
double alpha_fidelity(const QubitState& a, const QubitState& b, double alpha);

// Standard (Uhlmann) fidelity, alpha_fidelity at alpha = 1/2.
double fidelity(const QubitState& a, const QubitState& b);

double purity(const QubitState& a);

// Von Neumann entropy in nats; 0 ln 0 := 0.
double von_neumann_entropy(const QubitState& a);

}  // namespace qprobe
