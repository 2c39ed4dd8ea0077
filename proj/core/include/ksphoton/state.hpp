// Two-qubit state and observable algebra for a single photon carrying a
// path qubit (up/down after the first polarizing beamsplitter) and a
// polarization qubit (vertical z+ / horizontal z-).
//
// The basis ordering is fixed throughout the library:
//
//   index 0: |u, z+>    index 1: |u, z->    index 2: |d, z+>    index 3: |d, z->
//
// i.e. path is the leading (slow) tensor index.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

namespace ksphoton {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Vector4 = Eigen::Vector4cd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kCommutatorTolerance = 1e-10;

enum class Path : int { Up = 0, Down = 1 };
enum class Polarization : int { Vertical = 0, Horizontal = 1 };  // z+, z-

/// Measurement outcome of a +/-1 valued observable.
enum class Sign : int { Minus = -1, Plus = +1 };

constexpr int value(Sign s) { return static_cast<int>(s); }
constexpr Sign operator*(Sign a, Sign b) { return value(a) * value(b) > 0 ? Sign::Plus : Sign::Minus; }
constexpr Sign operator-(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline constexpr std::array<Sign, 2> kSigns{Sign::Plus, Sign::Minus};

constexpr int basis_index(Path p, Polarization s) { return 2 * static_cast<int>(p) + static_cast<int>(s); }

class NonCommutingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Normalized pure state of the photon. Construction rejects vectors whose
/// norm deviates from 1 by more than kNormTolerance.
class StateVector {
 public:
  explicit StateVector(const Vector4& amplitudes);

  /// Rescales an arbitrary nonzero vector onto the unit sphere.
  static StateVector normalized(const Vector4& amplitudes);
  static StateVector basis(Path path, Polarization pol);

  const Vector4& amplitudes() const { return amplitudes_; }
  Complex operator[](int i) const { return amplitudes_[i]; }
  double norm() const { return amplitudes_.squaredNorm(); }

 private:
  Vector4 amplitudes_;
};

/// 4x4 operator on the path (x) polarization space.
class Operator {
 public:
  Operator() : matrix_(Matrix4::Zero()) {}
  explicit Operator(const Matrix4& m) : matrix_(m) {}

  const Matrix4& matrix() const { return matrix_; }

  bool is_hermitian(double tol = kNormTolerance) const;
  bool is_unitary(double tol = kNormTolerance) const;
  /// Square equals identity.
  bool is_involution(double tol = kNormTolerance) const;

  bool commutes_with(const Operator& other, double tol = kCommutatorTolerance) const;

  friend Operator operator*(const Operator& a, const Operator& b) { return Operator(a.matrix_ * b.matrix_); }

 private:
  Matrix4 matrix_;
};

enum class Observable { Z1, X1, Z2, X2, Z1Z2, X1X2, Z1X2, X1Z2 };

inline constexpr std::array<Observable, 4> kBaseObservables{Observable::Z1, Observable::X1, Observable::Z2,
                                                            Observable::X2};
inline constexpr std::array<Observable, 8> kAllObservables{Observable::Z1,   Observable::X1,   Observable::Z2,
                                                           Observable::X2,   Observable::Z1Z2, Observable::X1X2,
                                                           Observable::Z1X2, Observable::X1Z2};

std::string_view to_string(Observable o);

/// Factors of a product observable. Base observables report `is_product == false`
/// and carry themselves in `first`.
struct ObservableFactors {
  bool is_product;
  Observable first;
  Observable second;
};
ObservableFactors factors(Observable o);

/// Kronecker product with the path operator on the leading index.
Operator tensor(const Matrix2& path_part, const Matrix2& pol_part);

Operator observable(Observable name);

/// (|u,z+> + |d,z->) / sqrt(2)
StateVector bell_state();

/// <state|op|state>. Rejects non-Hermitian operators (std::invalid_argument).
double expectation(const StateVector& state, const Operator& op);

/// Probabilities of the four joint outcomes of two commuting +/-1 observables.
class JointDistribution {
 public:
  double operator()(Sign a, Sign b) const { return p_[slot(a, b)]; }
  double& at(Sign a, Sign b) { return p_[slot(a, b)]; }
  double total() const { return p_[0] + p_[1] + p_[2] + p_[3]; }
  /// Probability that the product of the two outcomes equals `product`.
  double product_probability(Sign product) const;

 private:
  static int slot(Sign a, Sign b) { return 2 * (a == Sign::Minus) + (b == Sign::Minus); }
  std::array<double, 4> p_{};
};

/// Joint statistics via the simultaneous eigenprojectors (I + aA)(I + bB)/4.
/// Throws NonCommutingError when [A, B] exceeds kCommutatorTolerance (max-norm)
/// and std::invalid_argument when either operator is not a Hermitian involution.
JointDistribution joint_probabilities(const StateVector& state, const Operator& a, const Operator& b);

namespace pauli {
Matrix2 identity();
Matrix2 z();
Matrix2 x();
}  // namespace pauli

}  // namespace ksphoton
