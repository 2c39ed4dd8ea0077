#include "ksphoton/state.hpp"

#include <cmath>
#include <string>

namespace ksphoton {

namespace {

double max_abs(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

StateVector::StateVector(const Vector4& amplitudes) : amplitudes_(amplitudes) {
  const double n = amplitudes_.squaredNorm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state vector is not normalized (norm " + std::to_string(n) + ")");
  }
}

StateVector StateVector::normalized(const Vector4& amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite state vector");
  }
  return StateVector(amplitudes / n);
}

StateVector StateVector::basis(Path path, Polarization pol) {
  Vector4 v = Vector4::Zero();
  v[basis_index(path, pol)] = 1.0;
  return StateVector(v);
}

bool Operator::is_hermitian(double tol) const { return max_abs(matrix_ - matrix_.adjoint()) <= tol; }

bool Operator::is_unitary(double tol) const {
  return max_abs(matrix_.adjoint() * matrix_ - Matrix4::Identity()) <= tol;
}

bool Operator::is_involution(double tol) const {
  return max_abs(matrix_ * matrix_ - Matrix4::Identity()) <= tol;
}

bool Operator::commutes_with(const Operator& other, double tol) const {
  return max_abs(matrix_ * other.matrix_ - other.matrix_ * matrix_) <= tol;
}

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::Z1: return "Z1";
    case Observable::X1: return "X1";
    case Observable::Z2: return "Z2";
    case Observable::X2: return "X2";
    case Observable::Z1Z2: return "Z1Z2";
    case Observable::X1X2: return "X1X2";
    case Observable::Z1X2: return "Z1X2";
    case Observable::X1Z2: return "X1Z2";
  }
  return "?";
}

ObservableFactors factors(Observable o) {
  switch (o) {
    case Observable::Z1Z2: return {true, Observable::Z1, Observable::Z2};
    case Observable::X1X2: return {true, Observable::X1, Observable::X2};
    case Observable::Z1X2: return {true, Observable::Z1, Observable::X2};
    case Observable::X1Z2: return {true, Observable::X1, Observable::Z2};
    default: return {false, o, o};
  }
}

namespace pauli {
Matrix2 identity() { return Matrix2::Identity(); }
Matrix2 z() {
  Matrix2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
Matrix2 x() {
  Matrix2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
}  // namespace pauli

Operator tensor(const Matrix2& path_part, const Matrix2& pol_part) {
  Matrix4 m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      m.block<2, 2>(2 * i, 2 * j) = path_part(i, j) * pol_part;
    }
  }
  return Operator(m);
}

Operator observable(Observable name) {
  switch (name) {
    case Observable::Z1: return tensor(pauli::z(), pauli::identity());
    case Observable::X1: return tensor(pauli::x(), pauli::identity());
    case Observable::Z2: return tensor(pauli::identity(), pauli::z());
    case Observable::X2: return tensor(pauli::identity(), pauli::x());
    default: break;
  }
  const auto f = factors(name);
  return observable(f.first) * observable(f.second);
}

StateVector bell_state() {
  const double h = 1.0 / std::sqrt(2.0);
  Vector4 v;
  v << h, 0.0, 0.0, h;
  return StateVector(v);
}

double expectation(const StateVector& state, const Operator& op) {
  if (!op.is_hermitian()) {
    throw std::invalid_argument("expectation requires a Hermitian operator");
  }
  const Complex e = state.amplitudes().dot(op.matrix() * state.amplitudes());
  return e.real();
}

double JointDistribution::product_probability(Sign product) const {
  double total = 0.0;
  for (Sign a : kSigns) {
    for (Sign b : kSigns) {
      if (a * b == product) total += (*this)(a, b);
    }
  }
  return total;
}

JointDistribution joint_probabilities(const StateVector& state, const Operator& a, const Operator& b) {
  for (const Operator* op : {&a, &b}) {
    if (!op->is_hermitian() || !op->is_involution()) {
      throw std::invalid_argument("joint measurement requires Hermitian involutions");
    }
  }
  if (!a.commutes_with(b)) {
    const double norm = max_abs(a.matrix() * b.matrix() - b.matrix() * a.matrix());
    throw NonCommutingError("observables do not commute: max |[A,B]| = " + std::to_string(norm));
  }
  const Matrix4 id = Matrix4::Identity();
  JointDistribution out;
  for (Sign sa : kSigns) {
    for (Sign sb : kSigns) {
      const Matrix4 pa = 0.5 * (id + static_cast<double>(value(sa)) * a.matrix());
      const Matrix4 pb = 0.5 * (id + static_cast<double>(value(sb)) * b.matrix());
      const Complex p = state.amplitudes().dot(pa * pb * state.amplitudes());
      out.at(sa, sb) = std::max(0.0, p.real());
    }
  }
  return out;
}

}  // namespace ksphoton
