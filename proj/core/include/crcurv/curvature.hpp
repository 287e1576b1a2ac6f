#pragma once

// Candidate curvature functions K on S^3 and the arithmetic expression
// language used to define them on the command line. Expressions are written
// in the ambient real coordinates x1, y1, x2, y2 (with xi1 = x1 + i y1,
// xi2 = x2 + i y2), support + - * / ^ exp and parentheses, and are
// differentiated exactly by second-order forward-mode evaluation, so
// gradients and Hessians carry no truncation error. Exponents must be
// numeric constants; that restriction is what keeps differentiation exact.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "crcurv/geometry.hpp"

namespace crcurv {

// Quasi-random point on S^3 (Halton sequence mapped through the normal
// quantile). Deterministic in (index, seed).
SpherePoint quasi_random_sphere_point(std::uint64_t index, std::uint64_t seed);

// Value, gradient and Hessian with respect to the four ambient coordinates.
struct Dual2 {
  double v = 0.0;
  std::array<double, 4> g{};
  std::array<double, 16> h{};  // full symmetric 4x4, row-major

  static Dual2 constant(double c);
  static Dual2 variable(int i, double x);
};

Dual2 operator+(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a);
Dual2 operator*(const Dual2& a, const Dual2& b);
Dual2 operator/(const Dual2& a, const Dual2& b);
Dual2 pow(const Dual2& a, double c);
Dual2 exp(const Dual2& a);

class Expression {
 public:
  // Parses `text`; malformed input raises Errc::input with the byte
  // position of the offending token.
  static Expression parse(const std::string& text);

  double eval(const std::array<double, 4>& x) const;
  Dual2 eval_dual(const std::array<double, 4>& x) const;
  const std::string& text() const { return text_; }

  struct Node;  // exposed for the parser implementation

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

// A positive function on the sphere together with ambient derivatives.
// Derivatives are exact for expression-backed instances and central finite
// differences (step 1e-4) for evaluator-backed ones.
class CurvatureFunction {
 public:
  // Builds from an expression; samples `positivity_samples` quasi-random
  // sphere points and rejects (Errc::input, naming the sample) if K <= 0
  // anywhere in the sample.
  static CurvatureFunction from_expression(const std::string& text,
                                           int positivity_samples = 10000,
                                           std::uint64_t seed = 0);
  // Named families: "constant:<c>" and "affine:<c>,<cx1>,<cy1>,<cx2>,<cy2>"
  // (the latter is c + cx1*x1 + cy1*y1 + cx2*x2 + cy2*y2).
  static CurvatureFunction from_family(const std::string& spec,
                                       int positivity_samples = 10000,
                                       std::uint64_t seed = 0);
  // Arbitrary ambient evaluator, optionally with analytic derivatives.
  static CurvatureFunction from_evaluator(
      std::function<double(const std::array<double, 4>&)> value,
      std::function<std::array<double, 4>(const std::array<double, 4>&)> grad = nullptr,
      std::function<std::array<double, 16>(const std::array<double, 4>&)> hess = nullptr,
      std::string description = "evaluator", int positivity_samples = 10000,
      std::uint64_t seed = 0);

  double value(const SpherePoint& p) const;
  double ambient_value(const std::array<double, 4>& x) const;
  std::array<double, 4> ambient_grad(const std::array<double, 4>& x) const;
  std::array<double, 16> ambient_hess(const std::array<double, 4>& x) const;
  bool has_analytic() const { return analytic_; }
  const std::string& description() const { return description_; }

  // K composed with a unitary: x -> K(Ux), derivatives by the chain rule.
  CurvatureFunction composed_with(const Unitary2& u) const;

 private:
  CurvatureFunction() = default;
  void check_positivity(int samples, std::uint64_t seed) const;

  std::function<double(const std::array<double, 4>&)> value_;
  std::function<std::array<double, 4>(const std::array<double, 4>&)> grad_;
  std::function<std::array<double, 16>(const std::array<double, 4>&)> hess_;
  bool analytic_ = false;
  std::string description_;
};

// Real orthogonal 4x4 matrix (row-major) of a unitary acting on the ambient
// coordinates.
std::array<double, 16> unitary_ambient_matrix(const Unitary2& u);

}  // namespace crcurv
