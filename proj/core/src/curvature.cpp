#include "crcurv/curvature.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <vector>

#include "crcurv/errors.hpp"
#include "crcurv/numerics.hpp"

namespace crcurv {
namespace {

constexpr std::array<int, 4> kHaltonBases = {2, 3, 5, 7};

}  // namespace

SpherePoint quasi_random_sphere_point(std::uint64_t index, std::uint64_t seed) {
  // Seed scrambles by shifting the sequence; 1-based so no coordinate is 0.
  const std::uint64_t offset = (seed * 2654435761ull) % 1000000007ull;
  std::uint64_t i = index + 1 + offset;
  for (;;) {
    std::array<double, 4> x{};
    double norm2 = 0.0;
    for (int k = 0; k < 4; ++k) {
      x[k] = num::inverse_normal_cdf(num::halton(i, kHaltonBases[k]));
      norm2 += x[k] * x[k];
    }
    if (norm2 > 1e-12) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& c : x) c *= inv;
      return SpherePoint::from_ambient(x);
    }
    ++i;  // vanishingly unlikely; retry with the next index
  }
}

Dual2 Dual2::constant(double c) {
  Dual2 d;
  d.v = c;
  return d;
}

Dual2 Dual2::variable(int i, double x) {
  Dual2 d;
  d.v = x;
  d.g[static_cast<std::size_t>(i)] = 1.0;
  return d;
}

Dual2 operator+(const Dual2& a, const Dual2& b) {
  Dual2 r;
  r.v = a.v + b.v;
  for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] + b.g[i];
  for (int i = 0; i < 16; ++i) r.h[i] = a.h[i] + b.h[i];
  return r;
}

Dual2 operator-(const Dual2& a, const Dual2& b) {
  Dual2 r;
  r.v = a.v - b.v;
  for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] - b.g[i];
  for (int i = 0; i < 16; ++i) r.h[i] = a.h[i] - b.h[i];
  return r;
}

Dual2 operator-(const Dual2& a) {
  Dual2 r;
  r.v = -a.v;
  for (int i = 0; i < 4; ++i) r.g[i] = -a.g[i];
  for (int i = 0; i < 16; ++i) r.h[i] = -a.h[i];
  return r;
}

Dual2 operator*(const Dual2& a, const Dual2& b) {
  Dual2 r;
  r.v = a.v * b.v;
  for (int i = 0; i < 4; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r.h[4 * i + j] = a.v * b.h[4 * i + j] + b.v * a.h[4 * i + j] +
                       a.g[i] * b.g[j] + a.g[j] * b.g[i];
  return r;
}

Dual2 operator/(const Dual2& a, const Dual2& b) {
  if (b.v == 0.0) fail(Errc::domain, "division by zero in expression");
  const double q = 1.0 / b.v;
  Dual2 r;
  r.v = a.v * q;
  for (int i = 0; i < 4; ++i) r.g[i] = (a.g[i] - r.v * b.g[i]) * q;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r.h[4 * i + j] = (a.h[4 * i + j] - r.v * b.h[4 * i + j] -
                        r.g[i] * b.g[j] - r.g[j] * b.g[i]) *
                       q;
  return r;
}

Dual2 pow(const Dual2& a, double c) {
  const double rc = std::round(c);
  const bool integral = std::abs(c - rc) < 1e-12;
  double v, d1, d2;
  if (integral) {
    const int n = static_cast<int>(rc);
    if (a.v == 0.0 && n < 0) fail(Errc::domain, "zero base with negative exponent");
    v = std::pow(a.v, n);
    d1 = n == 0 ? 0.0 : n * std::pow(a.v, n - 1);
    d2 = (n == 0 || n == 1) ? 0.0 : n * (n - 1.0) * std::pow(a.v, n - 2);
  } else {
    if (a.v <= 0.0)
      fail(Errc::domain, "non-positive base with non-integer exponent");
    v = std::pow(a.v, c);
    d1 = c * v / a.v;
    d2 = c * (c - 1.0) * v / (a.v * a.v);
  }
  Dual2 r;
  r.v = v;
  for (int i = 0; i < 4; ++i) r.g[i] = d1 * a.g[i];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r.h[4 * i + j] = d1 * a.h[4 * i + j] + d2 * a.g[i] * a.g[j];
  return r;
}

Dual2 exp(const Dual2& a) {
  const double v = std::exp(a.v);
  Dual2 r;
  r.v = v;
  for (int i = 0; i < 4; ++i) r.g[i] = v * a.g[i];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r.h[4 * i + j] = v * (a.h[4 * i + j] + a.g[i] * a.g[j]);
  return r;
}

// ---------------------------------------------------------------------------
// Expression parsing

struct Expression::Node {
  enum class Kind { kConstant, kVariable, kAdd, kSub, kMul, kDiv, kNeg, kPow, kExp };
  Kind kind = Kind::kConstant;
  double value = 0.0;  // kConstant: the constant; kPow: the exponent
  int var = 0;         // kVariable: 0..3 for x1,y1,x2,y2
  std::shared_ptr<const Node> lhs, rhs;

  template <typename T>
  T eval(const std::array<double, 4>& x) const;
};

namespace {

template <typename T>
T make_constant(double c);
template <typename T>
T make_variable(int i, double x);

template <>
double make_constant<double>(double c) { return c; }
template <>
double make_variable<double>(int, double x) { return x; }
template <>
Dual2 make_constant<Dual2>(double c) { return Dual2::constant(c); }
template <>
Dual2 make_variable<Dual2>(int i, double x) { return Dual2::variable(i, x); }

double pow_const(double a, double c) {
  const double rc = std::round(c);
  if (std::abs(c - rc) < 1e-12) {
    const int n = static_cast<int>(rc);
    if (a == 0.0 && n < 0) fail(Errc::domain, "zero base with negative exponent");
    return std::pow(a, n);
  }
  if (a <= 0.0) fail(Errc::domain, "non-positive base with non-integer exponent");
  return std::pow(a, c);
}

double div_checked(double a, double b) {
  if (b == 0.0) fail(Errc::domain, "division by zero in expression");
  return a / b;
}

}  // namespace

template <typename T>
T Expression::Node::eval(const std::array<double, 4>& x) const {
  switch (kind) {
    case Kind::kConstant: return make_constant<T>(value);
    case Kind::kVariable: return make_variable<T>(var, x[static_cast<std::size_t>(var)]);
    case Kind::kAdd: return lhs->eval<T>(x) + rhs->eval<T>(x);
    case Kind::kSub: return lhs->eval<T>(x) - rhs->eval<T>(x);
    case Kind::kMul: return lhs->eval<T>(x) * rhs->eval<T>(x);
    case Kind::kDiv: {
      if constexpr (std::is_same_v<T, double>)
        return div_checked(lhs->eval<double>(x), rhs->eval<double>(x));
      else
        return lhs->eval<T>(x) / rhs->eval<T>(x);
    }
    case Kind::kNeg: return -lhs->eval<T>(x);
    case Kind::kPow: {
      if constexpr (std::is_same_v<T, double>)
        return pow_const(lhs->eval<double>(x), value);
      else
        return pow(lhs->eval<T>(x), value);
    }
    case Kind::kExp: {
      if constexpr (std::is_same_v<T, double>)
        return std::exp(lhs->eval<double>(x));
      else
        return exp(lhs->eval<T>(x));
    }
  }
  fail(Errc::internal, "unreachable expression node kind");
}

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr node_const(double c) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kConstant;
  n->value = c;
  return n;
}

NodePtr node_var(int i) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kVariable;
  n->var = i;
  return n;
}

NodePtr node_unary(Node::Kind k, NodePtr a, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->value = value;
  return n;
}

NodePtr node_binary(Node::Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    std::ostringstream os;
    os << "expression parse error at position " << pos_ << ": " << what;
    fail(Errc::input, os.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr e = parse_product();
    for (;;) {
      if (consume('+'))
        e = node_binary(Node::Kind::kAdd, e, parse_product());
      else if (consume('-'))
        e = node_binary(Node::Kind::kSub, e, parse_product());
      else
        return e;
    }
  }

  NodePtr parse_product() {
    NodePtr e = parse_unary();
    for (;;) {
      if (consume('*'))
        e = node_binary(Node::Kind::kMul, e, parse_unary());
      else if (consume('/'))
        e = node_binary(Node::Kind::kDiv, e, parse_unary());
      else
        return e;
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) return node_unary(Node::Kind::kNeg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (!consume('^')) return base;
    // Right side must reduce to a numeric constant.
    const double sign = consume('-') ? -1.0 : 1.0;
    skip_ws();
    if (peek() == '(') {
      consume('(');
      NodePtr inner = parse_sum();
      if (!consume(')')) error("expected ')' in exponent");
      double c;
      if (!fold_constant(inner, &c)) error("exponent must be a numeric constant");
      return node_unary(Node::Kind::kPow, base, sign * c);
    }
    const double c = parse_number();
    return node_unary(Node::Kind::kPow, base, sign * c);
  }

  static bool fold_constant(const NodePtr& n, double* out) {
    switch (n->kind) {
      case Node::Kind::kConstant: *out = n->value; return true;
      case Node::Kind::kNeg: {
        double a;
        if (!fold_constant(n->lhs, &a)) return false;
        *out = -a;
        return true;
      }
      case Node::Kind::kAdd:
      case Node::Kind::kSub:
      case Node::Kind::kMul:
      case Node::Kind::kDiv: {
        double a, b;
        if (!fold_constant(n->lhs, &a) || !fold_constant(n->rhs, &b)) return false;
        switch (n->kind) {
          case Node::Kind::kAdd: *out = a + b; break;
          case Node::Kind::kSub: *out = a - b; break;
          case Node::Kind::kMul: *out = a * b; break;
          default: *out = div_checked(a, b); break;
        }
        return true;
      }
      default: return false;
    }
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!consume(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return node_const(parse_number());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "x1") return node_var(0);
      if (name == "y1") return node_var(1);
      if (name == "x2") return node_var(2);
      if (name == "y2") return node_var(3);
      if (name == "pi") return node_const(std::numbers::pi);
      if (name == "exp") {
        if (!consume('(')) error("expected '(' after exp");
        NodePtr arg = parse_sum();
        if (!consume(')')) error("expected ')' after exp argument");
        return node_unary(Node::Kind::kExp, arg);
      }
      pos_ = start;
      error("unknown identifier '" + name + "'");
    }
    error(std::string("unexpected character '") + c + "'");
  }

  double parse_number() {
    skip_ws();
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) error("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).run();
  e.text_ = text;
  return e;
}

double Expression::eval(const std::array<double, 4>& x) const {
  return root_->eval<double>(x);
}

Dual2 Expression::eval_dual(const std::array<double, 4>& x) const {
  return root_->eval<Dual2>(x);
}

// ---------------------------------------------------------------------------
// CurvatureFunction

std::array<double, 16> unitary_ambient_matrix(const Unitary2& u) {
  // xi1' = a xi1 + b xi2, xi2' = c xi1 + d xi2 in the (x1,y1,x2,y2) basis.
  std::array<double, 16> m{};
  const auto put = [&m](int row, const cd& p, const cd& q) {
    m[4 * row + 0] = p.real();
    m[4 * row + 1] = -p.imag();
    m[4 * row + 2] = q.real();
    m[4 * row + 3] = -q.imag();
    m[4 * (row + 1) + 0] = p.imag();
    m[4 * (row + 1) + 1] = p.real();
    m[4 * (row + 1) + 2] = q.imag();
    m[4 * (row + 1) + 3] = q.real();
  };
  put(0, u.a, u.b);
  put(2, u.c, u.d);
  return m;
}

namespace {

std::array<double, 4> mat_vec(const std::array<double, 16>& m,
                              const std::array<double, 4>& x) {
  std::array<double, 4> y{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) y[i] += m[4 * i + j] * x[j];
  return y;
}

constexpr double kFdStep = 1e-4;

}  // namespace

void CurvatureFunction::check_positivity(int samples, std::uint64_t seed) const {
  for (int i = 0; i < samples; ++i) {
    const SpherePoint p = quasi_random_sphere_point(static_cast<std::uint64_t>(i), seed);
    const double k = value(p);
    if (!(k > 0.0)) {
      std::ostringstream os;
      os << "curvature candidate '" << description_ << "' is not positive: K = " << k
         << " at xi1 = (" << p.xi1.real() << ", " << p.xi1.imag() << "), xi2 = ("
         << p.xi2.real() << ", " << p.xi2.imag() << ") [sample " << i << "]";
      fail(Errc::input, os.str());
    }
  }
}

CurvatureFunction CurvatureFunction::from_expression(const std::string& text,
                                                     int positivity_samples,
                                                     std::uint64_t seed) {
  auto expr = std::make_shared<Expression>(Expression::parse(text));
  CurvatureFunction f;
  f.value_ = [expr](const std::array<double, 4>& x) { return expr->eval(x); };
  f.grad_ = [expr](const std::array<double, 4>& x) { return expr->eval_dual(x).g; };
  f.hess_ = [expr](const std::array<double, 4>& x) { return expr->eval_dual(x).h; };
  f.analytic_ = true;
  f.description_ = text;
  f.check_positivity(positivity_samples, seed);
  return f;
}

CurvatureFunction CurvatureFunction::from_family(const std::string& spec,
                                                 int positivity_samples,
                                                 std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<double> c;
  {
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        c.push_back(std::stod(item));
      } catch (const std::exception&) {
        fail(Errc::input, "bad numeric argument in family spec '" + spec + "'");
      }
    }
  }
  std::ostringstream expr;
  if (name == "constant") {
    if (c.size() != 1) fail(Errc::input, "family 'constant' takes one argument");
    expr << c[0];
  } else if (name == "affine") {
    if (c.size() != 5) fail(Errc::input, "family 'affine' takes five arguments");
    static constexpr const char* kVars[4] = {"x1", "y1", "x2", "y2"};
    expr << c[0];
    for (int i = 0; i < 4; ++i) expr << " + " << c[i + 1] << "*" << kVars[i];
  } else {
    fail(Errc::input, "unknown curvature family '" + name + "'");
  }
  return from_expression(expr.str(), positivity_samples, seed);
}

CurvatureFunction CurvatureFunction::from_evaluator(
    std::function<double(const std::array<double, 4>&)> value,
    std::function<std::array<double, 4>(const std::array<double, 4>&)> grad,
    std::function<std::array<double, 16>(const std::array<double, 4>&)> hess,
    std::string description, int positivity_samples, std::uint64_t seed) {
  CurvatureFunction f;
  f.value_ = std::move(value);
  f.analytic_ = static_cast<bool>(grad) && static_cast<bool>(hess);
  f.grad_ = std::move(grad);
  f.hess_ = std::move(hess);
  f.description_ = std::move(description);
  f.check_positivity(positivity_samples, seed);
  return f;
}

double CurvatureFunction::value(const SpherePoint& p) const {
  return value_(p.ambient());
}

double CurvatureFunction::ambient_value(const std::array<double, 4>& x) const {
  return value_(x);
}

std::array<double, 4> CurvatureFunction::ambient_grad(const std::array<double, 4>& x) const {
  if (grad_) return grad_(x);
  std::array<double, 4> g{};
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> xp = x, xm = x;
    xp[i] += kFdStep;
    xm[i] -= kFdStep;
    g[i] = (value_(xp) - value_(xm)) / (2.0 * kFdStep);
  }
  return g;
}

std::array<double, 16> CurvatureFunction::ambient_hess(const std::array<double, 4>& x) const {
  if (hess_) return hess_(x);
  std::array<double, 16> h{};
  const double f0 = value_(x);
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> xp = x, xm = x;
    xp[i] += kFdStep;
    xm[i] -= kFdStep;
    h[4 * i + i] = (value_(xp) - 2.0 * f0 + value_(xm)) / (kFdStep * kFdStep);
    for (int j = i + 1; j < 4; ++j) {
      std::array<double, 4> xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += kFdStep; xpp[j] += kFdStep;
      xpm[i] += kFdStep; xpm[j] -= kFdStep;
      xmp[i] -= kFdStep; xmp[j] += kFdStep;
      xmm[i] -= kFdStep; xmm[j] -= kFdStep;
      const double mixed =
          (value_(xpp) - value_(xpm) - value_(xmp) + value_(xmm)) / (4.0 * kFdStep * kFdStep);
      h[4 * i + j] = mixed;
      h[4 * j + i] = mixed;
    }
  }
  return h;
}

CurvatureFunction CurvatureFunction::composed_with(const Unitary2& u) const {
  const std::array<double, 16> m = unitary_ambient_matrix(u);
  CurvatureFunction f;
  auto base_value = value_;
  f.value_ = [base_value, m](const std::array<double, 4>& x) {
    return base_value(mat_vec(m, x));
  };
  if (analytic_) {
    auto base_grad = grad_;
    auto base_hess = hess_;
    // grad' = M^T g(Mx), H' = M^T H(Mx) M.
    f.grad_ = [base_grad, m](const std::array<double, 4>& x) {
      const std::array<double, 4> g = base_grad(mat_vec(m, x));
      std::array<double, 4> out{};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += m[4 * j + i] * g[j];
      return out;
    };
    f.hess_ = [base_hess, m](const std::array<double, 4>& x) {
      const std::array<double, 16> h = base_hess(mat_vec(m, x));
      std::array<double, 16> hm{};  // H M
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k) hm[4 * i + j] += h[4 * i + k] * m[4 * k + j];
      std::array<double, 16> out{};  // M^T (H M)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k) out[4 * i + j] += m[4 * k + i] * hm[4 * k + j];
      return out;
    };
    f.analytic_ = true;
  }
  f.description_ = description_ + " (rotated)";
  return f;
}

}  // namespace crcurv
