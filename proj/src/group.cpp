#include "carnot/group.hpp"

#include <string>

namespace carnot {

GroupDescriptor::GroupDescriptor(GroupKind kind, std::string_view name, std::vector<int> weights,
                                 std::vector<BracketEntry> brackets, std::vector<std::array<int, 2>> definitions)
    : kind_(kind),
      name_(name),
      weights_(std::move(weights)),
      brackets_(std::move(brackets)),
      definitions_(std::move(definitions)) {}

const GroupDescriptor& GroupDescriptor::f23() {
  // [X2,X1]=X3, [X3,X1]=X4, [X3,X2]=X5, stored with i < j.
  static const GroupDescriptor g(GroupKind::f23, "f23", {1, 1, 2, 3, 3},
                                 {{0, 1, 2, -1}, {0, 2, 3, -1}, {1, 2, 4, -1}},
                                 {{-1, -1}, {-1, -1}, {1, 0}, {2, 0}, {2, 1}});
  return g;
}

const GroupDescriptor& GroupDescriptor::engel() {
  // [X1,X2]=X3, [X1,X3]=X4.
  static const GroupDescriptor g(GroupKind::engel, "engel", {1, 1, 2, 3}, {{0, 1, 2, 1}, {0, 2, 3, 1}},
                                 {{-1, -1}, {-1, -1}, {0, 1}, {0, 2}});
  return g;
}

const GroupDescriptor& GroupDescriptor::from_tag(std::string_view tag) {
  if (tag == "f23") return f23();
  if (tag == "engel") return engel();
  throw Error(ErrorCode::parse, "unknown group '" + std::string(tag) + "' (expected f23 or engel)");
}

int GroupDescriptor::structure_constant(int i, int j, int k) const {
  for (const BracketEntry& b : brackets_) {
    if (b.k != k) continue;
    if (b.i == i && b.j == j) return b.coeff;
    if (b.i == j && b.j == i) return -b.coeff;
  }
  return 0;
}

std::vector<std::size_t> GroupDescriptor::layer(int w) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] == w) out.push_back(i);
  return out;
}

void require_same_group(const GroupDescriptor& a, const GroupDescriptor& b) {
  if (!(a == b))
    throw Error(ErrorCode::group_mismatch,
                "group mismatch: " + std::string(a.name()) + " vs " + std::string(b.name()));
}

GroupPoint identity(const GroupDescriptor& g) { return GroupPoint::zero(g); }

GroupPoint multiply(const GroupPoint& x, const GroupPoint& y) {
  require_same_group(x.group(), y.group());
  return GroupPoint(x.group(), product_formula(x.group(), x.coords(), y.coords()));
}

GroupPoint inverse(const GroupPoint& x) {
  const GroupDescriptor& g = x.group();
  // Coordinates are ordered by weight and coordinate i of x·y is
  // x_i + y_i + P_i(x, y of lower weight), so one pass solves x·y = 0.
  std::vector<Scalar> y(g.dimension(), Scalar(0));
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::vector<Scalar> z = product_formula(g, x.coords(), y);
    y[i] -= z[i];
  }
  return GroupPoint(g, std::move(y));
}

GroupPoint inverse_via_log(const GroupPoint& x) { return exp_c2(-log_c2(x)); }

GroupPoint dilate_algebraic(const Scalar& lambda, const GroupPoint& x) {
  if (lambda == 0) throw Error(ErrorCode::domain, "dilation factor must be nonzero");
  std::vector<Scalar> c = x.coords();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= pow(lambda, static_cast<unsigned>(x.group().weight(i)));
  return GroupPoint(x.group(), std::move(c));
}

GroupPoint dilate(const Scalar& lambda, const GroupPoint& x) {
  if (lambda <= 0) throw Error(ErrorCode::domain, "group dilation needs lambda > 0");
  return dilate_algebraic(lambda, x);
}

AlgebraVector dilate(const Scalar& lambda, const AlgebraVector& v) {
  if (lambda == 0) throw Error(ErrorCode::domain, "dilation factor must be nonzero");
  std::vector<Scalar> c = v.coords();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= pow(lambda, static_cast<unsigned>(v.group().weight(i)));
  return AlgebraVector(v.group(), std::move(c));
}

AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v) {
  require_same_group(u.group(), v.group());
  return AlgebraVector(u.group(), bracket_coords(u.group(), u.coords(), v.coords()));
}

AlgebraVector bch(const AlgebraVector& u, const AlgebraVector& v) {
  require_same_group(u.group(), v.group());
  return AlgebraVector(u.group(), bch_coords(u.group(), u.coords(), v.coords()));
}

GroupPoint exp_c2(const AlgebraVector& u) { return GroupPoint(u.group(), exp_second_kind(u.group(), u.coords())); }

AlgebraVector log_c2(const GroupPoint& x) { return AlgebraVector(x.group(), log_second_kind(x.group(), x.coords())); }

AlgebraVector operator+(const AlgebraVector& a, const AlgebraVector& b) {
  require_same_group(a.group(), b.group());
  std::vector<Scalar> c = a.coords();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return AlgebraVector(a.group(), std::move(c));
}

AlgebraVector operator-(const AlgebraVector& a) {
  std::vector<Scalar> c = a.coords();
  for (Scalar& v : c) v = -v;
  return AlgebraVector(a.group(), std::move(c));
}

AlgebraVector operator*(const Scalar& s, const AlgebraVector& v) {
  std::vector<Scalar> c = v.coords();
  for (Scalar& x : c) x *= s;
  return AlgebraVector(v.group(), std::move(c));
}

bool is_horizontal(const AlgebraVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.group().weight(i) != 1 && v[i] != 0) return false;
  return true;
}

AlgebraVector horizontal(const GroupDescriptor& g, const Scalar& a, const Scalar& b) {
  AlgebraVector v = AlgebraVector::basis(g, 0, a);
  return v + AlgebraVector::basis(g, 1, b);
}

// ---------------------------------------------------------------------------

Automorphism Automorphism::from_horizontal(const Matrix2& L, const GroupDescriptor& g) {
  if (L.det() == 0) throw Error(ErrorCode::domain, "horizontal map is singular");
  const std::size_t n = g.dimension();
  std::vector<std::vector<Scalar>> columns(n, std::vector<Scalar>(n, Scalar(0)));
  columns[0][0] = L.a11;
  columns[0][1] = L.a21;
  columns[1][0] = L.a12;
  columns[1][1] = L.a22;
  for (std::size_t k = 2; k < n; ++k) {
    auto [i, j] = g.definition(k);
    columns[k] = bracket_coords(g, columns[i], columns[j]);
  }
  std::vector<std::vector<Scalar>> A(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) A[r][c] = columns[c][r];
  Automorphism psi(g, L, std::move(A));
  if (!psi.preserves_brackets()) {
    std::string why = "horizontal map does not extend to a graded automorphism of " + std::string(g.name());
    if (g.kind() == GroupKind::engel)
      why += ": X2 is the only horizontal abnormal direction, so L must map X2 into span{X2}";
    throw Error(ErrorCode::unsupported, why);
  }
  return psi;
}

AlgebraVector Automorphism::apply(const AlgebraVector& u) const {
  require_same_group(*group_, u.group());
  const std::size_t n = group_->dimension();
  std::vector<Scalar> out(n, Scalar(0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (matrix_[r][c] != 0 && u[c] != 0) out[r] += matrix_[r][c] * u[c];
  return AlgebraVector(*group_, std::move(out));
}

GroupPoint Automorphism::apply(const GroupPoint& x) const { return exp_c2(apply(log_c2(x))); }

Automorphism Automorphism::inverse() const {
  const Scalar d = horizontal_.det();
  Matrix2 inv{horizontal_.a22 / d, -horizontal_.a12 / d, -horizontal_.a21 / d, horizontal_.a11 / d};
  return from_horizontal(inv, *group_);
}

bool Automorphism::preserves_brackets() const {
  const std::size_t n = group_->dimension();
  auto column = [&](std::size_t c) {
    std::vector<Scalar> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = matrix_[r][c];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // A[X_i, X_j] versus [A X_i, A X_j]
      std::vector<Scalar> lhs(n, Scalar(0));
      for (std::size_t k = 0; k < n; ++k) {
        int c = group_->structure_constant(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k));
        if (c == 0) continue;
        for (std::size_t r = 0; r < n; ++r) lhs[r] += Scalar(c) * matrix_[r][k];
      }
      if (lhs != bracket_coords(*group_, column(i), column(j))) return false;
    }
  }
  return true;
}

bool Automorphism::preserves_grading() const {
  const std::size_t n = group_->dimension();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (matrix_[r][c] != 0 && group_->weight(r) != group_->weight(c)) return false;
  return true;
}

}  // namespace carnot
