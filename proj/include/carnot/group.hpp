#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "carnot/scalar.hpp"

namespace carnot {

enum class GroupKind { f23, engel };

/// One nonzero structure constant: [X_i, X_j] = coeff * X_k with i < j.
struct BracketEntry {
  int i;
  int j;
  int k;
  int coeff;
};

/// Structure constants and grading of one of the two supported step-3 groups.
///
/// Bases are 0-based in code: index 0 is X1. The first two basis vectors span
/// the horizontal layer. `definition(k)` gives the bracket (i, j) that defines
/// X_k from lower basis vectors, which is what graded automorphisms are built
/// from.
class GroupDescriptor {
 public:
  static const GroupDescriptor& f23();
  static const GroupDescriptor& engel();
  /// "f23" or "engel"; throws Error(parse) otherwise.
  static const GroupDescriptor& from_tag(std::string_view tag);

  GroupKind kind() const { return kind_; }
  std::string_view name() const { return name_; }
  std::size_t dimension() const { return weights_.size(); }
  int weight(std::size_t index) const { return weights_[index]; }
  std::span<const int> weights() const { return weights_; }
  std::span<const BracketEntry> brackets() const { return brackets_; }
  /// Structure constant c^k_{ij}, antisymmetric in (i, j).
  int structure_constant(int i, int j, int k) const;
  std::array<int, 2> definition(std::size_t k) const { return definitions_[k]; }

  /// Index ranges of layer `w` (1-based weight).
  std::vector<std::size_t> layer(int w) const;

  friend bool operator==(const GroupDescriptor& a, const GroupDescriptor& b) { return &a == &b; }

 private:
  GroupDescriptor(GroupKind kind, std::string_view name, std::vector<int> weights,
                  std::vector<BracketEntry> brackets, std::vector<std::array<int, 2>> definitions);

  GroupKind kind_;
  std::string_view name_;
  std::vector<int> weights_;
  std::vector<BracketEntry> brackets_;
  std::vector<std::array<int, 2>> definitions_;
};

// ---------------------------------------------------------------------------
// Coefficient-generic kernels. T is Scalar in normal use and Polynomial for
// symbolic expansion; T must be constructible from Scalar.

template <class T>
std::vector<T> bracket_coords(const GroupDescriptor& g, const std::vector<T>& u, const std::vector<T>& v) {
  std::vector<T> r(g.dimension(), T(Scalar(0)));
  for (const BracketEntry& b : g.brackets()) {
    T t = u[b.i] * v[b.j] - u[b.j] * v[b.i];
    r[b.k] += T(Scalar(b.coeff)) * t;
  }
  return r;
}

/// log(exp u · exp v). The series stops at bracket depth 3, which is exact in step 3.
template <class T>
std::vector<T> bch_coords(const GroupDescriptor& g, const std::vector<T>& u, const std::vector<T>& v) {
  const std::vector<T> uv = bracket_coords(g, u, v);
  const std::vector<T> u_uv = bracket_coords(g, u, uv);
  const std::vector<T> v_uv = bracket_coords(g, v, uv);
  const T half(frac(1, 2));
  const T twelfth(frac(1, 12));
  std::vector<T> r(g.dimension(), T(Scalar(0)));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = u[i] + v[i] + half * uv[i] + twelfth * (u_uv[i] - v_uv[i]);
  return r;
}

/// Second-type coordinates of exp(sum u_i X_i) under the convention
/// x = exp(x_top...) · exp(x2 X2) · exp(x1 X1).
template <class T>
std::vector<T> exp_second_kind(const GroupDescriptor& g, const std::vector<T>& u) {
  std::vector<T> step(g.dimension(), T(Scalar(0)));
  std::vector<T> z = u;
  for (std::size_t h : {std::size_t{0}, std::size_t{1}}) {
    std::fill(step.begin(), step.end(), T(Scalar(0)));
    step[h] = -u[h];
    z = bch_coords(g, z, step);
  }
  z[0] = u[0];
  z[1] = u[1];
  return z;
}

template <class T>
std::vector<T> log_second_kind(const GroupDescriptor& g, const std::vector<T>& x) {
  std::vector<T> z = x;
  z[0] = T(Scalar(0));
  z[1] = T(Scalar(0));
  std::vector<T> step(g.dimension(), T(Scalar(0)));
  for (std::size_t h : {std::size_t{1}, std::size_t{0}}) {
    std::fill(step.begin(), step.end(), T(Scalar(0)));
    step[h] = x[h];
    z = bch_coords(g, z, step);
  }
  return z;
}

/// The group law in second-type coordinates, as a frozen polynomial formula.
template <class T>
std::vector<T> product_formula(const GroupDescriptor& g, const std::vector<T>& x, const std::vector<T>& y) {
  const T half(frac(1, 2));
  switch (g.kind()) {
    case GroupKind::f23:
      return {
          x[0] + y[0],
          x[1] + y[1],
          x[2] + y[2] - x[0] * y[1],
          x[3] + y[3] - x[0] * y[2] + half * x[0] * x[0] * y[1],
          x[4] + y[4] + x[0] * x[1] * y[1] + half * x[0] * y[1] * y[1] - x[1] * y[2],
      };
    case GroupKind::engel:
      return {
          x[0] + y[0],
          x[1] + y[1],
          x[2] + y[2] + x[0] * y[1],
          x[3] + y[3] + x[0] * y[2] + half * x[0] * x[0] * y[1],
      };
  }
  throw Error(ErrorCode::internal, "unknown group kind");
}

// ---------------------------------------------------------------------------

/// Coordinates tagged with the group they belong to. `Tag` distinguishes group
/// points (second-type coordinates) from Lie algebra vectors.
template <class Tag>
class Graded {
 public:
  Graded(const GroupDescriptor& g, std::vector<Scalar> coords) : group_(&g), coords_(std::move(coords)) {
    if (coords_.size() != g.dimension())
      throw Error(ErrorCode::invalid_argument, "expected " + std::to_string(g.dimension()) + " coordinates for " +
                                                   std::string(g.name()) + ", got " +
                                                   std::to_string(coords_.size()));
  }
  static Graded zero(const GroupDescriptor& g) { return Graded(g, std::vector<Scalar>(g.dimension(), Scalar(0))); }
  static Graded basis(const GroupDescriptor& g, std::size_t i, const Scalar& scale = 1) {
    Graded v = zero(g);
    v.coords_.at(i) = scale;
    return v;
  }

  const GroupDescriptor& group() const { return *group_; }
  const std::vector<Scalar>& coords() const { return coords_; }
  const Scalar& operator[](std::size_t i) const { return coords_[i]; }
  std::size_t size() const { return coords_.size(); }

  friend bool operator==(const Graded& a, const Graded& b) { return *a.group_ == *b.group_ && a.coords_ == b.coords_; }

 private:
  const GroupDescriptor* group_;
  std::vector<Scalar> coords_;
};

struct PointTag;
struct AlgebraTag;
using GroupPoint = Graded<PointTag>;
using AlgebraVector = Graded<AlgebraTag>;

GroupPoint identity(const GroupDescriptor& g);
GroupPoint multiply(const GroupPoint& x, const GroupPoint& y);
inline GroupPoint operator*(const GroupPoint& x, const GroupPoint& y) { return multiply(x, y); }
/// Back-substitution in the product formula, one coordinate at a time.
GroupPoint inverse(const GroupPoint& x);
/// Inverse through the logarithm: exp(-log x). Kept as a cross-check.
GroupPoint inverse_via_log(const GroupPoint& x);

/// Group dilation; lambda must be positive.
GroupPoint dilate(const Scalar& lambda, const GroupPoint& x);
/// Coordinate-wise lambda^weight scaling for any nonzero lambda.
GroupPoint dilate_algebraic(const Scalar& lambda, const GroupPoint& x);
AlgebraVector dilate(const Scalar& lambda, const AlgebraVector& v);

AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v);
AlgebraVector bch(const AlgebraVector& u, const AlgebraVector& v);
GroupPoint exp_c2(const AlgebraVector& u);
AlgebraVector log_c2(const GroupPoint& x);

AlgebraVector operator+(const AlgebraVector& a, const AlgebraVector& b);
AlgebraVector operator-(const AlgebraVector& a);
AlgebraVector operator*(const Scalar& s, const AlgebraVector& v);

bool is_horizontal(const AlgebraVector& v);
/// Horizontal vector (a, b, 0, ...).
AlgebraVector horizontal(const GroupDescriptor& g, const Scalar& a, const Scalar& b);

/// 2x2 matrix acting on the horizontal layer; columns are the images of X1, X2.
struct Matrix2 {
  Scalar a11, a12, a21, a22;
  Scalar det() const { return a11 * a22 - a12 * a21; }
  static Matrix2 identity() { return {1, 0, 0, 1}; }
};

/// Graded automorphism induced by a linear map of the horizontal layer.
class Automorphism {
 public:
  /// Extends L through the defining brackets. Throws Error(domain) for singular
  /// L and Error(unsupported) when the extension does not preserve brackets
  /// (Engel with L(X2) outside span{X2}).
  static Automorphism from_horizontal(const Matrix2& L, const GroupDescriptor& g);

  const GroupDescriptor& group() const { return *group_; }
  const Matrix2& horizontal_map() const { return horizontal_; }
  /// Column j is the image of X_{j+1}.
  const std::vector<std::vector<Scalar>>& matrix() const { return matrix_; }

  AlgebraVector apply(const AlgebraVector& u) const;
  GroupPoint apply(const GroupPoint& x) const;
  Automorphism inverse() const;

  bool preserves_brackets() const;
  bool preserves_grading() const;

 private:
  Automorphism(const GroupDescriptor& g, Matrix2 L, std::vector<std::vector<Scalar>> A)
      : group_(&g), horizontal_(std::move(L)), matrix_(std::move(A)) {}

  const GroupDescriptor* group_;
  Matrix2 horizontal_;
  std::vector<std::vector<Scalar>> matrix_;
};

void require_same_group(const GroupDescriptor& a, const GroupDescriptor& b);

}  // namespace carnot
