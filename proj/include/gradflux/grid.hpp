#pragma once

// Uniform node-collocated grids on the unit square and the discrete calculus
// built on them.
//
// Nodes sit at (i*h, j*h) for 0 <= i, j <= n and a field stores values(i, j)
// with i the x index and j the y index. gradient() uses forward differences
// with a zero ghost layer past i = n / j = n, divergence() uses backward
// differences with a zero ghost layer before i = 0 / j = 0. With these two
// conventions
//
//     inner(gradient(u), p) == -inner(u, divergence(p))
//
// holds exactly (all-node pairing) and divergence(gradient(u)) is the 5-point
// Laplacian at every interior node.
//
// Integrals and norms use one node per grid cell: the lower-left corners
// {0..n-1} x {0..n-1}, weighted by h^2. For a field that vanishes on the
// boundary the gradient is supported on exactly this set, so summation by
// parts is exact under the quadrature too.

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace gradflux {

class GridSpec {
 public:
  GridSpec() = default;
  explicit GridSpec(int n) : n_(n), h_(1.0 / static_cast<double>(n)) {
    if (n < 2) {
      throw std::invalid_argument("grid needs n >= 2 subdivisions, got " +
                                  std::to_string(n));
    }
  }

  int n() const { return n_; }
  double h() const { return h_; }
  int nodes_per_axis() const { return n_ + 1; }
  double coord(int i) const { return static_cast<double>(i) * h_; }
  /// Total area covered by the quadrature (== 1 up to rounding).
  double area() const { return h_ * h_ * static_cast<double>(n_) * n_; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.n_ == b.n_;
  }

 private:
  int n_ = 2;
  double h_ = 0.5;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b,
                              const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch (n=" +
                                std::to_string(a.n()) + " vs n=" +
                                std::to_string(b.n()) + ")");
  }
}

template <typename Scalar>
class Field {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Field() = default;
  explicit Field(const GridSpec& grid)
      : grid_(grid),
        values_(Array::Zero(grid.nodes_per_axis(), grid.nodes_per_axis())) {}
  Field(const GridSpec& grid, Array values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.rows() != grid.nodes_per_axis() ||
        values_.cols() != grid.nodes_per_axis()) {
      throw std::invalid_argument("field values do not match grid shape");
    }
  }

  static Field constant(const GridSpec& grid, Scalar c) {
    Field f(grid);
    f.values_.setConstant(c);
    return f;
  }

  /// Samples fn(x, y) at every node.
  template <typename Fn>
  static Field sample(const GridSpec& grid, Fn&& fn) {
    Field f(grid);
    for (int j = 0; j <= grid.n(); ++j) {
      for (int i = 0; i <= grid.n(); ++i) {
        f.values_(i, j) = static_cast<Scalar>(fn(grid.coord(i), grid.coord(j)));
      }
    }
    return f;
  }

  const GridSpec& grid() const { return grid_; }
  const Array& values() const { return values_; }
  Array& values() { return values_; }

  Scalar operator()(int i, int j) const { return values_(i, j); }
  Scalar& operator()(int i, int j) { return values_(i, j); }

  bool all_finite() const { return values_.allFinite(); }

  bool vanishes_on_boundary() const {
    const int n = grid_.n();
    return (values_.row(0) == Scalar(0)).all() &&
           (values_.row(n) == Scalar(0)).all() &&
           (values_.col(0) == Scalar(0)).all() &&
           (values_.col(n) == Scalar(0)).all();
  }

  void zero_boundary() {
    const int n = grid_.n();
    values_.row(0).setZero();
    values_.row(n).setZero();
    values_.col(0).setZero();
    values_.col(n).setZero();
  }

  Field& operator+=(const Field& o) {
    require_same_grid(grid_, o.grid_, "field +=");
    values_ += o.values_;
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_same_grid(grid_, o.grid_, "field -=");
    values_ -= o.values_;
    return *this;
  }
  Field& operator*=(Scalar c) {
    values_ *= c;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Scalar c, Field a) { return a *= c; }
  friend Field operator*(Field a, Scalar c) { return a *= c; }
  friend Field operator-(Field a) {
    a.values_ = -a.values_;
    return a;
  }

 private:
  GridSpec grid_;
  Array values_;
};

template <typename Scalar>
struct VectorFieldT {
  Field<Scalar> x;
  Field<Scalar> y;

  VectorFieldT() = default;
  explicit VectorFieldT(const GridSpec& grid) : x(grid), y(grid) {}
  VectorFieldT(Field<Scalar> x_, Field<Scalar> y_)
      : x(std::move(x_)), y(std::move(y_)) {
    require_same_grid(x.grid(), y.grid(), "vector field components");
  }

  const GridSpec& grid() const { return x.grid(); }

  /// Pointwise Euclidean magnitude.
  Field<Scalar> magnitude() const {
    return Field<Scalar>(grid(),
                         (x.values().square() + y.values().square()).sqrt());
  }

  bool all_finite() const { return x.all_finite() && y.all_finite(); }

  VectorFieldT& operator+=(const VectorFieldT& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  VectorFieldT& operator-=(const VectorFieldT& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  VectorFieldT& operator*=(Scalar c) {
    x *= c;
    y *= c;
    return *this;
  }

  friend VectorFieldT operator+(VectorFieldT a, const VectorFieldT& b) {
    return a += b;
  }
  friend VectorFieldT operator-(VectorFieldT a, const VectorFieldT& b) {
    return a -= b;
  }
  friend VectorFieldT operator*(Scalar c, VectorFieldT a) { return a *= c; }
  friend VectorFieldT operator*(VectorFieldT a, Scalar c) { return a *= c; }
  friend VectorFieldT operator-(VectorFieldT a) { return a *= Scalar(-1); }
};

using ScalarField = Field<double>;
using VectorField = VectorFieldT<double>;

// ---------------------------------------------------------------------------
// Difference operators

template <typename Scalar>
VectorFieldT<Scalar> gradient(const Field<Scalar>& u) {
  const GridSpec& g = u.grid();
  const int n = g.n();
  const Scalar inv_h = Scalar(1) / static_cast<Scalar>(g.h());
  const auto& v = u.values();
  VectorFieldT<Scalar> out(g);
  auto& gx = out.x.values();
  auto& gy = out.y.values();
  gx.topRows(n) = (v.bottomRows(n) - v.topRows(n)) * inv_h;
  gx.row(n) = -v.row(n) * inv_h;
  gy.leftCols(n) = (v.rightCols(n) - v.leftCols(n)) * inv_h;
  gy.col(n) = -v.col(n) * inv_h;
  return out;
}

template <typename Scalar>
Field<Scalar> divergence(const VectorFieldT<Scalar>& p) {
  const GridSpec& g = p.grid();
  const int n = g.n();
  const Scalar inv_h = Scalar(1) / static_cast<Scalar>(g.h());
  const auto& px = p.x.values();
  const auto& py = p.y.values();
  Field<Scalar> out(g);
  auto& d = out.values();
  d.row(0) = px.row(0) * inv_h;
  d.bottomRows(n) = (px.bottomRows(n) - px.topRows(n)) * inv_h;
  d.col(0) += py.col(0) * inv_h;
  d.rightCols(n) += (py.rightCols(n) - py.leftCols(n)) * inv_h;
  return out;
}

/// 5-point Laplacian at interior nodes; boundary entries are 0.
template <typename Scalar>
Field<Scalar> laplacian(const Field<Scalar>& u) {
  const GridSpec& g = u.grid();
  const int m = g.n() - 1;
  const Scalar inv_h2 = Scalar(1) / static_cast<Scalar>(g.h() * g.h());
  const auto& v = u.values();
  Field<Scalar> out(g);
  out.values().block(1, 1, m, m) =
      (v.block(2, 1, m, m) + v.block(0, 1, m, m) + v.block(1, 2, m, m) +
       v.block(1, 0, m, m) - Scalar(4) * v.block(1, 1, m, m)) *
      inv_h2;
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature and norms

enum class Norm { L1, L2, Linf };

/// The quadrature block: one node per cell.
template <typename Derived>
auto cell_block(const Eigen::ArrayBase<Derived>& values, const GridSpec& g) {
  return values.derived().topLeftCorner(g.n(), g.n());
}

/// h^2 * sum over the quadrature nodes.
template <typename Scalar>
Scalar integrate(const Field<Scalar>& f) {
  const double h = f.grid().h();
  return static_cast<Scalar>(h * h) * cell_block(f.values(), f.grid()).sum();
}

/// All-node pairing h^2 * sum u*v; gradient and divergence are adjoint under it.
template <typename Scalar>
Scalar inner(const Field<Scalar>& a, const Field<Scalar>& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  const double h = a.grid().h();
  return static_cast<Scalar>(h * h) * (a.values() * b.values()).sum();
}

template <typename Scalar>
Scalar inner(const VectorFieldT<Scalar>& a, const VectorFieldT<Scalar>& b) {
  return inner(a.x, b.x) + inner(a.y, b.y);
}

template <typename Scalar>
Scalar norm(const Field<Scalar>& f, Norm kind) {
  using std::sqrt;
  const GridSpec& g = f.grid();
  const Scalar w = static_cast<Scalar>(g.h() * g.h());
  switch (kind) {
    case Norm::L1:
      return w * cell_block(f.values(), g).abs().sum();
    case Norm::L2:
      return sqrt(w * cell_block(f.values(), g).square().sum());
    case Norm::Linf:
      return f.values().abs().maxCoeff();
  }
  return Scalar(0);
}

template <typename Scalar>
Scalar norm(const VectorFieldT<Scalar>& p, Norm kind) {
  return norm(p.magnitude(), kind);
}

/// Unweighted Frobenius norm over every node.
template <typename Scalar>
Scalar frobenius(const Field<Scalar>& f) {
  return f.values().matrix().norm();
}

template <typename Scalar>
Scalar frobenius(const VectorFieldT<Scalar>& p) {
  using std::sqrt;
  return sqrt(p.x.values().square().sum() + p.y.values().square().sum());
}

/// ||u - ref|| / ||ref|| in the discrete L2 norm.
template <typename Scalar>
Scalar relative_l2(const Field<Scalar>& u, const Field<Scalar>& ref) {
  return norm(Field<Scalar>(u - ref), Norm::L2) / norm(ref, Norm::L2);
}

}  // namespace gradflux
