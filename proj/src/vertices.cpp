#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "adjrobust/errors.hpp"
#include "adjrobust/uncertainty.hpp"

namespace adjrobust {

namespace {

// Calls f on every k-subset of {0..n-1} in lexicographic order until f
// returns false.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool same_point(const Vector& a, const Vector& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

void check_cap(std::size_t dim, std::size_t cap) {
  if (dim > cap)
    throw CapExceededError("dimension " + std::to_string(dim) + " exceeds vertex enumeration cap " +
                           std::to_string(cap));
}

}  // namespace

std::vector<Vector> vertices(const Polyhedron& p, std::size_t cap) {
  const std::size_t m = p.dim();
  check_cap(m, cap);
  const std::size_t rows = p.G.rows();
  for (std::size_t i = 0; i < m; ++i) max_coordinate(p, i);  // throws when unbounded

  // Row k < rows is G_k h <= g_k; row rows + i is -h_i <= 0.
  auto coeff = [&](std::size_t k, std::size_t j) {
    return k < rows ? p.G(k, j) : (k - rows == j ? -1.0 : 0.0);
  };
  auto rhs = [&](std::size_t k) { return k < rows ? p.g[k] : 0.0; };

  std::vector<Vector> out;
  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd b(m);
  for_each_subset(rows + m, m, [&](const std::vector<std::size_t>& act) {
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < m; ++j) a(r, j) = coeff(act[r], j);
      b(r) = rhs(act[r]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd x = lu.solve(b);
    Vector h(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (x(j) < -kVertexTol) return;
      h[j] = std::abs(x(j)) <= 1e-12 ? 0.0 : std::max(0.0, x(j));
    }
    for (std::size_t k = 0; k < rows; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += p.G(k, j) * h[j];
      if (s > p.g[k] + kVertexTol) return;
    }
    for (const Vector& v : out)
      if (same_point(v, h, kVertexTol)) return;
    out.push_back(std::move(h));
  });
  return out;
}

UncertaintySet enumerate_vertices(const UncertaintySet& set, std::size_t cap) {
  if (set.is_vrep()) return set;
  return UncertaintySet::vrep(vertices(Polyhedron{set.h().R, set.h().r}, cap));
}

Polyhedron hull_facets(const std::vector<Vector>& points, std::size_t cap) {
  if (points.empty()) throw InvariantViolation("vertex list nonempty");
  const std::size_t m = points.front().size();
  check_cap(m, cap);

  if (std::all_of(points.begin(), points.end(), [](const Vector& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
      })) {
    return Polyhedron{Matrix::identity(m), Vector(m, 0.0)};
  }

  // Full-dimensional iff the differences to the first point span R^m.
  Eigen::MatrixXd diff(points.size(), m);
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t j = 0; j < m; ++j) diff(p, j) = points[p][j] - points[0][j];
  Eigen::FullPivLU<Eigen::MatrixXd> span(diff);
  span.setThreshold(1e-10);
  if (static_cast<std::size_t>(span.rank()) < m)
    throw InvariantViolation("convex hull full-dimensional");

  std::vector<Vector> normals;
  std::vector<double> offsets;
  Eigen::MatrixXd sys(m, m + 1);
  for_each_subset(points.size(), m, [&](const std::vector<std::size_t>& sub) {
    // Hyperplane a^T h = b through the chosen points: (a, b) spans the kernel
    // of [p^T, -1].
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < m; ++j) sys(r, j) = points[sub[r]][j];
      sys(r, m) = -1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    lu.setThreshold(1e-10);
    if (lu.rank() != static_cast<Eigen::Index>(m)) return;
    Eigen::VectorXd k = lu.kernel().col(0);
    const double scale = k.head(m).cwiseAbs().maxCoeff();
    if (scale <= 1e-12) return;
    k /= scale;

    bool above = false, below = false;
    for (const Vector& pt : points) {
      double s = -k(m);
      for (std::size_t j = 0; j < m; ++j) s += k(j) * pt[j];
      above = above || s > kVertexTol;
      below = below || s < -kVertexTol;
    }
    if (above && below) return;
    if (above) k = -k;

    Vector a(m);
    for (std::size_t j = 0; j < m; ++j) a[j] = std::abs(k(j)) <= 1e-12 ? 0.0 : k(j);
    double b = std::abs(k(m)) <= 1e-12 ? 0.0 : k(m);

    // -h_i <= 0 is already implied by h >= 0.
    if (b == 0.0 && std::count_if(a.begin(), a.end(), [](double x) { return x != 0.0; }) == 1 &&
        std::any_of(a.begin(), a.end(), [](double x) { return x < 0.0; }))
      return;
    for (std::size_t f = 0; f < normals.size(); ++f)
      if (same_point(normals[f], a, 1e-9) && std::abs(offsets[f] - b) <= 1e-9) return;
    normals.push_back(std::move(a));
    offsets.push_back(b);
  });

  Polyhedron out{Matrix::from_rows(normals), std::move(offsets)};
  if (normals.empty()) out.G = Matrix(0, m);
  return out;
}

}  // namespace adjrobust
