#pragma once

// Polyhedral uncertainty sets in R^m_+.
//
// UncertaintySet is the user-facing type: either an H-representation
// {h >= 0 : R h <= r} with R, r >= 0, or an explicit vertex list.  Polyhedron
// is the working form {h >= 0 : G h <= g} with no sign restriction on G or g;
// it is what the LP builders consume, and what the convex hull of a vertex
// list is converted into.

#include <cstddef>
#include <variant>
#include <vector>

#include "adjrobust/matrix.hpp"

namespace adjrobust {

inline constexpr double kVertexTol = 1e-9;
inline constexpr std::size_t kDefaultVertexCap = 12;

struct HRep {
  Matrix R;
  Vector r;
  friend bool operator==(const HRep&, const HRep&) = default;
};

struct VRep {
  std::vector<Vector> vertices;
  friend bool operator==(const VRep&, const VRep&) = default;
};

class UncertaintySet {
 public:
  // Placeholder with dimension 0; fails any instance validation.
  UncertaintySet() = default;

  // Both factories validate and throw InvariantViolation or
  // UnboundedSetError.
  static UncertaintySet hrep(Matrix R, Vector r);
  static UncertaintySet vrep(std::vector<Vector> vertices);

  bool is_hrep() const { return std::holds_alternative<HRep>(rep_); }
  bool is_vrep() const { return !is_hrep(); }
  std::size_t dim() const { return dim_; }
  // L, the number of inequality rows; 0 for a vertex list.
  std::size_t num_rows() const;

  const HRep& h() const { return std::get<HRep>(rep_); }
  const VRep& v() const { return std::get<VRep>(rep_); }

  friend bool operator==(const UncertaintySet&, const UncertaintySet&) = default;

 private:
  UncertaintySet(std::variant<HRep, VRep> rep, std::size_t dim) : rep_(std::move(rep)), dim_(dim) {}
  std::variant<HRep, VRep> rep_ = VRep{};
  std::size_t dim_ = 0;
};

struct Polyhedron {
  Matrix G;
  Vector g;
  std::size_t dim() const { return G.cols(); }
};

// {h in [0,1]^m : sum h <= sqrt(m)}.
UncertaintySet budget_set(std::size_t m);

// {w >= 0 : B^T w <= d_bar e}.
Polyhedron dualized_set(const Matrix& B, double d_bar);

// H-representation of the set.  A vertex list goes through hull_facets().
Polyhedron to_polyhedron(const UncertaintySet& set, std::size_t cap = kDefaultVertexCap);

// max c^T h over the set.  Throws UnboundedSetError.
double max_linear(const Polyhedron& p, const Vector& c);
double max_linear(const UncertaintySet& set, const Vector& c);

double max_coordinate(const Polyhedron& p, std::size_t i);
double max_coordinate(const UncertaintySet& set, std::size_t i);

// All vertices, by trying every dim-subset of the rows of [G; -I] as the
// active set.  Throws CapExceededError when dim > cap.
std::vector<Vector> vertices(const Polyhedron& p, std::size_t cap = kDefaultVertexCap);
UncertaintySet enumerate_vertices(const UncertaintySet& set, std::size_t cap = kDefaultVertexCap);

// Facets of conv(points), as {h >= 0 : G h <= g}.  Facets that only restate
// h_i >= 0 are dropped.  The hull must be full-dimensional, or {0}.
Polyhedron hull_facets(const std::vector<Vector>& points, std::size_t cap = kDefaultVertexCap);

}  // namespace adjrobust
