#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "frontlab/vec.hpp"

namespace frontlab {

using Index = std::array<long, kMaxDim>;

/// Compact subset of R^n stored as occupancy of the lattice h*Z^n over a box of
/// lattice indices [lo, lo + size). Cell i represents the point i*h. Axes beyond
/// the dimension have lo = 0 and size = 1.
///
/// Scaling the set by c > 0 is exact: the indices stay and h becomes c*h. Two
/// grids are lattice-compatible when their spacings agree.
class GridSet {
 public:
  GridSet() = default;
  GridSet(int dim, double h, const Index& lo, const Index& size);

  /// Box covering [min_corner, max_corner] plus `margin` extra cells per side.
  static GridSet covering(int dim, double h, const Vec& min_corner, const Vec& max_corner, long margin = 1);

  static GridSet single(int dim, double h, const Vec& x);
  /// Closed Euclidean ball: cells whose center is within r (+1e-9 h) of c.
  static GridSet ball(int dim, double h, const Vec& c, double r);
  /// Unit cell Y = [0,1]^n.
  static GridSet unit_cell(int dim, double h);
  /// Reflected cell -Y = [-1,0]^n.
  static GridSet reflected_cell(int dim, double h);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] const Index& lo() const { return lo_; }
  [[nodiscard]] const Index& size() const { return size_; }
  [[nodiscard]] std::size_t cell_count() const { return bits_.size(); }
  [[nodiscard]] std::size_t occupied_count() const;
  [[nodiscard]] bool empty() const { return occupied_count() == 0; }

  [[nodiscard]] bool in_box(const Index& i) const;
  [[nodiscard]] std::size_t linear(const Index& i) const;
  [[nodiscard]] Index index_of(std::size_t lin) const;
  [[nodiscard]] Vec point(const Index& i) const;
  [[nodiscard]] Vec point(std::size_t lin) const { return point(index_of(lin)); }
  /// Nearest lattice index to x (no box check).
  [[nodiscard]] Index nearest(const Vec& x) const;

  [[nodiscard]] bool test(std::size_t lin) const { return bits_[lin] != 0; }
  [[nodiscard]] bool test(const Index& i) const { return in_box(i) && bits_[linear(i)] != 0; }
  void set(std::size_t lin, bool v = true) { bits_[lin] = v ? 1 : 0; }
  void set(const Index& i, bool v = true);
  /// Marks the cell nearest to x; throws window-overflow when outside the box.
  void mark(const Vec& x);

  [[nodiscard]] const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }

  [[nodiscard]] std::vector<Index> occupied_indices() const;
  [[nodiscard]] std::vector<Vec> occupied_points() const;

  /// True when an occupied cell lies on the outermost layer of the box.
  [[nodiscard]] bool touches_boundary() const;

  /// Copy on the same lattice but with a different box (cells outside dropped).
  [[nodiscard]] GridSet reboxed(const Index& lo, const Index& size) const;
  /// Smallest box holding the occupied cells plus `margin` cells per side.
  [[nodiscard]] GridSet trimmed(long margin = 1) const;
  /// c * A, exact (h scales).
  [[nodiscard]] GridSet scaled(double c) const;
  /// A + z for a lattice vector z (index shift).
  [[nodiscard]] GridSet shifted(const Index& z) const;

  /// Cellwise inclusion on a common lattice (this subset of other).
  [[nodiscard]] bool subset_of(const GridSet& other) const;
  [[nodiscard]] GridSet united(const GridSet& other) const;

  /// sup |x| over occupied cells.
  [[nodiscard]] double radius() const;
  /// Occupied extremes along one axis (1D endpoints).
  [[nodiscard]] double min_coord(int axis) const;
  [[nodiscard]] double max_coord(int axis) const;

  void dump(std::ostream& out) const;
  static GridSet load(std::istream& in);

 private:
  int dim_ = 1;
  double h_ = 1.0;
  Index lo_{0, 0, 0};
  Index size_{1, 1, 1};
  std::vector<std::uint8_t> bits_;
};

/// Convex polytope given by its extreme points.
///
/// Full-dimensional polytopes also carry facets as outward unit halfspaces and
/// boundary simplices (points in 1D, edges in 2D, triangles in 3D). Lower
/// dimensional polytopes are stored through an orthonormal affine frame and a
/// full-dimensional polytope in frame coordinates.
class Polytope {
 public:
  struct Halfspace {
    Vec normal;  // unit, outward
    double offset = 0.0;
  };

  Polytope() = default;

  /// Convex hull of arbitrary points (duplicates and interior points allowed).
  static Polytope hull(int dim, const std::vector<Vec>& points);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int affine_dim() const { return affine_dim_; }
  [[nodiscard]] bool full_dimensional() const { return affine_dim_ == dim_; }
  [[nodiscard]] const std::vector<Vec>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<Halfspace>& facets() const { return facets_; }

  [[nodiscard]] double support(const Vec& p) const;
  /// Negative inside (minus the distance to the boundary), positive outside
  /// (Euclidean distance). Lower dimensional polytopes never report negative.
  [[nodiscard]] double signed_distance(const Vec& x) const;
  [[nodiscard]] bool contains(const Vec& x, double tol = 1e-9) const { return signed_distance(x) <= tol; }

  /// sup |q| over the polytope.
  [[nodiscard]] double norm() const;
  [[nodiscard]] Polytope scaled(double c) const;
  [[nodiscard]] Polytope translated(const Vec& z) const;
  [[nodiscard]] Vec centroid() const;

  /// Vertices lying on a facet plane (within tol).
  [[nodiscard]] std::vector<int> facet_vertices(std::size_t facet, double tol) const;

  void dump_csv(std::ostream& out) const;

 private:
  friend struct PolytopeBuilder;

  int dim_ = 0;
  int affine_dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<Halfspace> facets_;
  std::vector<std::array<int, kMaxDim>> faces_;  // boundary simplices (full-dim only)

  // Lower dimensional case.
  Vec origin_;
  std::vector<Vec> basis_;
  std::shared_ptr<const Polytope> inner_;

  [[nodiscard]] Vec to_frame(const Vec& x) const;
  [[nodiscard]] double face_distance(const Vec& x) const;
};

struct WeightedVertex {
  Vec point;
  double weight = 0.0;
  int vertex = -1;  // index into the polytope's vertex list
};

/// Hausdorff distance. Grid pairs use an exact squared Euclidean distance
/// transform over occupied cell centers; a polytope compared with a grid is
/// first rasterized on the grid's lattice; polytope pairs use
/// sup_{|p|=1} |h_A(p) - h_B(p)| over a dense direction set.
double hausdorff(const GridSet& a, const GridSet& b);
double hausdorff(const GridSet& a, const Polytope& b);
double hausdorff(const Polytope& a, const GridSet& b);
double hausdorff(const Polytope& a, const Polytope& b);

/// sup_{x in A} d(x, B) over occupied cells. When the spacings differ the EDT
/// value at the snapped query point seeds an exact local search.
double directed_excess(const GridSet& a, const GridSet& b);

/// Exact squared distance (in cells) from every cell of the box to the nearest
/// occupied cell; +inf where the grid is empty.
std::vector<double> squared_distance_transform(const GridSet& g);

Polytope convex_hull(const GridSet& a);
Polytope convex_hull(int dim, const std::vector<Vec>& points);

/// Occupancy of A + B (FFT convolution of indicators). B is resampled onto A's
/// lattice when the spacings differ.
GridSet minkowski_sum(const GridSet& a, const GridSet& b, std::size_t max_cells = std::size_t{1} << 27);

double support_function(const Polytope& p, const Vec& dir);

/// x as a convex combination of at most n+1 vertices of P.
std::vector<WeightedVertex> caratheodory_decompose(const Polytope& p, const Vec& x, double tol = 1e-9);

/// Removes points from a convex combination through affine dependences until
/// at most dim+1 remain. Weights must be nonnegative and sum to 1.
std::vector<WeightedVertex> reduce_combination(int dim, std::vector<WeightedVertex> combo);

/// Cells of the lattice h*Z^n whose center lies in P, plus cells hit by boundary
/// samples at spacing h/2. The box covers P with `margin` extra cells per side.
GridSet rasterize(const Polytope& p, double h, long margin = 2);

}  // namespace frontlab
