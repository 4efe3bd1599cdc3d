#pragma once

#include <array>
#include <string>
#include <vector>

namespace jumpmc::geometry {

// Points carry their own dimension so configurations of different
// dimensionality cannot be mixed silently. Coordinates beyond dim are zero.
inline constexpr int kMaxDim = 3;

struct Point {
  std::array<double, kMaxDim> x{};
  int dim = 1;

  double operator[](int k) const { return x[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return x[static_cast<std::size_t>(k)]; }
};

Point make_point(std::initializer_list<double> coords);
double norm(const Point& p);
double distance(const Point& a, const Point& b);
bool coords_equal(const Point& a, const Point& b, double tol = 0.0);

enum class BoundaryMode { reject, reflect };

// The box [-L, L]^dim. The origin is always interior.
struct Domain {
  int dim = 1;
  double half_width = 1.0;
  BoundaryMode boundary = BoundaryMode::reject;

  double volume() const;
  // Largest distance between two box points, 2L*sqrt(dim).
  double diameter() const;
  bool contains(const Point& p) const;
  // Folds each coordinate back into [-L, L] by reflection at the walls.
  Point reflect_into(Point p) const;
  void validate() const;
};

// Ordered (labeled) list of points. Labels are list positions; all symmetric
// comparisons go through multiset_equal.
class Configuration {
 public:
  explicit Configuration(int dim = 1);
  static Configuration from_points(int dim, const std::vector<Point>& pts);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(xs_.size()) / dim_; }
  bool empty() const { return xs_.empty(); }

  Point point(int i) const;
  void set_point(int i, const Point& p);
  void add(const Point& p);
  void remove(int i);

 private:
  int dim_;
  std::vector<double> xs_;  // flat, size() * dim_ entries
};

// xi^{x_i y}: relocate particle i to y. Count is preserved.
Configuration apply_move(const Configuration& xi, int i, const Point& y);
// Boundary-aware variant: reject returns xi unchanged for y outside the box,
// reflect folds y back in.
Configuration apply_move(const Domain& dom, const Configuration& xi, int i,
                         const Point& y);
// xi . y and xi \ x_i.
Configuration add_point(const Configuration& xi, const Point& y);
Configuration remove_point(const Configuration& xi, int i);

// Number of points with |x| <= r (closed ball about the origin).
int count_in_ball(const Configuration& xi, double r);
int count_in_ball(const Configuration& xi, const Point& center, double r);

bool multiset_equal(const Configuration& a, const Configuration& b,
                    double tol = 0.0);

// CSV with header x1..xd, one row per particle in label order, %.17g floats.
std::string to_csv(const Configuration& xi);
Configuration configuration_from_csv(const std::string& text);

}  // namespace jumpmc::geometry
