#include "jumpmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace jumpmc::geometry {

Point make_point(std::initializer_list<double> coords) {
  if (coords.size() == 0 || coords.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("make_point: dimension must be 1..3");
  Point p;
  p.dim = static_cast<int>(coords.size());
  int k = 0;
  for (double c : coords) p.x[static_cast<std::size_t>(k++)] = c;
  return p;
}

double norm(const Point& p) {
  double s = 0.0;
  for (int k = 0; k < p.dim; ++k) s += p[k] * p[k];
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int k = 0; k < a.dim; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

bool coords_equal(const Point& a, const Point& b, double tol) {
  if (a.dim != b.dim) return false;
  for (int k = 0; k < a.dim; ++k)
    if (std::abs(a[k] - b[k]) > tol) return false;
  return true;
}

double Domain::volume() const { return std::pow(2.0 * half_width, dim); }

double Domain::diameter() const {
  return 2.0 * half_width * std::sqrt(static_cast<double>(dim));
}

bool Domain::contains(const Point& p) const {
  for (int k = 0; k < dim; ++k)
    if (std::abs(p[k]) > half_width) return false;
  return true;
}

Point Domain::reflect_into(Point p) const {
  const double L = half_width;
  const double period = 4.0 * L;
  for (int k = 0; k < dim; ++k) {
    double m = std::fmod(p[k] + L, period);
    if (m < 0.0) m += period;
    p[k] = L - std::abs(m - 2.0 * L);
  }
  return p;
}

void Domain::validate() const {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("Domain: dimension must be 1..3");
  if (!(half_width > 0.0))
    throw std::invalid_argument("Domain: half_width must be positive");
}

Configuration::Configuration(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("Configuration: dimension must be 1..3");
}

Configuration Configuration::from_points(int dim,
                                         const std::vector<Point>& pts) {
  Configuration c(dim);
  for (const Point& p : pts) c.add(p);
  return c;
}

Point Configuration::point(int i) const {
  if (i < 0 || i >= size())
    throw std::out_of_range("Configuration::point: index out of range");
  Point p;
  p.dim = dim_;
  for (int k = 0; k < dim_; ++k)
    p[k] = xs_[static_cast<std::size_t>(i * dim_ + k)];
  return p;
}

void Configuration::set_point(int i, const Point& p) {
  if (i < 0 || i >= size())
    throw std::out_of_range("Configuration::set_point: index out of range");
  if (p.dim != dim_)
    throw std::invalid_argument("Configuration::set_point: dimension mismatch");
  for (int k = 0; k < dim_; ++k)
    xs_[static_cast<std::size_t>(i * dim_ + k)] = p[k];
}

void Configuration::add(const Point& p) {
  if (p.dim != dim_)
    throw std::invalid_argument("Configuration::add: dimension mismatch");
  for (int k = 0; k < dim_; ++k) xs_.push_back(p[k]);
}

void Configuration::remove(int i) {
  if (i < 0 || i >= size())
    throw std::out_of_range("Configuration::remove: index out of range");
  const auto first = xs_.begin() + static_cast<std::ptrdiff_t>(i * dim_);
  xs_.erase(first, first + dim_);
}

Configuration apply_move(const Configuration& xi, int i, const Point& y) {
  Configuration out = xi;
  out.set_point(i, y);
  return out;
}

Configuration apply_move(const Domain& dom, const Configuration& xi, int i,
                         const Point& y) {
  if (i < 0 || i >= xi.size())
    throw std::out_of_range("apply_move: index out of range");
  if (!dom.contains(y)) {
    if (dom.boundary == BoundaryMode::reject) return xi;
    return apply_move(xi, i, dom.reflect_into(y));
  }
  return apply_move(xi, i, y);
}

Configuration add_point(const Configuration& xi, const Point& y) {
  Configuration out = xi;
  out.add(y);
  return out;
}

Configuration remove_point(const Configuration& xi, int i) {
  Configuration out = xi;
  out.remove(i);
  return out;
}

int count_in_ball(const Configuration& xi, double r) {
  if (r < 0.0) throw std::invalid_argument("count_in_ball: negative radius");
  int n = 0;
  for (int i = 0; i < xi.size(); ++i)
    if (norm(xi.point(i)) <= r) ++n;
  return n;
}

int count_in_ball(const Configuration& xi, const Point& center, double r) {
  if (r < 0.0) throw std::invalid_argument("count_in_ball: negative radius");
  int n = 0;
  for (int i = 0; i < xi.size(); ++i)
    if (distance(xi.point(i), center) <= r) ++n;
  return n;
}

bool multiset_equal(const Configuration& a, const Configuration& b,
                    double tol) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  std::vector<Point> pa, pb;
  for (int i = 0; i < a.size(); ++i) pa.push_back(a.point(i));
  for (int i = 0; i < b.size(); ++i) pb.push_back(b.point(i));
  auto lex = [](const Point& p, const Point& q) {
    for (int k = 0; k < p.dim; ++k) {
      if (p[k] < q[k]) return true;
      if (p[k] > q[k]) return false;
    }
    return false;
  };
  std::sort(pa.begin(), pa.end(), lex);
  std::sort(pb.begin(), pb.end(), lex);
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (!coords_equal(pa[i], pb[i], tol)) return false;
  return true;
}

std::string to_csv(const Configuration& xi) {
  std::ostringstream out;
  for (int k = 0; k < xi.dim(); ++k) out << (k ? ",x" : "x") << k + 1;
  out << '\n';
  char buf[64];
  for (int i = 0; i < xi.size(); ++i) {
    const Point p = xi.point(i);
    for (int k = 0; k < xi.dim(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", p[k]);
      out << (k ? "," : "") << buf;
    }
    out << '\n';
  }
  return out.str();
}

Configuration configuration_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("configuration_from_csv: empty input");
  int dim = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
  Configuration out(dim);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    Point p;
    p.dim = dim;
    std::size_t pos = 0;
    for (int k = 0; k < dim; ++k) {
      std::size_t next = line.find(',', pos);
      p[k] = std::stod(line.substr(pos, next - pos));
      pos = (next == std::string::npos) ? line.size() : next + 1;
    }
    out.add(p);
  }
  return out;
}

}  // namespace jumpmc::geometry
