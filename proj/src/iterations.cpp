#include "fejercert/iterations.hpp"

#include "fejercert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fejercert {

json point_to_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

Point point_from_json(const json& j, std::size_t dim, const std::string& pointer) {
  if (!j.is_array()) throw ConfigError(pointer, "expected an array of numbers");
  if (dim != 0 && j.size() != dim) {
    throw ConfigError(pointer, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(j.size()));
  }
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(pointer + "/" + std::to_string(i), "expected a number");
    p[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    if (!std::isfinite(p[static_cast<Eigen::Index>(i)])) {
      throw ConfigError(pointer + "/" + std::to_string(i), "must be finite");
    }
  }
  return p;
}

Matrix matrix_from_json(const json& j, std::size_t dim, const std::string& pointer) {
  if (!j.is_array() || j.size() != dim) throw ConfigError(pointer, "expected " + std::to_string(dim) + " rows");
  Matrix M(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    Point row = point_from_json(j[r], dim, pointer + "/" + std::to_string(r));
    M.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return M;
}

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) rows.push_back(point_to_json(M.row(r).transpose()));
  return rows;
}

namespace {

double number(const json& j, const char* key, const std::string& pointer) {
  if (!j.contains(key)) throw ConfigError(pointer + "/" + key, "missing field");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(pointer + "/" + key, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(pointer + "/" + key, "must be finite");
  return d;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt(const Point& p) { return point_to_json(p).dump(); }

}  // namespace

// --- Domain -----------------------------------------------------------------

Domain Domain::ball(Point center, double radius) {
  if (!(radius > 0)) throw RangeError("radius", "must be positive");
  Domain d;
  d.kind_ = Kind::Ball;
  d.center_ = std::move(center);
  d.radius_ = radius;
  return d;
}

Domain Domain::box(Point lo, Point hi) {
  if (lo.size() != hi.size()) throw RangeError("hi", "dimension mismatch");
  if ((hi.array() < lo.array()).any()) throw RangeError("hi", "must be >= lo componentwise");
  Domain d;
  d.kind_ = Kind::Box;
  d.center_ = (lo + hi) / 2;
  d.lo_ = std::move(lo);
  d.hi_ = std::move(hi);
  return d;
}

bool Domain::contains(const Point& p, double tau) const {
  if (kind_ == Kind::Ball) return (p - center_).norm() <= radius_ + tau;
  return (p.array() >= lo_.array() - tau).all() && (p.array() <= hi_.array() + tau).all();
}

double Domain::diameter() const { return kind_ == Kind::Ball ? 2 * radius_ : (hi_ - lo_).norm(); }

double Domain::norm_bound() const {
  if (kind_ == Kind::Ball) return center_.norm() + radius_;
  return lo_.cwiseAbs().cwiseMax(hi_.cwiseAbs()).norm();
}

Point Domain::sample(std::mt19937_64& rng) const {
  const auto d = static_cast<Eigen::Index>(dim());
  Point p(d);
  if (kind_ == Kind::Box) {
    for (Eigen::Index i = 0; i < d; ++i) {
      std::uniform_real_distribution<double> u(lo_[i], hi_[i]);
      p[i] = lo_[i] == hi_[i] ? lo_[i] : u(rng);
    }
    return p;
  }
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double norm = 0;
  do {
    for (Eigen::Index i = 0; i < d; ++i) p[i] = gauss(rng);
    norm = p.norm();
  } while (norm == 0);
  double r = radius_ * std::pow(u(rng), 1.0 / static_cast<double>(d));
  return center_ + p * (r / norm);
}

std::vector<Point> Domain::extreme_points() const {
  std::vector<Point> out;
  const auto d = static_cast<Eigen::Index>(dim());
  if (kind_ == Kind::Ball) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (double s : {-1.0, 1.0}) {
        Point p = center_;
        p[i] += s * radius_;
        out.push_back(p);
      }
    }
    return out;
  }
  if (d > 10) return {lo_, hi_};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    Point p(d);
    for (Eigen::Index i = 0; i < d; ++i) p[i] = (mask >> i) & 1 ? hi_[i] : lo_[i];
    out.push_back(p);
  }
  return out;
}

json Domain::to_json() const {
  if (kind_ == Kind::Ball) return {{"kind", "ball"}, {"center", point_to_json(center_)}, {"radius", radius_}};
  return {{"kind", "box"}, {"lo", point_to_json(lo_)}, {"hi", point_to_json(hi_)}};
}

Domain Domain::from_json(const json& j, std::size_t dim, const std::string& pointer) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError(pointer, "expected a domain {\"kind\": \"ball\"|\"box\"}");
  std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "ball") {
      Point center = j.contains("center") ? point_from_json(j.at("center"), dim, pointer + "/center")
                                          : Point::Zero(static_cast<Eigen::Index>(dim));
      return ball(center, number(j, "radius", pointer));
    }
    if (kind == "box") {
      if (!j.contains("lo") || !j.contains("hi")) throw ConfigError(pointer, "box needs lo and hi");
      return box(point_from_json(j.at("lo"), dim, pointer + "/lo"), point_from_json(j.at("hi"), dim, pointer + "/hi"));
    }
  } catch (const RangeError& e) {
    throw ConfigError(pointer + "/" + e.field(), e.what());
  }
  throw ConfigError(pointer + "/kind", "unknown domain kind '" + kind + "'");
}

// --- Declared properties ------------------------------------------------------

json DeclaredProperties::to_json() const {
  json j = json::object();
  if (nonexpansive) j["nonexpansive"] = true;
  if (firmly_lambda) j["firmly_nonexpansive"] = rational_to_json(*firmly_lambda);
  if (spc_kappa) j["strict_pseudo_contraction"] = rational_to_json(*spc_kappa);
  if (condition_e_mu) j["condition_e"] = rational_to_json(*condition_e_mu);
  if (asymptotic_kn) j["asymptotically_nonexpansive"] = asymptotic_kn->to_json();
  return j;
}

DeclaredProperties DeclaredProperties::from_json(const json& j, const std::string& pointer) {
  DeclaredProperties d;
  if (j.is_null()) return d;
  if (!j.is_object()) throw ConfigError(pointer, "expected an object");
  for (const auto& [key, value] : j.items()) {
    std::string at = pointer + "/" + key;
    if (key == "nonexpansive") {
      if (!value.is_boolean()) throw ConfigError(at, "expected a boolean");
      d.nonexpansive = value.get<bool>();
    } else if (key == "firmly_nonexpansive") {
      Rational l = rational_from_json(value, at);
      if (l <= 0 || l >= 1) throw ConfigError(at, "lambda must lie in (0,1)");
      d.firmly_lambda = l;
    } else if (key == "strict_pseudo_contraction") {
      Rational k = rational_from_json(value, at);
      if (k < 0 || k >= 1) throw ConfigError(at, "kappa must lie in [0,1)");
      d.spc_kappa = k;
    } else if (key == "condition_e") {
      Rational mu = rational_from_json(value, at);
      if (mu < 1) throw ConfigError(at, "mu must be >= 1");
      d.condition_e_mu = mu;
    } else if (key == "asymptotically_nonexpansive") {
      d.asymptotic_kn = SequenceSpec::from_json(value, at);
    } else {
      throw ConfigError(at, "unknown property");
    }
  }
  return d;
}

// --- Operator -----------------------------------------------------------------

Operator Operator::scale(std::size_t dim, double a) {
  Operator T;
  T.kind_ = Kind::Scale;
  T.dim_ = dim;
  T.a_ = a;
  return T;
}

Operator Operator::affine(Matrix A, Point c) {
  if (A.rows() != A.cols() || A.rows() != c.size()) throw RangeError("A", "dimension mismatch");
  Operator T;
  T.kind_ = Kind::Affine;
  T.dim_ = static_cast<std::size_t>(c.size());
  T.A_ = std::move(A);
  T.c_ = std::move(c);
  return T;
}

Operator Operator::project_box(Point lo, Point hi) {
  if (lo.size() != hi.size() || (hi.array() < lo.array()).any()) throw RangeError("hi", "must be >= lo");
  Operator T;
  T.kind_ = Kind::ProjectBox;
  T.dim_ = static_cast<std::size_t>(lo.size());
  T.lo_ = std::move(lo);
  T.hi_ = std::move(hi);
  return T;
}

Operator Operator::project_ball(Point center, double radius) {
  if (!(radius >= 0)) throw RangeError("radius", "must be nonnegative");
  Operator T;
  T.kind_ = Kind::ProjectBall;
  T.dim_ = static_cast<std::size_t>(center.size());
  T.c_ = std::move(center);
  T.a_ = radius;
  return T;
}

Operator Operator::prox_quadratic(Matrix Q, Point c, double gamma) {
  if (!(gamma > 0)) throw RangeError("gamma", "must be positive");
  if (Q.rows() != Q.cols() || Q.rows() != c.size()) throw RangeError("Q", "dimension mismatch");
  if (!Q.isApprox(Q.transpose())) throw RangeError("Q", "must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  if (es.eigenvalues().minCoeff() < -1e-12) throw RangeError("Q", "must be positive semidefinite");
  Operator T;
  T.kind_ = Kind::ProxQuadratic;
  T.dim_ = static_cast<std::size_t>(c.size());
  T.A_ = std::move(Q);
  T.c_ = std::move(c);
  T.gamma_ = gamma;
  T.llt_.compute(Matrix::Identity(T.A_.rows(), T.A_.cols()) + gamma * T.A_);
  return T;
}

Operator Operator::spc_from_nonexpansive(const Operator& inner, const Rational& kappa) {
  if (kappa < 0 || kappa >= 1) throw RangeError("kappa", "must lie in [0,1)");
  Operator T;
  T.kind_ = Kind::SpcFromNonexpansive;
  T.dim_ = inner.dim();
  T.kappa_ = kappa;
  T.inner_ = std::make_shared<const Operator>(inner);
  return T;
}

Operator Operator::reflection(Point center, double a) {
  if (!(a >= 0)) throw RangeError("a", "must be nonnegative");
  Operator T;
  T.kind_ = Kind::Reflection;
  T.dim_ = static_cast<std::size_t>(center.size());
  T.c_ = std::move(center);
  T.a_ = a;
  return T;
}

Operator Operator::piecewise1d(std::vector<Piece> pieces) {
  if (pieces.empty()) throw RangeError("pieces", "at least one piece is required");
  for (const auto& p : pieces) {
    if (!(p.lo <= p.hi)) throw RangeError("pieces", "each piece needs lo <= hi");
  }
  Operator T;
  T.kind_ = Kind::Piecewise1d;
  T.dim_ = 1;
  T.pieces_ = std::move(pieces);
  return T;
}

Point Operator::apply(const Point& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw DomainError("operator applied to a point of wrong dimension");
  switch (kind_) {
    case Kind::Scale: return a_ * x;
    case Kind::Affine: return A_ * x + c_;
    case Kind::ProjectBox: return x.cwiseMax(lo_).cwiseMin(hi_);
    case Kind::ProjectBall: {
      Point d = x - c_;
      double n = d.norm();
      return n <= a_ ? x : Point(c_ + d * (a_ / n));
    }
    case Kind::ProxQuadratic: return llt_.solve(x - gamma_ * c_);
    case Kind::SpcFromNonexpansive: {
      double k = to_double(kappa_);
      return (inner_->apply(x) - k * x) / (1 - k);
    }
    case Kind::Reflection: return c_ - a_ * (x - c_);
    case Kind::Piecewise1d: {
      double v = x[0];
      for (const auto& p : pieces_) {
        bool above = p.lo_open ? v > p.lo : v >= p.lo;
        bool below = p.hi_open ? v < p.hi : v <= p.hi;
        if (above && below) {
          Point out(1);
          out[0] = p.a * v + p.c;
          return out;
        }
      }
      throw DomainError("piecewise map undefined at " + fmt(v));
    }
  }
  return x;
}

Point Operator::power(const Point& x, std::uint64_t n) const {
  Point y = x;
  for (std::uint64_t i = 0; i < n; ++i) y = apply(y);
  return y;
}

Operator& Operator::declare(DeclaredProperties d) {
  declared_ = std::move(d);
  return *this;
}

Operator& Operator::set_fixed_point(Point p) {
  fixed_override_ = std::move(p);
  return *this;
}

std::optional<Point> Operator::fixed_point() const {
  if (fixed_override_) return fixed_override_;
  const auto d = static_cast<Eigen::Index>(dim_);
  auto solve = [&](const Matrix& M, const Point& rhs) -> std::optional<Point> {
    Eigen::FullPivLU<Matrix> lu(M);
    Point p = lu.solve(rhs);
    if ((M * p - rhs).norm() > 1e-9 * (1 + rhs.norm())) return std::nullopt;
    return p;
  };
  switch (kind_) {
    case Kind::Scale: return Point::Zero(d);
    case Kind::Affine: return solve(Matrix::Identity(d, d) - A_, c_);
    case Kind::ProjectBox: return Point((lo_ + hi_) / 2);
    case Kind::ProjectBall: return c_;
    case Kind::ProxQuadratic: return solve(A_, -c_);
    case Kind::SpcFromNonexpansive: return inner_->fixed_point();
    case Kind::Reflection: return c_;
    case Kind::Piecewise1d:
      for (const auto& p : pieces_) {
        std::optional<double> v;
        if (p.a != 1) {
          v = p.c / (1 - p.a);
        } else if (p.c == 0) {
          v = p.lo_open ? (p.lo + p.hi) / 2 : p.lo;
        }
        if (!v) continue;
        bool above = p.lo_open ? *v > p.lo : *v >= p.lo;
        bool below = p.hi_open ? *v < p.hi : *v <= p.hi;
        if (above && below) return Point::Constant(1, *v);
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<Point> Operator::special_points() const {
  std::vector<Point> out;
  if (kind_ == Kind::Piecewise1d) {
    for (const auto& p : pieces_) {
      out.push_back(Point::Constant(1, p.lo));
      out.push_back(Point::Constant(1, p.hi));
    }
  } else if (kind_ == Kind::SpcFromNonexpansive) {
    out = inner_->special_points();
  }
  return out;
}

json Operator::to_json() const {
  json j;
  switch (kind_) {
    case Kind::Scale: j = {{"kind", "scale"}, {"a", a_}}; break;
    case Kind::Affine: j = {{"kind", "affine"}, {"A", matrix_to_json(A_)}, {"c", point_to_json(c_)}}; break;
    case Kind::ProjectBox: j = {{"kind", "project_box"}, {"lo", point_to_json(lo_)}, {"hi", point_to_json(hi_)}}; break;
    case Kind::ProjectBall: j = {{"kind", "project_ball"}, {"center", point_to_json(c_)}, {"radius", a_}}; break;
    case Kind::ProxQuadratic:
      j = {{"kind", "prox_quadratic"}, {"Q", matrix_to_json(A_)}, {"c", point_to_json(c_)}, {"gamma", gamma_}};
      break;
    case Kind::SpcFromNonexpansive:
      j = {{"kind", "spc_from_nonexpansive"}, {"inner", inner_->to_json()}, {"kappa", rational_to_json(kappa_)}};
      break;
    case Kind::Reflection: j = {{"kind", "reflection"}, {"center", point_to_json(c_)}, {"a", a_}}; break;
    case Kind::Piecewise1d: {
      json ps = json::array();
      for (const auto& p : pieces_) {
        ps.push_back({{"lo", p.lo}, {"hi", p.hi}, {"lo_open", p.lo_open}, {"hi_open", p.hi_open}, {"a", p.a}, {"c", p.c}});
      }
      j = {{"kind", "piecewise1d"}, {"pieces", ps}};
      break;
    }
  }
  json props = declared_.to_json();
  if (!props.empty()) j["properties"] = props;
  if (fixed_override_) j["fixed_point"] = point_to_json(*fixed_override_);
  return j;
}

Operator Operator::from_json(const json& j, std::size_t dim, const std::string& pointer) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError(pointer, "expected an operator {\"kind\": ...}");
  }
  std::string kind = j.at("kind").get<std::string>();
  const auto d = static_cast<Eigen::Index>(dim);
  auto point = [&](const char* key, std::optional<Point> fallback = std::nullopt) {
    if (!j.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(pointer + "/" + key, "missing field");
    }
    return point_from_json(j.at(key), dim, pointer + "/" + key);
  };
  Operator T;
  try {
    if (kind == "scale") {
      T = scale(dim, number(j, "a", pointer));
    } else if (kind == "affine") {
      if (!j.contains("A")) throw ConfigError(pointer + "/A", "missing field");
      T = affine(matrix_from_json(j.at("A"), dim, pointer + "/A"), point("c", Point::Zero(d)));
    } else if (kind == "project_box") {
      T = project_box(point("lo"), point("hi"));
    } else if (kind == "project_ball") {
      T = project_ball(point("center", Point::Zero(d)), number(j, "radius", pointer));
    } else if (kind == "prox_quadratic") {
      if (!j.contains("Q")) throw ConfigError(pointer + "/Q", "missing field");
      double gamma = j.contains("gamma") ? number(j, "gamma", pointer) : 1.0;
      T = prox_quadratic(matrix_from_json(j.at("Q"), dim, pointer + "/Q"), point("c", Point::Zero(d)), gamma);
    } else if (kind == "spc_from_nonexpansive") {
      if (!j.contains("inner")) throw ConfigError(pointer + "/inner", "missing field");
      Operator inner = from_json(j.at("inner"), dim, pointer + "/inner");
      if (!j.contains("kappa")) throw ConfigError(pointer + "/kappa", "missing field");
      T = spc_from_nonexpansive(inner, rational_from_json(j.at("kappa"), pointer + "/kappa"));
    } else if (kind == "reflection") {
      T = reflection(point("center", Point::Zero(d)), j.contains("a") ? number(j, "a", pointer) : 1.0);
    } else if (kind == "piecewise1d") {
      if (dim != 1) throw ConfigError(pointer + "/kind", "piecewise1d requires dim = 1");
      if (!j.contains("pieces") || !j.at("pieces").is_array()) throw ConfigError(pointer + "/pieces", "expected an array");
      std::vector<Piece> pieces;
      for (std::size_t i = 0; i < j.at("pieces").size(); ++i) {
        const json& pj = j.at("pieces")[i];
        std::string at = pointer + "/pieces/" + std::to_string(i);
        Piece p;
        p.lo = number(pj, "lo", at);
        p.hi = number(pj, "hi", at);
        p.lo_open = pj.value("lo_open", false);
        p.hi_open = pj.value("hi_open", false);
        p.a = pj.contains("a") ? number(pj, "a", at) : 0.0;
        p.c = pj.contains("c") ? number(pj, "c", at) : 0.0;
        pieces.push_back(p);
      }
      T = piecewise1d(std::move(pieces));
    } else {
      throw ConfigError(pointer + "/kind", "unknown operator kind '" + kind + "'");
    }
  } catch (const RangeError& e) {
    throw ConfigError(pointer + "/" + e.field(), e.what());
  }
  if (j.contains("properties")) T.declare(DeclaredProperties::from_json(j.at("properties"), pointer + "/properties"));
  if (j.contains("fixed_point")) T.set_fixed_point(point("fixed_point"));
  return T;
}

// --- Validators -----------------------------------------------------------------

json PropertyCheck::to_json() const {
  json j = {{"property", property}, {"ok", ok}, {"trials", trials}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

namespace {

using PairCheck = std::function<std::optional<std::string>(const Point&, const Point&)>;

// Random pairs, near pairs and pairs drawn from the special points of T and C.
PropertyCheck run_pairs(std::string name, const Operator& T, const Domain& C, const ValidationBudget& budget,
                        const PairCheck& check) {
  PropertyCheck out;
  out.property = std::move(name);
  std::mt19937_64 rng(budget.seed);
  std::vector<Point> pool = C.extreme_points();
  for (const auto& p : T.special_points()) {
    if (C.contains(p, 0)) pool.push_back(p);
  }
  if (auto f = T.fixed_point(); f && C.contains(*f, budget.tau)) pool.push_back(*f);
  std::normal_distribution<double> gauss;
  const double near = 1e-3 * std::max(C.diameter(), 1e-12);
  auto near_point = [&](const Point& x) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Point dir(x.size());
      for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = gauss(rng);
      Point y = x + near * dir / std::max(dir.norm(), 1e-300);
      if (C.contains(y, 0)) return y;
    }
    return C.sample(rng);
  };
  for (std::uint64_t t = 0; t < budget.pairs; ++t) {
    Point x, y;
    switch (t % 4) {
      case 0:
        x = C.sample(rng);
        y = C.sample(rng);
        break;
      case 1:
        x = C.sample(rng);
        y = near_point(x);
        break;
      case 2:
        x = pool.empty() ? C.sample(rng) : pool[(t / 4) % pool.size()];
        y = C.sample(rng);
        break;
      default:
        x = pool.empty() ? C.sample(rng) : pool[(t / 4) % pool.size()];
        y = pool.empty() ? C.sample(rng) : pool[(t / 4 / std::max<std::size_t>(pool.size(), 1)) % pool.size()];
        if (t % 8 == 7) y = near_point(x);
        break;
    }
    ++out.trials;
    if (auto v = check(x, y)) {
      out.ok = false;
      out.detail = "x=" + fmt(x) + " y=" + fmt(y) + ": " + *v;
      return out;
    }
  }
  return out;
}

}  // namespace

PropertyCheck validate_nonexpansive(const Operator& T, const Domain& C, const ValidationBudget& budget) {
  return run_pairs("nonexpansive", T, C, budget, [&](const Point& x, const Point& y) -> std::optional<std::string> {
    double lhs = (T(x) - T(y)).norm();
    double rhs = (x - y).norm();
    if (lhs <= rhs + budget.tau) return std::nullopt;
    return "|Tx-Ty|=" + fmt(lhs) + " > |x-y|=" + fmt(rhs);
  });
}

PropertyCheck validate_firmly_nonexpansive(const Operator& T, const Rational& lambda, const Domain& C,
                                           const ValidationBudget& budget) {
  const double l = to_double(lambda);
  return run_pairs("firmly_nonexpansive", T, C, budget,
                   [&](const Point& x, const Point& y) -> std::optional<std::string> {
                     Point tx = T(x), ty = T(y);
                     double a = (tx - ty).norm();
                     double mid = ((1 - l) * (x - y) + l * (tx - ty)).norm();
                     double c = (x - y).norm();
                     if (a <= mid + budget.tau && mid <= c + budget.tau) return std::nullopt;
                     return "|Tx-Ty|=" + fmt(a) + ", |W(x)-W(y)|=" + fmt(mid) + ", |x-y|=" + fmt(c);
                   });
}

PropertyCheck validate_spc(const Operator& T, const Rational& kappa, const Domain& C, const ValidationBudget& budget) {
  const double k = to_double(kappa);
  return run_pairs("strict_pseudo_contraction", T, C, budget,
                   [&](const Point& x, const Point& y) -> std::optional<std::string> {
                     Point tx = T(x), ty = T(y);
                     double lhs = (tx - ty).squaredNorm();
                     double rhs = (x - y).squaredNorm() + k * ((x - tx) - (y - ty)).squaredNorm();
                     if (lhs <= rhs + budget.tau) return std::nullopt;
                     return "|Tx-Ty|^2=" + fmt(lhs) + " > " + fmt(rhs);
                   });
}

PropertyCheck validate_condition_e(const Operator& T, const Rational& mu, const Domain& C,
                                   const ValidationBudget& budget) {
  const double m = to_double(mu);
  return run_pairs("condition_e", T, C, budget, [&](const Point& x, const Point& y) -> std::optional<std::string> {
    // Both orders, since the condition is not symmetric.
    for (int swap = 0; swap < 2; ++swap) {
      const Point& a = swap ? y : x;
      const Point& b = swap ? x : y;
      double lhs = (a - T(b)).norm();
      double rhs = m * (T(a) - a).norm() + (a - b).norm();
      if (lhs > rhs + budget.tau) return "d(x,Ty)=" + fmt(lhs) + " > " + fmt(rhs);
    }
    return std::nullopt;
  });
}

PropertyCheck validate_asymptotically_nonexpansive(const Operator& T, const SequenceSpec& kn, const Domain& C,
                                                   const ValidationBudget& budget, std::uint64_t max_power) {
  ValidationBudget b = budget;
  b.pairs = std::max<std::uint64_t>(1, budget.pairs / 10);
  return run_pairs("asymptotically_nonexpansive", T, C, b,
                   [&](const Point& x, const Point& y) -> std::optional<std::string> {
                     Point tx = x, ty = y;
                     for (std::uint64_t n = 1; n <= max_power; ++n) {
                       tx = T(tx);
                       ty = T(ty);
                       double lhs = (tx - ty).norm();
                       double rhs = (1 + kn.at(n)) * (x - y).norm();
                       if (lhs > rhs + budget.tau) return "n=" + std::to_string(n) + ": " + fmt(lhs) + " > " + fmt(rhs);
                     }
                     return std::nullopt;
                   });
}

PropertyCheck validate_self_map(const Operator& T, const Domain& C, const ValidationBudget& budget) {
  return run_pairs("self_map", T, C, budget, [&](const Point& x, const Point&) -> std::optional<std::string> {
    Point tx = T(x);
    if (C.contains(tx, budget.tau)) return std::nullopt;
    return "Tx=" + fmt(tx) + " leaves the domain";
  });
}

std::vector<PropertyCheck> validate_declared(const Operator& T, const Domain& C, const ValidationBudget& budget) {
  std::vector<PropertyCheck> out;
  const auto& d = T.declared();
  if (d.nonexpansive) out.push_back(validate_nonexpansive(T, C, budget));
  if (d.firmly_lambda) out.push_back(validate_firmly_nonexpansive(T, *d.firmly_lambda, C, budget));
  if (d.spc_kappa) out.push_back(validate_spc(T, *d.spc_kappa, C, budget));
  if (d.condition_e_mu) out.push_back(validate_condition_e(T, *d.condition_e_mu, C, budget));
  if (d.asymptotic_kn) out.push_back(validate_asymptotically_nonexpansive(T, *d.asymptotic_kn, C, budget));
  out.push_back(validate_self_map(T, C, budget));
  return out;
}

// --- Resolvent ------------------------------------------------------------------

QuadraticResolvent::QuadraticResolvent(Matrix Q, Point c) : Q_(std::move(Q)), c_(std::move(c)) {
  if (Q_.rows() != Q_.cols() || Q_.rows() != c_.size()) throw RangeError("Q", "dimension mismatch");
  if (!Q_.isApprox(Q_.transpose())) throw RangeError("Q", "must be symmetric");
  if (Q_.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Q_);
    if (es.eigenvalues().minCoeff() < -1e-12) throw RangeError("Q", "must be positive semidefinite");
  }
}

Point QuadraticResolvent::apply(double gamma, const Point& x) const {
  if (!(gamma > 0)) throw DomainError("resolvent step size must be positive");
  Matrix M = Matrix::Identity(Q_.rows(), Q_.cols()) + gamma * Q_;
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) throw DomainError("singular resolvent system");
  return llt.solve(x - gamma * c_);
}

std::optional<Point> QuadraticResolvent::zero() const {
  Eigen::FullPivLU<Matrix> lu(Q_);
  Point p = lu.solve(Point(-c_));
  if ((Q_ * p + c_).norm() > 1e-9 * (1 + c_.norm())) return std::nullopt;
  return p;
}

// --- Trajectory -----------------------------------------------------------------

Trajectory::Trajectory(std::string scheme, Point x0, Step step) : scheme_(std::move(scheme)), step_(std::move(step)) {
  cache_.push_back(std::move(x0));
}

Trajectory Trajectory::closed_form(std::string scheme, Closed f) {
  Point x0 = f(0);
  Trajectory t(std::move(scheme), std::move(x0), nullptr);
  t.closed_ = std::move(f);
  return t;
}

const Point& Trajectory::at(std::uint64_t n) {
  while (cache_.size() <= n) {
    const std::uint64_t i = cache_.size();
    Point next = closed_ ? closed_(i) : step_(i - 1, cache_.back());
    if (!next.allFinite()) throw DomainError("trajectory produced a non-finite point at n=" + std::to_string(i));
    cache_.push_back(std::move(next));
  }
  return cache_[n];
}

double Trajectory::distance(std::uint64_t i, std::uint64_t j) {
  at(std::max(i, j));
  return (cache_[i] - cache_[j]).norm();
}

std::size_t Trajectory::dim() { return static_cast<std::size_t>(at(0).size()); }

namespace {

double unit_parameter(const SequenceSpec& s, std::uint64_t n, const char* name) {
  double v = s.at(n);
  if (!(v >= 0 && v <= 1)) throw DomainError(std::string(name) + "_" + std::to_string(n) + " = " + fmt(v) + " outside [0,1]");
  return v;
}

}  // namespace

Trajectory picard(const Operator& T, const Point& x0) {
  return Trajectory("picard", x0, [T](std::uint64_t, const Point& x) { return T(x); });
}

Trajectory mann(const Operator& T, const Point& x0, const SequenceSpec& lambda) {
  return Trajectory("mann", x0, [T, lambda](std::uint64_t n, const Point& x) {
    double l = unit_parameter(lambda, n, "lambda");
    return Point((1 - l) * x + l * T(x));
  });
}

Trajectory ishikawa(const Operator& T, const Point& x0, const SequenceSpec& lambda, const SequenceSpec& s) {
  return Trajectory("ishikawa", x0, [T, lambda, s](std::uint64_t n, const Point& x) {
    double l = unit_parameter(lambda, n, "lambda");
    double sn = unit_parameter(s, n, "s");
    Point inner = (1 - sn) * x + sn * T(x);
    return Point((1 - l) * x + l * T(inner));
  });
}

Trajectory ppa(const QuadraticResolvent& J, const Point& x0, const SequenceSpec& gamma) {
  return Trajectory("ppa", x0, [J, gamma](std::uint64_t n, const Point& x) { return J.apply(gamma.at(n), x); });
}

Trajectory mann_asymptotic(const Operator& T, const Point& x0, const SequenceSpec& lambda) {
  return Trajectory("mann_asymptotic", x0, [T, lambda](std::uint64_t n, const Point& x) {
    double l = unit_parameter(lambda, n, "lambda");
    return Point((1 - l) * x + l * T.power(x, n));
  });
}

Trajectory perturbed_mann(const Operator& T, const Point& x0, const SequenceSpec& lambda, const SequenceSpec& eps,
                          const Point& direction) {
  double norm = direction.norm();
  if (!(norm > 0)) throw RangeError("direction", "must be nonzero");
  Point e = direction / norm;
  return Trajectory("perturbed_mann", x0, [T, lambda, eps, e](std::uint64_t n, const Point& x) {
    double l = unit_parameter(lambda, n, "lambda");
    return Point((1 - l) * x + l * T(x) + eps.at(n) * e);
  });
}

Point ppa_u(Trajectory& traj, const SequenceSpec& gamma, std::uint64_t n) {
  const Point next = traj.at(n + 1);
  return (traj.at(n) - next) / gamma.at(n);
}

ApproximationFamily fixed_point_family(const Operator& T) {
  return ApproximationFamily("fixed_point", [T](const Point& p, const Nat&) { return (p - T(p)).norm(); });
}

ApproximationFamily ppa_family(const QuadraticResolvent& J, const SequenceSpec& gamma) {
  return ApproximationFamily("ppa", [J, gamma](const Point& p, const Nat& k) {
    double m = to_double(gamma.prefix_max(k));
    return (p - J.apply(m, p)).norm();
  });
}

ApproximationFamily monotone_sequence_family(std::function<double(std::uint64_t)> x) {
  return ApproximationFamily("monotone_sequence", [x = std::move(x)](const Point& p, const Nat& k) {
    double xk = x(to_u64_saturating(k));
    return xk <= p[0] ? 0.0 : std::numeric_limits<double>::infinity();
  });
}

}  // namespace fejercert
