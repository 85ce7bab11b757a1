#include "splitform/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "splitform/text.hpp"

namespace splitform {
namespace {

// Portable uniform in [0, 1): the standard distributions are not specified
// bit-for-bit across library implementations.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 rng_;
};

DisjunctiveProblem empty_problem(std::string name, int n, double lo, double hi) {
  DisjunctiveProblem p;
  p.name = std::move(name);
  p.n = n;
  p.lower.assign(static_cast<std::size_t>(n), lo);
  p.upper.assign(static_cast<std::size_t>(n), hi);
  p.objective.coeffs.assign(static_cast<std::size_t>(n), 0.0);
  return p;
}

DisjunctConstraint affine_row(const std::vector<double>& a, double rhs) {
  SeparableFunction f;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0.0) f.add_linear(static_cast<int>(i), a[i]);
  return {f, rhs};
}

double squared_distance(const Point& a, const Point& b, const std::vector<int>& dims) {
  double s = 0.0;
  for (int d : dims) {
    const double t = a[static_cast<std::size_t>(d)] - b[static_cast<std::size_t>(d)];
    s += t * t;
  }
  return s;
}

}  // namespace

DisjunctiveProblem make_ex1() {
  DisjunctiveProblem p = empty_problem("ex1", 4, -4.0, 4.0);
  Disjunction d;
  SeparableFunction ball;
  SeparableFunction sum;
  for (int i = 0; i < 4; ++i) {
    ball.add_quadratic(i, 1.0, 0.0);
    sum.add_linear(i, -1.0);
  }
  d.disjuncts.push_back({{{ball, 1.0}}});
  d.disjuncts.push_back({{{sum, -12.0}}});
  p.disjunctions.push_back(std::move(d));
  return p;
}

DisjunctiveProblem make_ex2() {
  DisjunctiveProblem p = empty_problem("ex2", 4, 0.0, 5.0);
  Disjunction d;
  d.disjuncts.push_back({{affine_row({1, 1, 1, 1}, 1.5),
                          affine_row({1.5, -1.2, 1, -1}, -1.0)}});
  d.disjuncts.push_back({{affine_row({-1, -2, -1, -2}, -26.0),
                          affine_row({-2, 1, 1, -0.5}, -1.0)}});
  p.disjunctions.push_back(std::move(d));
  return p;
}

AlphaBounds ex1_closed_form_bounds(int P) {
  if (P != 1 && P != 2 && P != 4)
    throw ModelError("the closed-form ex1 bounds exist for P in {1, 2, 4}");
  const double m = 0.5 * P * P - 3.5 * P + 7.0;
  AlphaBounds b;
  b.num_splits = P;
  for (int s = 0; s < P; ++s) {
    b.set({0, 0, s}, 0.0, 16.0 * m, BoundProvenance::kUser);
    b.set({1, 0, s}, -4.0 * m, m, BoundProvenance::kUser);
  }
  return b;
}

DisjunctiveProblem make_clustering(const std::vector<Point>& points, int k) {
  if (points.empty()) throw ModelError("clustering needs at least one point");
  if (k < 1) throw ModelError("clustering needs k >= 1");
  if (k > static_cast<int>(points.size()))
    throw ModelError("clustering: k exceeds the number of points");
  const int dim = static_cast<int>(points.front().size());
  if (dim < 1) throw ModelError("clustering points need at least one coordinate");
  for (const auto& pt : points)
    if (static_cast<int>(pt.size()) != dim)
      throw ModelError("clustering points must share one dimension");
  const int np = static_cast<int>(points.size());

  std::vector<int> all_dims(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) all_dims[static_cast<std::size_t>(d)] = d;
  double rmax = 0.0;
  for (int a = 0; a < np; ++a)
    for (int b = a + 1; b < np; ++b)
      rmax = std::max(rmax, squared_distance(points[static_cast<std::size_t>(a)],
                                             points[static_cast<std::size_t>(b)], all_dims));

  DisjunctiveProblem p = empty_problem("clustering", k * dim + np, 0.0, 0.0);
  for (int d = 0; d < dim; ++d) {
    double lo = points[0][static_cast<std::size_t>(d)];
    double hi = lo;
    for (const auto& pt : points) {
      lo = std::min(lo, pt[static_cast<std::size_t>(d)]);
      hi = std::max(hi, pt[static_cast<std::size_t>(d)]);
    }
    for (int j = 0; j < k; ++j) {
      p.lower[static_cast<std::size_t>(j * dim + d)] = lo;
      p.upper[static_cast<std::size_t>(j * dim + d)] = hi;
    }
  }
  for (int j = 0; j < k; ++j)
    for (int d = 0; d < dim; ++d)
      p.var_names.push_back("c" + std::to_string(j) + "_" + std::to_string(d));
  for (int i = 0; i < np; ++i) {
    const auto col = static_cast<std::size_t>(k * dim + i);
    p.upper[col] = rmax;
    p.objective.coeffs[col] = 1.0;
    p.var_names.push_back("r" + std::to_string(i));
  }

  for (int i = 0; i < np; ++i) {
    const int r = k * dim + i;
    Disjunction disj;
    for (int j = 0; j < k; ++j) {
      SeparableFunction f;
      for (int d = 0; d < dim; ++d)
        f.add_quadratic(j * dim + d, 1.0, points[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)]);
      f.add_linear(r, -1.0);
      disj.disjuncts.push_back({{{f, 0.0}}});
    }
    p.disjunctions.push_back(std::move(disj));
    std::vector<std::vector<int>> atoms(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d)
      for (int j = 0; j < k; ++j) atoms[static_cast<std::size_t>(d)].push_back(j * dim + d);
    atoms.back().push_back(r);
    p.partition_atoms.push_back(std::move(atoms));
  }
  return p;
}

std::vector<AlphaBounds> clustering_alpha_bounds(
    const std::vector<Point>& points, int k, const DisjunctiveProblem& problem,
    const std::vector<Partition>& parts) {
  const int dim = static_cast<int>(points.front().size());
  const int np = static_cast<int>(points.size());
  std::vector<AlphaBounds> out;
  for (int i = 0; i < np; ++i) {
    const auto& d = problem.disjunctions[static_cast<std::size_t>(i)];
    const Partition& p = parts.at(static_cast<std::size_t>(i));
    const double rmax = problem.upper[static_cast<std::size_t>(k * dim + i)];
    AlphaBounds b;
    b.num_splits = p.size();
    for (int j = 0; j < k; ++j)
      for (int s = 0; s < p.size(); ++s) {
        const SeparableFunction sum = split_sum(d, j, 0, p.classes[static_cast<std::size_t>(s)]);
        std::vector<int> dims;
        bool has_r = false;
        for (const auto& t : sum.terms()) {
          if (t.var < k * dim)
            dims.push_back(t.var - j * dim);
          else
            has_r = true;
        }
        double hi = 0.0;
        for (int a = 0; a < np; ++a)
          for (int c = a + 1; c < np; ++c)
            hi = std::max(hi, squared_distance(points[static_cast<std::size_t>(a)],
                                               points[static_cast<std::size_t>(c)], dims));
        b.set({j, 0, s}, has_r ? -rmax : 0.0, hi, BoundProvenance::kUser);
      }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Point> load_points_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ModelError("cannot read " + path);
  std::vector<Point> out;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Point pt;
    try {
      for (const auto& field : split_fields(line, ',')) pt.push_back(parse_double(field));
    } catch (const ModelError&) {
      if (line_no == 1 && out.empty()) continue;  // header
      throw ModelError(path + ":" + std::to_string(line_no) + ": malformed point");
    }
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<Point> pball_centers(int n_balls, int dim, std::uint64_t seed) {
  Uniform u(seed);
  std::vector<Point> centers(static_cast<std::size_t>(n_balls));
  for (auto& c : centers)
    for (int d = 0; d < dim; ++d) c.push_back(u.next(0.0, 10.0));
  return centers;
}

DisjunctiveProblem make_pball(int n_balls, int n_points, int dim, std::uint64_t seed) {
  if (n_balls < 1 || dim < 1) throw ModelError("pball needs at least one ball and one dimension");
  DisjunctiveProblem p = make_pball_with_centers(pball_centers(n_balls, dim, seed), n_points);
  p.name = "pball";
  return p;
}

DisjunctiveProblem make_pball_with_centers(const std::vector<Point>& centers, int n_points) {
  const int n_balls = static_cast<int>(centers.size());
  if (n_balls < 1) throw ModelError("pball needs at least one ball");
  if (n_points < 1) throw ModelError("pball needs at least one point");
  if (n_points > n_balls) throw ModelError("pball: more points than balls");
  const int dim = static_cast<int>(centers.front().size());
  std::vector<double> lo(static_cast<std::size_t>(dim));
  std::vector<double> hi(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    lo[static_cast<std::size_t>(d)] = hi[static_cast<std::size_t>(d)] = centers[0][static_cast<std::size_t>(d)];
    for (const auto& c : centers) {
      lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)], c[static_cast<std::size_t>(d)]);
      hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)], c[static_cast<std::size_t>(d)]);
    }
    lo[static_cast<std::size_t>(d)] -= 1.0;
    hi[static_cast<std::size_t>(d)] += 1.0;
  }
  const int pairs = n_points * (n_points - 1) / 2;
  DisjunctiveProblem p = empty_problem("pball", n_points * dim + pairs * dim, 0.0, 0.0);
  for (int a = 0; a < n_points; ++a)
    for (int d = 0; d < dim; ++d) {
      const auto col = static_cast<std::size_t>(a * dim + d);
      p.lower[col] = lo[static_cast<std::size_t>(d)];
      p.upper[col] = hi[static_cast<std::size_t>(d)];
      p.var_names.push_back("p" + std::to_string(a) + "_" + std::to_string(d));
    }
  int col = n_points * dim;
  for (int a = 0; a < n_points; ++a)
    for (int b = a + 1; b < n_points; ++b)
      for (int d = 0; d < dim; ++d, ++col) {
        const auto c = static_cast<std::size_t>(col);
        p.upper[c] = hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)];
        p.objective.coeffs[c] = 1.0;
        p.var_names.push_back("t" + std::to_string(a) + "_" + std::to_string(b) + "_" +
                              std::to_string(d));
        const int xa = a * dim + d;
        const int xb = b * dim + d;
        p.globals.push_back({{{xa, 1.0}, {xb, -1.0}, {col, -1.0}}, Sense::kLessEqual, 0.0});
        p.globals.push_back({{{xa, -1.0}, {xb, 1.0}, {col, -1.0}}, Sense::kLessEqual, 0.0});
      }
  for (int a = 0; a < n_points; ++a) {
    Disjunction disj;
    for (int b = 0; b < n_balls; ++b) {
      SeparableFunction f;
      for (int d = 0; d < dim; ++d)
        f.add_quadratic(a * dim + d, 1.0, centers[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)]);
      disj.disjuncts.push_back({{{f, 1.0}}});
    }
    p.disjunctions.push_back(std::move(disj));
  }
  if (n_balls > 1)
    for (int b = 0; b < n_balls; ++b) {
      IndicatorConstraint row;
      for (int a = 0; a < n_points; ++a) row.terms.push_back({a, b, 1.0});
      row.rhs = 1.0;
      p.indicator_rows.push_back(std::move(row));
    }
  return p;
}

int NetworkWeights::inputs() const {
  if (layers.empty() || layers.front().w.empty()) return 0;
  return static_cast<int>(layers.front().w.front().size());
}

void check_network(const NetworkWeights& nn) {
  if (nn.layers.empty()) throw ModelError("network has no layers");
  std::size_t width = 0;
  for (std::size_t L = 0; L < nn.layers.size(); ++L) {
    const auto& layer = nn.layers[L];
    const std::string where = "layer " + std::to_string(L);
    if (layer.w.empty()) throw ModelError(where + " has no nodes");
    if (layer.b.size() != layer.w.size())
      throw ModelError(where + ": bias length " + std::to_string(layer.b.size()) +
                       " does not match " + std::to_string(layer.w.size()) + " rows");
    const std::size_t in = layer.w.front().size();
    if (in == 0) throw ModelError(where + " has no inputs");
    for (const auto& row : layer.w)
      if (row.size() != in) throw ModelError(where + ": ragged weight matrix");
    if (L > 0 && in != width)
      throw ModelError(where + " expects " + std::to_string(in) + " inputs but layer " +
                       std::to_string(L - 1) + " has " + std::to_string(width) + " nodes");
    width = layer.w.size();
  }
}

NetworkWeights network_from_json(const std::string& text) {
  using nlohmann::json;
  NetworkWeights nn;
  try {
    const json doc = json::parse(text);
    for (const auto& l : doc.at("layers")) {
      Layer layer;
      layer.w = l.at("w").get<std::vector<std::vector<double>>>();
      layer.b = l.at("b").get<std::vector<double>>();
      const std::string act = l.value("act", "relu");
      if (act == "relu")
        layer.act = Activation::kRelu;
      else if (act == "linear")
        layer.act = Activation::kLinear;
      else
        throw ModelError("unknown activation \"" + act + "\"");
      nn.layers.push_back(std::move(layer));
    }
  } catch (const json::exception& e) {
    throw ModelError(std::string("network JSON: ") + e.what());
  }
  check_network(nn);
  return nn;
}

std::string network_to_json(const NetworkWeights& nn) {
  using nlohmann::json;
  json layers = json::array();
  for (const auto& l : nn.layers)
    layers.push_back({{"w", l.w}, {"b", l.b},
                      {"act", l.act == Activation::kRelu ? "relu" : "linear"}});
  return json{{"layers", layers}}.dump(1) + "\n";
}

NetworkWeights load_network(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ModelError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return network_from_json(ss.str());
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

void save_network(const std::string& path, const NetworkWeights& nn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot write " + path);
  f << network_to_json(nn);
}

NetworkWeights random_network(const std::vector<int>& sizes, std::uint64_t seed) {
  if (sizes.size() < 2) throw ModelError("a network needs input and output sizes");
  Uniform u(seed);
  NetworkWeights nn;
  for (std::size_t L = 1; L < sizes.size(); ++L) {
    Layer layer;
    layer.act = L + 1 == sizes.size() ? Activation::kLinear : Activation::kRelu;
    for (int o = 0; o < sizes[L]; ++o) {
      std::vector<double> row;
      for (int i = 0; i < sizes[L - 1]; ++i) row.push_back(u.next(-1.0, 1.0));
      layer.w.push_back(std::move(row));
      layer.b.push_back(u.next(-1.0, 1.0));
    }
    nn.layers.push_back(std::move(layer));
  }
  return nn;
}

std::vector<std::vector<double>> forward(const NetworkWeights& nn,
                                         const std::vector<double>& x) {
  std::vector<std::vector<double>> out;
  std::vector<double> h = x;
  for (const auto& layer : nn.layers) {
    std::vector<double> z(layer.w.size());
    for (std::size_t o = 0; o < layer.w.size(); ++o) {
      double v = layer.b[o];
      for (std::size_t i = 0; i < h.size(); ++i) v += layer.w[o][i] * h[i];
      z[o] = layer.act == Activation::kRelu ? std::max(v, 0.0) : v;
    }
    out.push_back(z);
    h = std::move(z);
  }
  return out;
}

DisjunctiveProblem make_osif(const NetworkWeights& nn, int target, double l1_budget) {
  check_network(nn);
  for (std::size_t L = 0; L + 1 < nn.layers.size(); ++L)
    if (nn.layers[L].act != Activation::kRelu)
      throw ModelError("hidden layer " + std::to_string(L) + " is not relu");
  const auto& out_layer = nn.layers.back();
  if (target < 0 || target >= static_cast<int>(out_layer.w.size()))
    throw ModelError("target class out of range");

  const int n0 = nn.inputs();
  int n = n0;
  for (std::size_t L = 0; L + 1 < nn.layers.size(); ++L)
    n += static_cast<int>(nn.layers[L].w.size());
  DisjunctiveProblem p = empty_problem("osif", n, 0.0, 1.0);
  for (int i = 0; i < n0; ++i) p.var_names.push_back("x" + std::to_string(i));

  std::vector<int> prev_cols(static_cast<std::size_t>(n0));
  for (int i = 0; i < n0; ++i) prev_cols[static_cast<std::size_t>(i)] = i;
  int col = n0;
  for (std::size_t L = 0; L + 1 < nn.layers.size(); ++L) {
    const auto& layer = nn.layers[L];
    std::vector<int> cols;
    for (std::size_t o = 0; o < layer.w.size(); ++o, ++col) {
      double lo = layer.b[o];
      double hi = layer.b[o];
      SeparableFunction wx;
      for (std::size_t i = 0; i < prev_cols.size(); ++i) {
        const double w = layer.w[o][i];
        if (w == 0.0) continue;
        const auto pc = static_cast<std::size_t>(prev_cols[i]);
        lo += w > 0 ? w * p.lower[pc] : w * p.upper[pc];
        hi += w > 0 ? w * p.upper[pc] : w * p.lower[pc];
        wx.add_linear(prev_cols[i], w);
      }
      const auto c = static_cast<std::size_t>(col);
      p.var_names.push_back("h" + std::to_string(L) + "_" + std::to_string(o));
      p.lower[c] = std::max(lo, 0.0);
      p.upper[c] = std::max(hi, 0.0);
      cols.push_back(col);
      if (hi <= 0.0) continue;  // always inactive: fixed at 0
      const double b = layer.b[o];
      if (lo >= 0.0) {
        LinearConstraint eq{{}, Sense::kEqual, b};
        for (const auto& t : wx.terms()) eq.terms.push_back({t.var, -t.lin});
        eq.terms.push_back({col, 1.0});
        p.globals.push_back(std::move(eq));
        continue;
      }
      SeparableFunction y_minus_wx = wx.scaled(-1.0);
      y_minus_wx.add_linear(col, 1.0);
      SeparableFunction wx_minus_y = wx;
      wx_minus_y.add_linear(col, -1.0);
      SeparableFunction y;
      y.add_linear(col, 1.0);
      Disjunction d;
      d.disjuncts.push_back({{{y_minus_wx, b}, {wx_minus_y, -b}, {wx.scaled(-1.0), b}}});
      d.disjuncts.push_back({{{y, 0.0}, {y.scaled(-1.0), 0.0}, {wx, -b}}});
      p.disjunctions.push_back(std::move(d));
      std::vector<std::vector<int>> atoms;
      for (const auto& t : wx.terms()) atoms.push_back({t.var});
      atoms.back().push_back(col);
      p.partition_atoms.push_back(std::move(atoms));
    }
    prev_cols = std::move(cols);
  }

  for (std::size_t i = 0; i < prev_cols.size(); ++i)
    p.objective.coeffs[static_cast<std::size_t>(prev_cols[i])] +=
        out_layer.w[static_cast<std::size_t>(target)][i];
  p.objective.constant = out_layer.b[static_cast<std::size_t>(target)];
  p.objective.sense = ObjectiveSense::kMaximize;

  LinearConstraint budget{{}, Sense::kLessEqual, l1_budget};
  for (int i = 0; i < n0; ++i) budget.terms.push_back({i, 1.0});
  p.globals.push_back(std::move(budget));
  return p;
}

DisjunctiveProblem make_random_affine(int n, int terms, std::uint64_t seed) {
  if (n < 1 || terms < 1) throw ModelError("random affine needs n >= 1 and terms >= 1");
  Uniform u(seed);
  DisjunctiveProblem p = empty_problem("random" + std::to_string(seed), n, -1.0, 1.0);
  Disjunction d;
  for (int l = 0; l < terms; ++l) {
    Disjunct dj;
    const int rows = 1 + static_cast<int>(u.next() < 0.5);
    std::vector<double> z(static_cast<std::size_t>(n));
    for (auto& v : z) v = u.next(-1.0, 1.0);
    for (int r = 0; r < rows; ++r) {
      std::vector<double> a(static_cast<std::size_t>(n));
      double az = 0.0;
      for (int i = 0; i < n; ++i) {
        a[static_cast<std::size_t>(i)] = u.next(-1.0, 1.0);
        az += a[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
      }
      dj.constraints.push_back(affine_row(a, az + 0.25 * u.next()));
    }
    d.disjuncts.push_back(std::move(dj));
  }
  p.disjunctions.push_back(std::move(d));
  return p;
}

}  // namespace splitform
