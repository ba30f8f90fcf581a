#include "fermizones/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>

#include "fermizones/errors.hpp"
#include "fermizones/rng.hpp"

namespace fermizones {

namespace {

// The seven edge directions of the Freudenthal decomposition, as 0/1 vectors.
constexpr int kEdgeDirs[7][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0},
                                 {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};

int dir_code(int dx, int dy, int dz) {
  for (int i = 0; i < 7; ++i)
    if (kEdgeDirs[i][0] == dx && kEdgeDirs[i][1] == dy && kEdgeDirs[i][2] == dz) return i;
  return -1;
}

// Kuhn tetrahedra: corner offsets accumulate unit steps along each
// permutation of the axes, so every cube face is split the same way in both
// incident cubes.
struct TetTable {
  int corners[6][4][3];
  TetTable() {
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int t = 0; t < 6; ++t) {
      int c[3] = {0, 0, 0};
      for (int j = 0; j < 3; ++j) corners[t][0][j] = 0;
      for (int step = 0; step < 3; ++step) {
        c[perms[t][step]] = 1;
        for (int j = 0; j < 3; ++j) corners[t][step + 1][j] = c[j];
      }
    }
  }
};
const TetTable kTets;

struct EdgeKeyHash {
  std::size_t operator()(std::uint64_t k) const { return std::hash<std::uint64_t>()(k); }
};

class Builder {
 public:
  Builder(const DispersionRelation& d, double level, int n) : d_(d), ef_(level), n_(n) {
    values_.resize(static_cast<std::size_t>(n_) * n_ * n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          values_[idx(i, j, k)] = d_.evaluate({double(i) / n_, double(j) / n_, double(k) / n_});
  }

  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  double grid_value(int gi, int gj, int gk) const {
    return values_[idx(gi % n_, gj % n_, gk % n_)];
  }

  // Side classification: >= level is the positive side. This fixed rule keeps
  // adjacent tetrahedra consistent when a grid value sits exactly on the level.
  static bool positive(double v, double level) { return v >= level; }

  std::int32_t edge_vertex(const int a[3], const int b[3], FermiTriangulation& out) {
    int dx = b[0] - a[0], dy = b[1] - a[1], dz = b[2] - a[2];
    int code = dir_code(dx, dy, dz);
    int li = ((a[0] % n_) + n_) % n_, lj = ((a[1] % n_) + n_) % n_, lk = ((a[2] % n_) + n_) % n_;
    std::uint64_t key =
        (static_cast<std::uint64_t>(code) * n_ * n_ * n_) + idx(li, lj, lk);
    auto it = vertex_map_.find(key);
    if (it != vertex_map_.end()) return it->second;

    // Root of epsilon - level along the edge: bisection bracket, then Newton.
    Vec3 p0{double(li) / n_, double(lj) / n_, double(lk) / n_};
    Vec3 dir{double(dx) / n_, double(dy) / n_, double(dz) / n_};
    double f0 = grid_value(a[0], a[1], a[2]) - ef_;
    double f1 = grid_value(b[0], b[1], b[2]) - ef_;
    double t0 = 0.0, t1 = 1.0;
    if (positive(f0 + ef_, ef_) == positive(f1 + ef_, ef_)) {
      // Can only happen through caller error.
      throw NumericalError("lattice-surface: internal edge without sign change");
    }
    for (int it2 = 0; it2 < 40 && (t1 - t0) > 1e-4; ++it2) {
      double tm = 0.5 * (t0 + t1);
      double fm = d_.evaluate(p0 + dir * tm) - ef_;
      if ((fm >= 0.0) == (f0 >= 0.0)) {
        t0 = tm;
        f0 = fm;
      } else {
        t1 = tm;
        f1 = fm;
      }
    }
    double t = 0.5 * (t0 + t1);
    for (int nit = 0; nit < 3; ++nit) {
      double v;
      Vec3 g;
      d_.value_and_gradient(p0 + dir * t, v, g);
      double df = dot(g, dir);
      if (std::abs(df) < 1e-14) break;
      double tn = t - (v - ef_) / df;
      if (tn < t0 || tn > t1) break;
      t = tn;
    }
    // Fall back to more bisection if Newton did not land within tolerance.
    if (std::abs(d_.evaluate(p0 + dir * t) - ef_) > 1e-9) {
      double lo = t0, hi = t1;
      double flo = d_.evaluate(p0 + dir * lo) - ef_;
      for (int it3 = 0; it3 < 80; ++it3) {
        double tm = 0.5 * (lo + hi);
        double fm = d_.evaluate(p0 + dir * tm) - ef_;
        if ((fm >= 0.0) == (flo >= 0.0)) {
          lo = tm;
          flo = fm;
        } else {
          hi = tm;
        }
        if (std::abs(fm) < 1e-12) { t = tm; break; }
        t = tm;
      }
    }

    Vec3 pos = p0 + dir * t;
    std::int32_t id = static_cast<std::int32_t>(out.vertices.size());
    out.vertices.push_back(pos);
    out.vertex_gradients.push_back(d_.gradient(pos));
    vertex_map_.emplace(key, id);
    return id;
  }

  FermiTriangulation::Corner make_corner(const int a[3], const int b[3],
                                         FermiTriangulation& out) {
    FermiTriangulation::Corner c;
    c.v = edge_vertex(a, b, out);
    c.offset = {static_cast<std::int8_t>(a[0] >= n_ ? a[0] / n_ : (a[0] < 0 ? -1 : 0)),
                static_cast<std::int8_t>(a[1] >= n_ ? a[1] / n_ : (a[1] < 0 ? -1 : 0)),
                static_cast<std::int8_t>(a[2] >= n_ ? a[2] / n_ : (a[2] < 0 ? -1 : 0))};
    return c;
  }

  void emit_triangle(FermiTriangulation& out, const FermiTriangulation::Corner& c0,
                     const FermiTriangulation::Corner& c1, const FermiTriangulation::Corner& c2,
                     const Vec3& toward_positive) {
    FermiTriangulation::Triangle tri;
    tri.c[0] = c0;
    tri.c[1] = c1;
    tri.c[2] = c2;
    Vec3 p0 = out.corner_position(tri, 0);
    Vec3 p1 = out.corner_position(tri, 1);
    Vec3 p2 = out.corner_position(tri, 2);
    Vec3 nrm = cross(p1 - p0, p2 - p0);
    if (dot(nrm, toward_positive) < 0) std::swap(tri.c[1], tri.c[2]);
    out.triangles.push_back(tri);
  }

  void march(FermiTriangulation& out) {
    int corner_g[4][3];
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int t = 0; t < 6; ++t) {
            double val[4];
            bool pos[4];
            int np = 0;
            for (int c = 0; c < 4; ++c) {
              corner_g[c][0] = i + kTets.corners[t][c][0];
              corner_g[c][1] = j + kTets.corners[t][c][1];
              corner_g[c][2] = k + kTets.corners[t][c][2];
              val[c] = grid_value(corner_g[c][0], corner_g[c][1], corner_g[c][2]);
              pos[c] = positive(val[c], ef_);
              np += pos[c] ? 1 : 0;
            }
            if (np == 0 || np == 4) continue;

            int plus[4], minus[4], npl = 0, nmi = 0;
            for (int c = 0; c < 4; ++c) (pos[c] ? plus[npl++] : minus[nmi++]) = c;

            Vec3 cp{0, 0, 0}, cm{0, 0, 0};
            for (int c = 0; c < npl; ++c)
              cp += Vec3{double(corner_g[plus[c]][0]), double(corner_g[plus[c]][1]),
                         double(corner_g[plus[c]][2])};
            for (int c = 0; c < nmi; ++c)
              cm += Vec3{double(corner_g[minus[c]][0]), double(corner_g[minus[c]][1]),
                         double(corner_g[minus[c]][2])};
            Vec3 toward = cp / double(npl) - cm / double(nmi);

            auto corner_of = [&](int ca, int cb) {
              // Order endpoints so the difference vector is nonnegative.
              const int* ga = corner_g[ca];
              const int* gb = corner_g[cb];
              bool ok = gb[0] >= ga[0] && gb[1] >= ga[1] && gb[2] >= ga[2];
              return ok ? make_corner(ga, gb, out) : make_corner(gb, ga, out);
            };

            if (np == 1 || np == 3) {
              int lone = (np == 1) ? plus[0] : minus[0];
              int others[3], no = 0;
              for (int c = 0; c < 4; ++c)
                if (c != lone) others[no++] = c;
              emit_triangle(out, corner_of(lone, others[0]), corner_of(lone, others[1]),
                            corner_of(lone, others[2]), toward);
            } else {
              auto q0 = corner_of(plus[0], minus[0]);
              auto q1 = corner_of(plus[0], minus[1]);
              auto q2 = corner_of(plus[1], minus[1]);
              auto q3 = corner_of(plus[1], minus[0]);
              emit_triangle(out, q0, q1, q2, toward);
              emit_triangle(out, q0, q2, q3, toward);
            }
          }
  }

 private:
  const DispersionRelation& d_;
  double ef_;
  int n_;
  std::vector<double> values_;
  std::unordered_map<std::uint64_t, std::int32_t, EdgeKeyHash> vertex_map_;
};

struct DecoratedEdge {
  std::int32_t a, b;
  std::int8_t ox, oy, oz;  // offset of b relative to a
  bool operator<(const DecoratedEdge& o) const {
    return std::tie(a, b, ox, oy, oz) < std::tie(o.a, o.b, o.ox, o.oy, o.oz);
  }
  bool operator==(const DecoratedEdge& o) const {
    return a == o.a && b == o.b && ox == o.ox && oy == o.oy && oz == o.oz;
  }
};

DecoratedEdge canonical_edge(const FermiTriangulation::Corner& u,
                             const FermiTriangulation::Corner& v) {
  DecoratedEdge e;
  if (u.v <= v.v) {
    e.a = u.v;
    e.b = v.v;
    e.ox = static_cast<std::int8_t>(v.offset[0] - u.offset[0]);
    e.oy = static_cast<std::int8_t>(v.offset[1] - u.offset[1]);
    e.oz = static_cast<std::int8_t>(v.offset[2] - u.offset[2]);
  } else {
    e.a = v.v;
    e.b = u.v;
    e.ox = static_cast<std::int8_t>(u.offset[0] - v.offset[0]);
    e.oy = static_cast<std::int8_t>(u.offset[1] - v.offset[1]);
    e.oz = static_cast<std::int8_t>(u.offset[2] - v.offset[2]);
  }
  // Self-loop edges (same vertex class) need a sign convention on the offset.
  if (e.a == e.b) {
    if (e.ox < 0 || (e.ox == 0 && (e.oy < 0 || (e.oy == 0 && e.oz < 0)))) {
      e.ox = static_cast<std::int8_t>(-e.ox);
      e.oy = static_cast<std::int8_t>(-e.oy);
      e.oz = static_cast<std::int8_t>(-e.oz);
    }
  }
  return e;
}

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) { parent[find(a)] = find(b); }
};

void assign_components(FermiTriangulation& t) {
  UnionFind uf(t.vertices.size());
  for (const auto& tri : t.triangles) {
    uf.unite(tri.c[0].v, tri.c[1].v);
    uf.unite(tri.c[0].v, tri.c[2].v);
  }
  std::unordered_map<std::int32_t, std::int32_t> remap;
  t.vertex_component.assign(t.vertices.size(), -1);
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    std::int32_t root = uf.find(static_cast<std::int32_t>(v));
    auto it = remap.find(root);
    if (it == remap.end()) it = remap.emplace(root, static_cast<std::int32_t>(remap.size())).first;
    t.vertex_component[v] = it->second;
  }
  t.component_count = static_cast<int>(remap.size());
  for (auto& tri : t.triangles) tri.component = t.vertex_component[tri.c[0].v];
}

std::map<DecoratedEdge, int> edge_counts(const FermiTriangulation& t) {
  std::map<DecoratedEdge, int> counts;
  for (const auto& tri : t.triangles)
    for (int e = 0; e < 3; ++e)
      counts[canonical_edge(tri.c[e], tri.c[(e + 1) % 3])]++;
  return counts;
}

}  // namespace

double FermiTriangulation::total_area_cartesian() const {
  double a = 0;
  for (const auto& tri : triangles) a += triangle_area_cartesian(tri);
  return a;
}

std::vector<int> FermiTriangulation::euler_characteristics() const {
  std::vector<int> v_count(component_count, 0), e_count(component_count, 0),
      f_count(component_count, 0);
  for (std::size_t v = 0; v < vertices.size(); ++v) v_count[vertex_component[v]]++;
  for (const auto& [edge, n] : edge_counts(*this)) {
    (void)n;
    e_count[vertex_component[edge.a]]++;
  }
  for (const auto& tri : triangles) f_count[tri.component]++;
  std::vector<int> chi(component_count);
  for (int c = 0; c < component_count; ++c) chi[c] = v_count[c] - e_count[c] + f_count[c];
  return chi;
}

bool FermiTriangulation::is_closed_manifold() const {
  for (const auto& [edge, n] : edge_counts(*this)) {
    (void)edge;
    if (n != 2) return false;
  }
  return true;
}

FermiTriangulation triangulate_level(const DispersionRelation& d, double epsilon_f,
                                     int resolution) {
  if (resolution < 4)
    throw ValidationError("lattice-surface: triangulation resolution must be >= 4");
  auto [lo, hi] = d.sample_range(std::max(16, resolution / 2));
  if (!(epsilon_f > lo && epsilon_f < hi))
    throw NumericalError("lattice-surface: DegenerateLevel: epsilon_f outside sampled range");

  FermiTriangulation out;
  out.epsilon_f = epsilon_f;
  out.resolution = resolution;
  out.lattice = d.lattice();

  Builder b(d, epsilon_f, resolution);
  b.march(out);
  if (out.triangles.empty())
    throw NumericalError("lattice-surface: DegenerateLevel: level produced no surface");

  assign_components(out);
  if (!out.is_closed_manifold())
    throw NumericalError("lattice-surface: triangulation is not a closed manifold");

  double min_g = 1e300;
  for (std::size_t v = 0; v < out.vertices.size(); ++v) {
    double g = norm(d.lattice().gradient_to_cartesian(out.vertex_gradients[v]));
    min_g = std::min(min_g, g);
  }
  out.min_gradient_norm = min_g;
  out.regular_warning = min_g < 1e-3;
  return out;
}

double check_regular(const DispersionRelation& d, double epsilon_f, int sample_density) {
  int n = std::max(8, sample_density);
  std::vector<double> values(static_cast<std::size_t>(n) * n * n);
  auto idx = [n](int i, int j, int k) {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        values[idx(i, j, k)] = d.evaluate({double(i) / n, double(j) / n, double(k) / n});

  double min_g = 1e300;
  bool found = false;
  const int axes[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double f0 = values[idx(i, j, k)] - epsilon_f;
        if (std::abs(f0) < 1e-12) {
          // Level passes (numerically) through a grid point.
          found = true;
          min_g = std::min(min_g, norm(d.gradient_cartesian(
                                      {double(i) / n, double(j) / n, double(k) / n})));
        }
        for (const auto& ax : axes) {
          int i2 = (i + ax[0]) % n, j2 = (j + ax[1]) % n, k2 = (k + ax[2]) % n;
          double f1 = values[idx(i2, j2, k2)] - epsilon_f;
          if ((f0 >= 0) == (f1 >= 0)) continue;
          found = true;
          Vec3 p0{double(i) / n, double(j) / n, double(k) / n};
          Vec3 dir{double(ax[0]) / n, double(ax[1]) / n, double(ax[2]) / n};
          double t0 = 0, t1 = 1, g0 = f0;
          for (int it = 0; it < 30; ++it) {
            double tm = 0.5 * (t0 + t1);
            double fm = d.evaluate(p0 + dir * tm) - epsilon_f;
            if ((fm >= 0) == (g0 >= 0)) {
              t0 = tm;
              g0 = fm;
            } else {
              t1 = tm;
            }
          }
          Vec3 on_level = p0 + dir * (0.5 * (t0 + t1));
          min_g = std::min(min_g, norm(d.gradient_cartesian(on_level)));
        }
      }
  if (!found)
    throw NumericalError("lattice-surface: DegenerateLevel: level not found in sampled grid");
  return min_g;
}

std::vector<int> pi1_image_rank(const FermiTriangulation& t) {
  // Adjacency with offsets, deduplicated.
  std::map<DecoratedEdge, int> edges = edge_counts(t);

  std::vector<std::vector<std::pair<std::int32_t, Vec3i>>> adj(t.vertices.size());
  for (const auto& [e, n] : edges) {
    (void)n;
    adj[e.a].push_back({e.b, {e.ox, e.oy, e.oz}});
    if (e.a != e.b) adj[e.b].push_back({e.a, {-e.ox, -e.oy, -e.oz}});
  }

  std::vector<int> rank(t.component_count, 0);
  std::vector<char> visited(t.vertices.size(), 0);
  std::vector<Vec3i> lift(t.vertices.size(), Vec3i{0, 0, 0});

  // Incremental integer rank via exact cross products / determinants.
  struct IntBasis {
    Vec3i b[3];
    int r = 0;
    bool add(const Vec3i& v) {
      if (r == 3) return false;
      if (v[0] == 0 && v[1] == 0 && v[2] == 0) return false;
      if (r == 0) {
        b[0] = v;
        r = 1;
        return true;
      }
      if (r == 1) {
        Vec3i c{b[0][1] * v[2] - b[0][2] * v[1], b[0][2] * v[0] - b[0][0] * v[2],
                b[0][0] * v[1] - b[0][1] * v[0]};
        if (c[0] == 0 && c[1] == 0 && c[2] == 0) return false;
        b[1] = v;
        r = 2;
        return true;
      }
      std::int64_t det = b[0][0] * (b[1][1] * v[2] - b[1][2] * v[1]) -
                         b[0][1] * (b[1][0] * v[2] - b[1][2] * v[0]) +
                         b[0][2] * (b[1][0] * v[1] - b[1][1] * v[0]);
      if (det == 0) return false;
      b[2] = v;
      r = 3;
      return true;
    }
  };
  std::vector<IntBasis> bases(t.component_count);

  for (std::size_t root = 0; root < t.vertices.size(); ++root) {
    if (visited[root]) continue;
    int comp = t.vertex_component[root];
    std::vector<std::int32_t> stack{static_cast<std::int32_t>(root)};
    visited[root] = 1;
    lift[root] = {0, 0, 0};
    while (!stack.empty()) {
      std::int32_t v = stack.back();
      stack.pop_back();
      for (const auto& [w, off] : adj[v]) {
        Vec3i cand{lift[v][0] + off[0], lift[v][1] + off[1], lift[v][2] + off[2]};
        if (!visited[w]) {
          visited[w] = 1;
          lift[w] = cand;
          stack.push_back(w);
        } else {
          Vec3i cycle{cand[0] - lift[w][0], cand[1] - lift[w][1], cand[2] - lift[w][2]};
          bases[comp].add(cycle);
        }
      }
    }
  }
  for (int c = 0; c < t.component_count; ++c) rank[c] = bases[c].r;
  return rank;
}

std::vector<Vec3> stratified_surface_points(const FermiTriangulation& t, int count,
                                            std::uint64_t seed) {
  std::vector<double> cum(t.triangles.size());
  double total = 0;
  for (std::size_t i = 0; i < t.triangles.size(); ++i) {
    total += t.triangle_area_cartesian(t.triangles[i]);
    cum[i] = total;
  }
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double offset = uni(rng);
  std::vector<Vec3> pts;
  pts.reserve(count);
  for (int s = 0; s < count; ++s) {
    double target = total * ((s + offset) / count);
    auto it = std::lower_bound(cum.begin(), cum.end(), target);
    std::size_t tri = std::min(static_cast<std::size_t>(it - cum.begin()), t.triangles.size() - 1);
    pts.push_back(t.centroid_lattice(t.triangles[tri]));
  }
  return pts;
}

}  // namespace fermizones
