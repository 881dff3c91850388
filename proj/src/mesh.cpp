#include "lrnndg/mesh.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrnndg {

namespace {

std::uint64_t mix_key(std::uint64_t parent, std::uint64_t child) {
    std::uint64_t z = parent * 0x9E3779B97F4A7C15ULL + child + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double polygon_area(const std::vector<Point>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross2(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

void bounding_box(Cell& c) {
    c.lo = c.hi = c.vertices.front();
    for (const auto& p : c.vertices)
        for (int a = 0; a < 3; ++a) {
            c.lo[a] = std::min(c.lo[a], p[a]);
            c.hi[a] = std::max(c.hi[a], p[a]);
        }
}

FaceKind boundary_kind(int axis, bool upper, int d) {
    if (axis == 0) return upper ? FaceKind::TemporalFinal : FaceKind::TemporalInitial;
    if (d == 1) return upper ? FaceKind::SpatialBoundaryRight : FaceKind::SpatialBoundaryLeft;
    return FaceKind::SpatialBoundaryDirichlet;
}

Point unit(int axis, double sign) {
    Point n{};
    n[axis] = sign;
    return n;
}

Face make_box_face(int dims, int axis, double value, const Point& lo, const Point& hi) {
    Face f;
    f.axis = axis;
    f.lo = lo;
    f.hi = hi;
    f.lo[axis] = f.hi[axis] = value;
    if (dims == 2) {
        const int other = 1 - axis;
        Point a = f.lo, b = f.lo;
        b[other] = f.hi[other];
        f.vertices = {a, b};
    } else {
        int fa[2], k = 0;
        for (int ax = 0; ax < 3; ++ax)
            if (ax != axis) fa[k++] = ax;
        Point p0 = f.lo, p1 = f.lo, p2 = f.lo, p3 = f.lo;
        p1[fa[0]] = f.hi[fa[0]];
        p2[fa[0]] = f.hi[fa[0]];
        p2[fa[1]] = f.hi[fa[1]];
        p3[fa[1]] = f.hi[fa[1]];
        f.vertices = {p0, p1, p2, p3};
    }
    return f;
}

// Sutherland-Hodgman clip of a convex polygon by the half plane s(p) >= 0, with s affine.
template <class S>
std::vector<Point> clip(const std::vector<Point>& poly, S&& s) {
    std::vector<Point> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        const double sa = s(a), sb = s(b);
        if (sa >= 0.0) out.push_back(a);
        if ((sa >= 0.0) != (sb >= 0.0)) {
            const double lam = sa / (sa - sb);
            out.push_back(a + lam * (b - a));
        }
    }
    return out;
}

std::vector<Point> dedupe(const std::vector<Point>& poly, double tol) {
    std::vector<Point> out;
    for (const auto& p : poly)
        if (out.empty() || norm(p - out.back()) > tol) out.push_back(p);
    while (out.size() > 1 && norm(out.front() - out.back()) <= tol) out.pop_back();
    return out;
}

Cell polygon_cell(std::vector<Point> v) {
    if (polygon_area(v) < 0.0) std::reverse(v.begin(), v.end());
    Cell c;
    c.dims = 2;
    c.shape = v.size() == 3 ? CellShape::Triangle : CellShape::Parallelogram;
    c.vertices = std::move(v);
    bounding_box(c);
    return c;
}

}  // namespace

std::string to_string(FaceKind kind) {
    switch (kind) {
        case FaceKind::SpatialInterior: return "SpatialInterior";
        case FaceKind::SpatialBoundaryLeft: return "SpatialBoundaryLeft";
        case FaceKind::SpatialBoundaryRight: return "SpatialBoundaryRight";
        case FaceKind::SpatialBoundaryDirichlet: return "SpatialBoundaryDirichlet";
        case FaceKind::TemporalInterior: return "TemporalInterior";
        case FaceKind::TemporalInitial: return "TemporalInitial";
        case FaceKind::TemporalFinal: return "TemporalFinal";
    }
    return "Unknown";
}

std::string to_string(CellShape shape) {
    switch (shape) {
        case CellShape::Box: return "Box";
        case CellShape::Parallelogram: return "Parallelogram";
        case CellShape::Triangle: return "Triangle";
    }
    return "Unknown";
}

double Cell::measure() const {
    if (shape == CellShape::Box) {
        double m = 1.0;
        for (int a = 0; a < dims; ++a) m *= hi[a] - lo[a];
        return m;
    }
    return std::abs(polygon_area(vertices));
}

double Cell::diameter() const {
    if (shape == CellShape::Box) return norm(hi - lo);
    double d = 0.0;
    for (const auto& a : vertices)
        for (const auto& b : vertices) d = std::max(d, norm(a - b));
    return d;
}

Point Cell::centroid() const {
    if (shape == CellShape::Box) return 0.5 * (lo + hi);
    Point c{};
    for (const auto& p : vertices) c = c + p;
    return (1.0 / static_cast<double>(vertices.size())) * c;
}

bool Cell::contains(const Point& p, double tol) const {
    if (shape == CellShape::Box) {
        for (int a = 0; a < dims; ++a)
            if (p[a] < lo[a] - tol || p[a] > hi[a] + tol) return false;
        return true;
    }
    for (const auto& [a, b] : edges()) {
        const Point e = b - a;
        if (cross2(e, p - a) < -tol * norm(e)) return false;
    }
    return true;
}

std::vector<std::pair<Point, Point>> Cell::edges() const {
    std::vector<std::pair<Point, Point>> out;
    const auto v = corners();
    if (dims != 2) throw std::logic_error("Cell::edges: only defined for two-dimensional cells");
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], v[(i + 1) % v.size()]);
    return out;
}

std::vector<Point> Cell::corners() const {
    if (shape != CellShape::Box) return vertices;
    if (dims == 2) return {{lo[0], lo[1], 0.0}, {hi[0], lo[1], 0.0}, {hi[0], hi[1], 0.0}, {lo[0], hi[1], 0.0}};
    std::vector<Point> out;
    for (int k = 0; k < 8; ++k)
        out.push_back({(k & 4) ? hi[0] : lo[0], (k & 2) ? hi[1] : lo[1], (k & 1) ? hi[2] : lo[2]});
    return out;
}

double Face::measure() const {
    if (is_segment()) return norm(vertices[1] - vertices[0]);
    double m = 1.0;
    for (int a = 0; a < 3; ++a)
        if (a != axis) m *= hi[a] - lo[a];
    return m;
}

double Face::diameter() const {
    if (is_segment()) return norm(vertices[1] - vertices[0]);
    return norm(hi - lo);
}

bool Face::temporal() const {
    return kind == FaceKind::TemporalInterior || kind == FaceKind::TemporalInitial || kind == FaceKind::TemporalFinal;
}

SpaceTimeMesh::SpaceTimeMesh(Domain domain, bool periodic, std::vector<Cell> cells)
    : domain_(domain), periodic_(periodic), cells_(std::move(cells)) {
    if (domain_.d != 1 && domain_.d != 2) throw std::invalid_argument("SpaceTimeMesh: spatial dimension must be 1 or 2");
    if (cells_.empty()) throw std::invalid_argument("SpaceTimeMesh: no cells");
    const double min_area = 1e-14 * domain_.measure();
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        cells_[i].id = i;
        cells_[i].dims = domain_.dims();
        if (!(cells_[i].measure() > min_area)) throw std::invalid_argument("SpaceTimeMesh: degenerate cell " + std::to_string(i));
    }
    if (all_boxes())
        build_box_faces();
    else
        build_polygon_faces();
    cell_faces_.assign(cells_.size(), {});
    for (const auto& f : faces_) {
        cell_faces_[f.plus_cell].push_back(f.id);
        if (f.minus_cell) cell_faces_[*f.minus_cell].push_back(f.id);
    }
}

bool SpaceTimeMesh::all_boxes() const {
    return std::all_of(cells_.begin(), cells_.end(), [](const Cell& c) { return c.shape == CellShape::Box; });
}

double SpaceTimeMesh::tolerance() const {
    double scale = std::max(domain_.t1 - domain_.t0, domain_.x1 - domain_.x0);
    if (domain_.d == 2) scale = std::max(scale, domain_.y1 - domain_.y0);
    return 1e-11 * scale;
}

double SpaceTimeMesh::total_measure() const {
    double s = 0.0;
    for (const auto& c : cells_) s += c.measure();
    return s;
}

std::optional<std::size_t> SpaceTimeMesh::locate(const Point& p) const {
    for (const auto& c : cells_)
        if (c.contains(p, tolerance())) return c.id;
    return std::nullopt;
}

void SpaceTimeMesh::build_box_faces() {
    const int dims = domain_.dims();
    const double tol = tolerance();
    const std::size_t n = cells_.size();

    // overlap of the closed intervals on all axes except `skip`, with positive length
    auto overlap = [&](const Cell& a, const Cell& b, int skip, Point& lo, Point& hi) {
        for (int ax = 0; ax < dims; ++ax) {
            if (ax == skip) continue;
            lo[ax] = std::max(a.lo[ax], b.lo[ax]);
            hi[ax] = std::min(a.hi[ax], b.hi[ax]);
            if (hi[ax] - lo[ax] <= tol) return false;
        }
        return true;
    };

    auto push = [&](Face f) {
        f.id = faces_.size();
        faces_.push_back(std::move(f));
    };

    // boundary faces and covered fraction bookkeeping are implicit: every box side on the domain
    // boundary is a boundary face, every other side is tiled by neighbor fragments
    for (std::size_t i = 0; i < n; ++i) {
        const Cell& c = cells_[i];
        for (int ax = 0; ax < dims; ++ax) {
            for (int side = 0; side < 2; ++side) {
                const double v = side ? c.hi[ax] : c.lo[ax];
                const double bound = side ? domain_.hi(ax) : domain_.lo(ax);
                if (std::abs(v - bound) > tol) continue;
                if (periodic_ && ax == 1) continue;
                Face f = make_box_face(dims, ax, v, c.lo, c.hi);
                f.kind = boundary_kind(ax, side == 1, domain_.d);
                f.plus_cell = i;
                f.normal = unit(ax, side ? 1.0 : -1.0);
                push(std::move(f));
            }
        }
    }

    const double period = domain_.x1 - domain_.x0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Cell& a = cells_[i];
            const Cell& b = cells_[j];
            for (int ax = 0; ax < dims; ++ax) {
                Point lo{}, hi{};
                const bool touching = std::abs(a.hi[ax] - b.lo[ax]) <= tol;
                const bool wrapped = periodic_ && ax == 1 && std::abs(a.hi[ax] - domain_.x1) <= tol &&
                                     std::abs(b.lo[ax] - domain_.x0) <= tol;
                if (!touching && !wrapped) continue;
                if (!overlap(a, b, ax, lo, hi)) continue;
                Face f = make_box_face(dims, ax, a.hi[ax], lo, hi);
                f.kind = ax == 0 ? FaceKind::TemporalInterior : FaceKind::SpatialInterior;
                f.plus_cell = i;
                f.minus_cell = j;
                f.normal = unit(ax, 1.0);
                if (wrapped && !touching) f.minus_offset = unit(1, -period);
                push(std::move(f));
            }
        }
    }
}

void SpaceTimeMesh::build_polygon_faces() {
    if (domain_.d != 1) throw std::invalid_argument("SpaceTimeMesh: polygonal cells need one spatial dimension");
    if (periodic_) throw std::invalid_argument("SpaceTimeMesh: polygonal cells cannot be periodic");
    const double tol = tolerance();
    auto push = [&](Face f) {
        f.id = faces_.size();
        faces_.push_back(std::move(f));
    };
    auto outward = [](const Point& a, const Point& b) {
        const Point e = b - a;
        const double l = norm(e);
        return Point{e[1] / l, -e[0] / l, 0.0};
    };
    const std::size_t n = cells_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [a, b] : cells_[i].edges()) {
            // domain boundary edge
            for (int ax = 0; ax < 2; ++ax) {
                for (int side = 0; side < 2; ++side) {
                    const double bound = side ? domain_.hi(ax) : domain_.lo(ax);
                    if (std::abs(a[ax] - bound) > tol || std::abs(b[ax] - bound) > tol) continue;
                    Face f;
                    f.vertices = {a, b};
                    f.kind = boundary_kind(ax, side == 1, 1);
                    f.plus_cell = i;
                    f.normal = unit(ax, side ? 1.0 : -1.0);
                    f.axis = ax;
                    f.lo = f.hi = a;
                    for (int k = 0; k < 3; ++k) {
                        f.lo[k] = std::min(a[k], b[k]);
                        f.hi[k] = std::max(a[k], b[k]);
                    }
                    push(std::move(f));
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (const auto& [a, b] : cells_[i].edges()) {
                const Point e = b - a;
                const double len = norm(e);
                const Point u = (1.0 / len) * e;
                for (const auto& [c, d] : cells_[j].edges()) {
                    // collinear and opposite orientation
                    if (std::abs(cross2(u, c - a)) > tol || std::abs(cross2(u, d - a)) > tol) continue;
                    const double sc = dot(c - a, u), sd = dot(d - a, u);
                    const double s0 = std::max(0.0, std::min(sc, sd));
                    const double s1 = std::min(len, std::max(sc, sd));
                    if (s1 - s0 <= tol) continue;
                    Face f;
                    f.vertices = {a + s0 * u, a + s1 * u};
                    f.plus_cell = i;
                    f.minus_cell = j;
                    f.normal = outward(a, b);
                    f.kind = std::abs(f.normal[0]) > 1.0 - 1e-12 ? FaceKind::TemporalInterior : FaceKind::SpatialInterior;
                    for (int k = 0; k < 3; ++k) {
                        f.lo[k] = std::min(f.vertices[0][k], f.vertices[1][k]);
                        f.hi[k] = std::max(f.vertices[0][k], f.vertices[1][k]);
                    }
                    push(std::move(f));
                }
            }
        }
    }
}

nlohmann::json SpaceTimeMesh::to_json() const {
    using nlohmann::json;
    json cells = json::array();
    const int dims = domain_.dims();
    auto pt = [dims](const Point& p) {
        json a = json::array();
        for (int k = 0; k < dims; ++k) a.push_back(p[k]);
        return a;
    };
    for (const auto& c : cells_) {
        json verts = json::array();
        for (const auto& p : c.corners()) verts.push_back(pt(p));
        json jc = {{"id", c.id}, {"shape", to_string(c.shape)}, {"vertices", verts}, {"level", c.level}};
        jc["parent"] = c.parent ? json(*c.parent) : json(nullptr);
        cells.push_back(std::move(jc));
    }
    json faces = json::array();
    for (const auto& f : faces_) {
        json verts = json::array();
        for (const auto& p : f.vertices) verts.push_back(pt(p));
        json adj = json::array({f.plus_cell});
        if (f.minus_cell) adj.push_back(*f.minus_cell);
        faces.push_back({{"id", f.id}, {"kind", to_string(f.kind)}, {"cells", adj}, {"vertices", verts}});
    }
    return {{"d", domain_.d}, {"periodic", periodic_}, {"cells", cells}, {"faces", faces}};
}

SpaceTimeMesh build_uniform_mesh(const Domain& domain, double tau, double h, bool periodic) {
    if (!(tau > 0.0) || !(h > 0.0)) throw std::invalid_argument("build_uniform_mesh: steps must be positive");
    auto count = [](double len, double step, const char* what) {
        const double q = len / step;
        const long n = std::lround(q);
        if (n < 1 || std::abs(q - static_cast<double>(n)) > 1e-9 * std::max(1.0, q))
            throw std::invalid_argument(std::string("build_uniform_mesh: step does not divide the ") + what + " extent");
        return static_cast<int>(n);
    };
    const int nt = count(domain.t1 - domain.t0, tau, "time");
    const int nx = count(domain.x1 - domain.x0, h, "x");
    const int ny = domain.d == 2 ? count(domain.y1 - domain.y0, h, "y") : 1;
    const double dt = (domain.t1 - domain.t0) / nt;
    const double dx = (domain.x1 - domain.x0) / nx;
    const double dy = (domain.y1 - domain.y0) / ny;
    std::vector<Cell> cells;
    for (int it = 0; it < nt; ++it)
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny; ++iy) {
                Cell c;
                c.shape = CellShape::Box;
                c.dims = domain.dims();
                c.lo = {domain.t0 + it * dt, domain.x0 + ix * dx, domain.d == 2 ? domain.y0 + iy * dy : 0.0};
                c.hi = {it + 1 == nt ? domain.t1 : domain.t0 + (it + 1) * dt, ix + 1 == nx ? domain.x1 : domain.x0 + (ix + 1) * dx,
                        domain.d == 2 ? (iy + 1 == ny ? domain.y1 : domain.y0 + (iy + 1) * dy) : 0.0};
                c.key = cells.size();
                cells.push_back(c);
            }
    return SpaceTimeMesh(domain, periodic, std::move(cells));
}

SpaceTimeMesh build_characteristic_mesh(const Domain& domain, double slope, std::span<const double> anchors) {
    if (domain.d != 1) throw std::invalid_argument("build_characteristic_mesh: one spatial dimension only");
    if (!(slope > 0.0) || !std::isfinite(slope)) throw std::invalid_argument("build_characteristic_mesh: slope must be positive");
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (anchors[i] < domain.x0 - slope * (domain.t1 - domain.t0) || anchors[i] > domain.x1)
            throw std::invalid_argument("build_characteristic_mesh: anchor outside the domain");
        if (i > 0 && !(anchors[i] > anchors[i - 1])) throw std::invalid_argument("build_characteristic_mesh: anchors must increase");
    }
    const double tol = 1e-11 * std::max(domain.t1 - domain.t0, domain.x1 - domain.x0);
    const double min_area = 1e-14 * domain.measure();
    const std::vector<Point> box = {
        {domain.t0, domain.x0, 0.0}, {domain.t1, domain.x0, 0.0}, {domain.t1, domain.x1, 0.0}, {domain.t0, domain.x1, 0.0}};
    auto cval = [&](const Point& p) { return p[1] - slope * (p[0] - domain.t0); };

    std::vector<double> cuts;
    cuts.push_back(-std::numeric_limits<double>::infinity());
    for (double a : anchors) cuts.push_back(a);
    cuts.push_back(std::numeric_limits<double>::infinity());

    std::vector<Cell> cells;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double ca = cuts[s], cb = cuts[s + 1];
        auto strip = box;
        if (std::isfinite(ca)) strip = clip(strip, [&](const Point& p) { return cval(p) - ca; });
        if (std::isfinite(cb)) strip = clip(strip, [&](const Point& p) { return cb - cval(p); });
        strip = dedupe(strip, tol);
        if (strip.size() < 3 || std::abs(polygon_area(strip)) <= min_area) continue;
        // split at vertex levels so every piece has its vertices on two characteristic lines
        std::vector<double> levels;
        for (const auto& p : strip) levels.push_back(cval(p));
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end(), [&](double x, double y) { return std::abs(x - y) <= tol; }),
                     levels.end());
        for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
            const double la = levels[l], lb = levels[l + 1];
            auto piece = clip(strip, [&](const Point& p) { return cval(p) - la; });
            piece = clip(piece, [&](const Point& p) { return lb - cval(p); });
            piece = dedupe(piece, tol);
            if (piece.size() < 3 || std::abs(polygon_area(piece)) <= min_area) continue;
            if (piece.size() == 3) {
                cells.push_back(polygon_cell(piece));
                continue;
            }
            if (piece.size() != 4) throw std::logic_error("build_characteristic_mesh: unexpected piece");
            std::vector<Point> on_a, on_b;
            for (const auto& p : piece) (std::abs(cval(p) - la) <= 10 * tol ? on_a : on_b).push_back(p);
            if (on_a.size() != 2 || on_b.size() != 2) throw std::logic_error("build_characteristic_mesh: unexpected piece");
            auto by_t = [](const Point& p, const Point& q) { return p[0] < q[0]; };
            std::sort(on_a.begin(), on_a.end(), by_t);
            std::sort(on_b.begin(), on_b.end(), by_t);
            const Point da = on_a[1] - on_a[0], db = on_b[1] - on_b[0];
            if (std::abs(norm(da) - norm(db)) <= tol) {
                cells.push_back(polygon_cell({on_a[0], on_a[1], on_b[1], on_b[0]}));
                continue;
            }
            // trapezoid: the shorter parallel side spans a parallelogram; the rest is a triangle
            const bool a_short = norm(da) < norm(db);
            const auto& S = a_short ? on_a : on_b;
            const auto& L = a_short ? on_b : on_a;
            const Point ds = S[1] - S[0];
            const Point q = L[0] + ds;
            cells.push_back(polygon_cell({S[0], S[1], q, L[0]}));
            std::vector<Point> tri = {S[1], L[1], q};
            if (std::abs(polygon_area(tri)) > min_area) cells.push_back(polygon_cell(tri));
        }
    }
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i].key = i;
    return SpaceTimeMesh(domain, false, std::move(cells));
}

SpaceTimeMesh refine(const SpaceTimeMesh& mesh, std::span<const std::size_t> marked) {
    std::vector<char> flag(mesh.num_cells(), 0);
    for (std::size_t id : marked) {
        if (id >= mesh.num_cells()) throw std::out_of_range("refine: cell id " + std::to_string(id) + " out of range");
        if (mesh.cell(id).shape != CellShape::Box) throw std::invalid_argument("refine: only box cells can be refined");
        flag[id] = 1;
    }
    const int dims = mesh.domain().dims();
    std::vector<Cell> cells;
    for (const auto& c : mesh.cells()) {
        if (!flag[c.id]) {
            cells.push_back(c);
            continue;
        }
        const Point mid = 0.5 * (c.lo + c.hi);
        for (int k = 0; k < (1 << dims); ++k) {
            Cell ch;
            ch.shape = CellShape::Box;
            ch.dims = dims;
            ch.lo = c.lo;
            ch.hi = c.hi;
            for (int a = 0; a < dims; ++a) {
                if (k & (1 << (dims - 1 - a)))
                    ch.lo[a] = mid[a];
                else
                    ch.hi[a] = mid[a];
            }
            ch.level = c.level + 1;
            ch.parent = c.id;
            ch.key = mix_key(c.key, static_cast<std::uint64_t>(k));
            cells.push_back(ch);
        }
    }
    return SpaceTimeMesh(mesh.domain(), mesh.periodic(), std::move(cells));
}

std::size_t CollocationSets::count(const std::vector<CollocationGroup>& groups) {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.points.size();
    return n;
}

std::vector<Point> face_collocation_points(const Face& face, int n_c) {
    if (n_c < 1) throw std::invalid_argument("collocation_points: n_c must be positive");
    std::vector<Point> pts;
    if (face.is_segment()) {
        for (int i = 1; i <= n_c; ++i) {
            const double s = static_cast<double>(i) / (n_c + 1);
            pts.push_back(face.vertices[0] + s * (face.vertices[1] - face.vertices[0]));
        }
        return pts;
    }
    int fa[2], k = 0;
    for (int a = 0; a < 3; ++a)
        if (a != face.axis) fa[k++] = a;
    for (int i = 1; i <= n_c; ++i)
        for (int j = 1; j <= n_c; ++j) {
            Point p = face.lo;
            p[fa[0]] = face.lo[fa[0]] + (face.hi[fa[0]] - face.lo[fa[0]]) * i / (n_c + 1);
            p[fa[1]] = face.lo[fa[1]] + (face.hi[fa[1]] - face.lo[fa[1]]) * j / (n_c + 1);
            pts.push_back(p);
        }
    return pts;
}

CollocationSets collocation_points(const SpaceTimeMesh& mesh, int n_c) {
    if (n_c < 1) throw std::invalid_argument("collocation_points: n_c must be positive");
    CollocationSets sets;
    sets.n_c = n_c;
    for (const auto& f : mesh.faces()) {
        CollocationGroup g{f.id, face_collocation_points(f, n_c)};
        switch (f.kind) {
            case FaceKind::TemporalInitial: sets.initial.push_back(std::move(g)); break;
            case FaceKind::TemporalInterior: sets.temporal_interior.push_back(std::move(g)); break;
            case FaceKind::SpatialInterior: sets.spatial_interior.push_back(std::move(g)); break;
            case FaceKind::SpatialBoundaryLeft:
                sets.boundary.push_back(g);
                sets.boundary_left.push_back(std::move(g));
                break;
            case FaceKind::SpatialBoundaryRight:
                sets.boundary.push_back(g);
                sets.boundary_right.push_back(std::move(g));
                break;
            case FaceKind::SpatialBoundaryDirichlet: sets.boundary.push_back(std::move(g)); break;
            case FaceKind::TemporalFinal: break;
        }
    }
    return sets;
}

}  // namespace lrnndg
