#pragma once

#include "lrnndg/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lrnndg {

enum class CellShape { Box, Parallelogram, Triangle };

/// Space-time cell. Boxes are described by lo/hi; polygons (one spatial dimension only) by their
/// vertices in counter-clockwise (t, x) order, with lo/hi holding the bounding box.
struct Cell {
    std::size_t id = 0;
    CellShape shape = CellShape::Box;
    int dims = 2;
    Point lo{}, hi{};
    std::vector<Point> vertices;
    int level = 0;
    std::optional<std::size_t> parent;
    std::uint64_t key = 0;  // stable across refinement; seeds the local feature space

    [[nodiscard]] double measure() const;
    [[nodiscard]] double diameter() const;
    [[nodiscard]] Point centroid() const;
    [[nodiscard]] bool contains(const Point& p, double tol) const;
    /// Edges (a, b) of a two-dimensional cell, counter-clockwise.
    [[nodiscard]] std::vector<std::pair<Point, Point>> edges() const;
    /// Corner list for plotting (boxes: 4 or 8 corners).
    [[nodiscard]] std::vector<Point> corners() const;
};

enum class FaceKind {
    SpatialInterior,
    SpatialBoundaryLeft,
    SpatialBoundaryRight,
    SpatialBoundaryDirichlet,
    TemporalInterior,
    TemporalInitial,
    TemporalFinal,
};

std::string to_string(FaceKind kind);
std::string to_string(CellShape shape);

/// Face fragment shared by exactly one cell per side (or a single cell on the boundary).
/// Segments (one spatial dimension) are given by two endpoints; patches (two spatial dimensions) are
/// axis-aligned rectangles normal to `axis`, spanned by lo/hi.
struct Face {
    std::size_t id = 0;
    FaceKind kind = FaceKind::SpatialInterior;
    std::vector<Point> vertices;
    Point lo{}, hi{};
    int axis = -1;
    std::size_t plus_cell = 0;
    std::optional<std::size_t> minus_cell;
    Point normal{};        // unit outward normal of the plus cell
    Point minus_offset{};  // periodic shift: the minus cell is evaluated at point + minus_offset

    [[nodiscard]] bool interior() const { return minus_cell.has_value(); }
    [[nodiscard]] bool is_segment() const { return vertices.size() == 2; }
    [[nodiscard]] double measure() const;
    [[nodiscard]] double diameter() const;
    [[nodiscard]] bool temporal() const;
};

class SpaceTimeMesh {
public:
    SpaceTimeMesh() = default;
    /// Takes ownership of the cells (ids are reassigned to their positions) and derives the faces.
    SpaceTimeMesh(Domain domain, bool periodic, std::vector<Cell> cells);

    [[nodiscard]] const Domain& domain() const { return domain_; }
    [[nodiscard]] int d() const { return domain_.d; }
    [[nodiscard]] bool periodic() const { return periodic_; }
    [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }
    [[nodiscard]] const std::vector<Face>& faces() const { return faces_; }
    [[nodiscard]] const Cell& cell(std::size_t i) const { return cells_.at(i); }
    [[nodiscard]] const Face& face(std::size_t i) const { return faces_.at(i); }
    [[nodiscard]] std::size_t num_cells() const { return cells_.size(); }
    /// Face ids touching each cell.
    [[nodiscard]] const std::vector<std::vector<std::size_t>>& cell_faces() const { return cell_faces_; }
    [[nodiscard]] double total_measure() const;
    /// Cell containing p (first match), if any.
    [[nodiscard]] std::optional<std::size_t> locate(const Point& p) const;
    [[nodiscard]] bool all_boxes() const;
    [[nodiscard]] double tolerance() const;

    [[nodiscard]] nlohmann::json to_json() const;

private:
    void build_box_faces();
    void build_polygon_faces();

    Domain domain_{};
    bool periodic_ = false;
    std::vector<Cell> cells_;
    std::vector<Face> faces_;
    std::vector<std::vector<std::size_t>> cell_faces_;
};

/// Tensor-product box mesh with steps tau (time) and h (every spatial direction).
SpaceTimeMesh build_uniform_mesh(const Domain& domain, double tau, double h, bool periodic = false);

/// Strips between the lines x = slope * t + a_i, clipped to the domain and split into parallelogram
/// and triangle cells. One spatial dimension only.
SpaceTimeMesh build_characteristic_mesh(const Domain& domain, double slope, std::span<const double> anchors);

/// Isotropic refinement of the marked box cells into 2^(1+d) children each.
SpaceTimeMesh refine(const SpaceTimeMesh& mesh, std::span<const std::size_t> marked);

struct CollocationGroup {
    std::size_t face = 0;
    std::vector<Point> points;
};

struct CollocationSets {
    int n_c = 0;
    std::vector<CollocationGroup> initial;            // t = t0
    std::vector<CollocationGroup> temporal_interior;  // interior time nodes
    std::vector<CollocationGroup> spatial_interior;   // interior spatial faces (incl. periodic pairs)
    std::vector<CollocationGroup> boundary_left;      // x = x0, one spatial dimension
    std::vector<CollocationGroup> boundary_right;     // x = x1, one spatial dimension
    std::vector<CollocationGroup> boundary;           // every spatial boundary face

    static std::size_t count(const std::vector<CollocationGroup>& groups);
};

/// n_c points per segment face at parameters i / (n_c + 1); an n_c x n_c grid on patch faces.
CollocationSets collocation_points(const SpaceTimeMesh& mesh, int n_c);

/// Points of a single face from the same rule.
std::vector<Point> face_collocation_points(const Face& face, int n_c);

}  // namespace lrnndg
