#include "lrnndg/assembly.hpp"
#include "lrnndg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace lrnndg {

namespace {

double spatial_dot(const Point& a, const Point& b) { return a[1] * b[1] + a[2] * b[2]; }

}  // namespace

IdentityDefects verify_identities(const SpaceTimeMesh& mesh, const CellField& v, const CellVectorField& q, const CellField& w, int quad_n) {
    if (!mesh.all_boxes()) throw std::invalid_argument("verify_identities: box mesh required");
    IdentityDefects out;

    // cellwise: int_K q.grad v + div q v - int_{dK spatial} q.n v
    double volume_flux = 0.0;
    double volume_time = 0.0;
    for (const auto& cell : mesh.cells()) {
        const QuadRule rule = cell_rule(cell, quad_n);
        double s = 0.0, st = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const Point& p = rule.points[k];
            const double vv = v.value(cell.id, p);
            const Point gv = v.gradient(cell.id, p);
            s += rule.weights[k] * (spatial_dot(q.value(cell.id, p), gv) + q.divergence(cell.id, p) * vv);
            st += rule.weights[k] * (gv[0] * w.value(cell.id, p) + vv * w.gradient(cell.id, p)[0]);
        }
        double b = 0.0;
        for (std::size_t fid : mesh.cell_faces()[cell.id]) {
            const Face& f = mesh.face(fid);
            if (f.temporal()) continue;
            const bool minus = f.minus_cell && *f.minus_cell == cell.id && f.plus_cell != cell.id;
            const Point n = minus ? -1.0 * f.normal : f.normal;
            const QuadRule fr = face_rule(f, quad_n);
            for (std::size_t k = 0; k < fr.size(); ++k) {
                const Point p = minus ? fr.points[k] + f.minus_offset : fr.points[k];
                b += fr.weights[k] * spatial_dot(q.value(cell.id, p), n) * v.value(cell.id, p);
            }
        }
        out.ibps = std::max(out.ibps, std::abs(s - b));
        volume_flux += b;
        volume_time += st;
    }

    // sum over cells of boundary fluxes vs. face jumps/averages; temporal telescoping
    double faces_flux = 0.0;
    double faces_time = 0.0;
    for (const auto& f : mesh.faces()) {
        const QuadRule fr = face_rule(f, quad_n);
        const std::size_t P = f.plus_cell;
        for (std::size_t k = 0; k < fr.size(); ++k) {
            const Point& p = fr.points[k];
            const double wt = fr.weights[k];
            if (!f.temporal()) {
                const double qnP = spatial_dot(q.value(P, p), f.normal);
                const double vP = v.value(P, p);
                if (f.interior()) {
                    const std::size_t Q = *f.minus_cell;
                    const Point pq = p + f.minus_offset;
                    const double qnQ = spatial_dot(q.value(Q, pq), f.normal);
                    const double vQ = v.value(Q, pq);
                    faces_flux += wt * (0.5 * (qnP + qnQ) * (vP - vQ) + (qnP - qnQ) * 0.5 * (vP + vQ));
                } else {
                    faces_flux += wt * qnP * vP;
                }
            } else {
                const double vwP = v.value(P, p) * w.value(P, p);
                if (f.kind == FaceKind::TemporalFinal) {
                    faces_time += wt * vwP;
                } else if (f.kind == FaceKind::TemporalInitial) {
                    faces_time -= wt * vwP;
                } else {
                    // plus = lower cell, [v] = v^- - v^+
                    const std::size_t Q = *f.minus_cell;
                    const double vP = v.value(P, p), wP = w.value(P, p);
                    const double vQ = v.value(Q, p), wQ = w.value(Q, p);
                    const double jv = vQ - vP, jw = wQ - wP;
                    faces_time -= wt * (jv * 0.5 * (wP + wQ) + 0.5 * (vP + vQ) * jw);
                }
            }
        }
    }
    out.iden_dg = std::abs(volume_flux - faces_flux);
    out.iden_tdg = std::abs(volume_time - faces_time);
    return out;
}

}  // namespace lrnndg
