#include "remixsig/mesh.hpp"

namespace remixsig {

double surface_area(const TriangleMesh& mesh) {
    double total = 0.0;
    for (const Triangle& t : mesh.triangles) total += t.area();
    return total;
}

Vec3 area_centroid(const TriangleMesh& mesh) {
    double total = 0.0;
    Vec3 acc;
    for (const Triangle& t : mesh.triangles) {
        double a = t.area();
        acc += t.centroid() * a;
        total += a;
    }
    if (total <= 0.0) throw ZeroArea("area_centroid: mesh has zero surface area");
    return acc / total;
}

double mean_centroid_distance(const TriangleMesh& mesh) {
    Vec3 c = area_centroid(mesh);
    double total = 0.0, acc = 0.0;
    for (const Triangle& t : mesh.triangles) {
        double a = t.area();
        acc += (t.centroid() - c).norm() * a;
        total += a;
    }
    return acc / total;
}

TriangleMesh apply_rigid(const TriangleMesh& mesh, const Mat3& rotation, const Vec3& translation) {
    if (rotation.orthonormality_defect() > 1e-9)
        throw NonOrthonormalRotation("apply_rigid: rotation matrix is not orthonormal");
    TriangleMesh out;
    out.source_id = mesh.source_id;
    out.triangles.reserve(mesh.triangles.size());
    for (const Triangle& t : mesh.triangles) {
        Triangle r;
        r.v0 = rotation.apply(t.v0) + translation;
        r.v1 = rotation.apply(t.v1) + translation;
        r.v2 = rotation.apply(t.v2) + translation;
        out.triangles.push_back(r);
    }
    return out;
}

}  // namespace remixsig
