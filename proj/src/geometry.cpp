#include "sphaar/geometry.hpp"

#include <string>

#include "sphaar/errors.hpp"

namespace sphaar {

Vec3 cap_map(double u, double v) {
    const double s = 1.0 / std::sqrt(u * u + v * v + 1.0);
    return {u * s, v * s, s};
}

Vec3 face_map(int face, double u, double v) {
    if (face < 0 || face >= kNumFaces) {
        throw InputDomainError("face index out of range: " + std::to_string(face));
    }
    if (!(u >= -1.0 && u <= 1.0 && v >= -1.0 && v <= 1.0)) {
        throw InputDomainError("face coordinates outside [-1,1]");
    }
    const Vec3 q = cap_map(u, v);
    switch (face) {
        case 0: return {q.x, q.y, q.z};     // +z
        case 1: return {q.x, -q.y, -q.z};   // -z
        case 2: return {q.z, q.y, -q.x};    // +x
        case 3: return {-q.z, q.y, q.x};    // -x
        case 4: return {q.x, q.z, -q.y};    // +y
        default: return {q.x, -q.z, q.y};   // -y
    }
}

Vec3 face_local(int face, const Vec3& p) {
    switch (face) {
        case 0: return {p.x, p.y, p.z};
        case 1: return {p.x, -p.y, -p.z};
        case 2: return {-p.z, p.y, p.x};
        case 3: return {p.z, p.y, -p.x};
        case 4: return {p.x, -p.z, p.y};
        default: return {p.x, p.z, -p.y};
    }
}

int select_face(const Vec3& p) {
    const double ax = std::fabs(p.x), ay = std::fabs(p.y), az = std::fabs(p.z);
    double m = ax;
    if (ay > m) m = ay;
    if (az > m) m = az;
    // Canonical order decides ties on cap boundaries.
    if (p.z == m) return 0;
    if (-p.z == m) return 1;
    if (p.x == m) return 2;
    if (-p.x == m) return 3;
    if (p.y == m) return 4;
    return 5;
}

void face_parameters(int face, const Vec3& p, double& u, double& v) {
    const Vec3 q = face_local(face, p);
    u = q.x / q.z;
    v = q.y / q.z;
}

double corner_solid_angle(double a, double b) {
    return std::atan(a * b / std::sqrt(1.0 + a * a + b * b));
}

double cap_rect_area(double u_lo, double u_hi, double v_lo, double v_hi) {
    return corner_solid_angle(u_hi, v_hi) - corner_solid_angle(u_lo, v_hi) -
           corner_solid_angle(u_hi, v_lo) + corner_solid_angle(u_lo, v_lo);
}

}  // namespace sphaar
