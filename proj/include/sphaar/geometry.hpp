#pragma once

#include <cmath>

namespace sphaar {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Canonical face order: +z, -z, +x, -x, +y, -y.
inline constexpr int kNumFaces = 6;
inline constexpr const char* kFaceNames[kNumFaces] = {"+z", "-z", "+x", "-x", "+y", "-y"};

// Cap map for the +z face square: (u,v) in [-1,1]^2 -> (u,v,1)/sqrt(u^2+v^2+1).
// Its area density on the square is (1 + u^2 + v^2)^(-3/2).
Vec3 cap_map(double u, double v);

// Cap map composed with the fixed rotation of the given face. The rotations are
// signed axis permutations taking the +z cap to the six axis directions.
// Throws InputDomainError for face outside [0,6) or coordinates outside [-1,1].
Vec3 face_map(int face, double u, double v);

// Rotate a global direction into the local frame of a face (inverse rotation).
Vec3 face_local(int face, const Vec3& p);

// Face containing direction p, chosen by the largest-magnitude coordinate with
// ties resolved in canonical face order. p need not be normalized.
int select_face(const Vec3& p);

// Face parameters (u,v) of a direction known to lie in the given face's cap.
void face_parameters(int face, const Vec3& p, double& u, double& v);

// Signed solid angle of [0,a] x [0,b] under cap_map:
// integral of (1+u^2+v^2)^(-3/2), closed form arctan(ab / sqrt(1+a^2+b^2)).
double corner_solid_angle(double a, double b);

// Spherical area of the cap-map image of [u_lo,u_hi] x [v_lo,v_hi], by the
// signed-corner formula. Rotation-invariant, so valid for every face.
double cap_rect_area(double u_lo, double u_hi, double v_lo, double v_hi);

}  // namespace sphaar
