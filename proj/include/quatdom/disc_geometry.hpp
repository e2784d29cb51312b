#pragma once

// Hyperbolic geometry on the unit disc: Mobius actions, the Cayley
// transform, isometric circles, element classification, geodesic arcs and
// Gauss-Bonnet polygon area. Doubles throughout, with a global predicate
// tolerance; everything integerizable (shell values m, traces) stays exact
// upstream in lattice_enum.

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "quatdom/lattice_enum.hpp"

namespace quatdom {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kPi = 3.14159265358979323846;

// point of the Riemann sphere: finite value or infinity
struct ExtComplex {
    bool infinite = false;
    Complex z{};

    static ExtComplex infinity() {
        ExtComplex p;
        p.infinite = true;
        return p;
    }
    ExtComplex() = default;
    ExtComplex(Complex v) : z(v) {}
};

struct Mobius {
    Complex a{1}, b{0}, c{0}, d{1};

    Complex det() const { return a * d - b * c; }
    Mobius inverse() const {
        Complex dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    friend Mobius operator*(const Mobius& x, const Mobius& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
};

inline ExtComplex mobius_apply(const Mobius& m, const ExtComplex& p) {
    if (std::abs(m.det()) < 1e-300) throw std::invalid_argument("mobius_apply: singular matrix");
    if (p.infinite) {
        if (std::abs(m.c) == 0.0) return ExtComplex::infinity();
        return ExtComplex(m.a / m.c);
    }
    Complex num = m.a * p.z + m.b, den = m.c * p.z + m.d;
    if (std::abs(den) < 1e-14 * (std::abs(num) + 1.0)) {
        if (std::abs(num) < 1e-14)
            throw std::domain_error("mobius_apply: 0/0 (contract violation)");
        return ExtComplex::infinity();
    }
    return ExtComplex(num / den);
}

inline Complex mobius_apply(const Mobius& m, Complex z) {
    ExtComplex r = mobius_apply(m, ExtComplex(z));
    if (r.infinite) throw std::domain_error("mobius_apply: image at infinity");
    return r.z;
}

// half-plane -> disc transform, sends i to 0
inline Mobius cayley() { return {Complex(0, 1), Complex(1, 0), Complex(1, 0), Complex(0, 1)}; }

// SU(1,1) image [[A, conj C], [C, conj A]] of a group element
inline Mobius su11_matrix(const GroupElement& g) {
    Complex A = g.su11_A(), C = g.su11_C();
    return {A, std::conj(C), C, std::conj(A)};
}

// SL(2,R) image with the symmetric sqrt(p) placement
inline Mobius sl2r_matrix(const GroupElement& g) {
    double sa = std::sqrt((double)g.a()), sp = std::sqrt((double)g.p());
    return {Complex(g.x0() + g.x1() * sa), Complex(sp * (g.x2() + g.x3() * sa)),
            Complex(sp * (g.x2() - g.x3() * sa)), Complex(g.x0() - g.x1() * sa)};
}

// ---------------------------------------------------------------------------

// hyperbolic distance in the disc model
inline double hyperbolic_distance(Complex z, Complex w) {
    double nz = 1.0 - std::norm(z), nw = 1.0 - std::norm(w);
    if (nz <= 0 || nw <= 0) throw std::invalid_argument("hyperbolic_distance: point outside the open disc");
    return std::acosh(1.0 + 2.0 * std::norm(z - w) / (nz * nw));
}

// hyperbolic distance in the upper half-plane
inline double hyperbolic_distance_halfplane(Complex z, Complex w) {
    if (z.imag() <= 0 || w.imag() <= 0)
        throw std::invalid_argument("hyperbolic_distance_halfplane: not in the upper half-plane");
    return std::acosh(1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag()));
}

struct IsometricCircle {
    Complex center;
    double radius = 0;
    int64_t m = 0;                   // exact |C|^2 = a x1^2 + p x2^2 of the owner
    double nearest_point_value = 0;  // F(z_gamma) = 1 - |z|^2 at the point nearest 0
};

// Isometric circle of the SU(1,1) image; nullopt iff C = 0 (only +-1 here).
inline std::optional<IsometricCircle> isometric_circle(const GroupElement& g) {
    int64_t m = g.c_norm_sq();
    if (m == 0) {
        if (!g.is_identity())
            throw std::logic_error("isometric_circle: C = 0 on a non-identity element");
        return std::nullopt;
    }
    Complex A = g.su11_A(), C = g.su11_C();
    IsometricCircle ic;
    ic.center = -std::conj(A) / C;
    ic.radius = 1.0 / std::sqrt((double)m);
    ic.m = m;
    ic.nearest_point_value = 2.0 / (std::sqrt(1.0 + (double)m) + 1.0);
    return ic;
}

// F(z_gamma) = 2/(|A| + 1), the maximum of 1 - |z|^2 on the circle
inline double hutchinson_value(const GroupElement& g) {
    int64_t m = g.c_norm_sq();
    if (m == 0) throw std::invalid_argument("hutchinson_value: element has no isometric circle");
    return 2.0 / (std::sqrt(1.0 + (double)m) + 1.0);
}

enum class ElementClass { Identity, Elliptic, Hyperbolic };

// |trace| > 2 hyperbolic, < 2 elliptic (then matrix order 4 or 6, checked
// exactly), = 2 only for +-identity; a parabolic is a contract violation.
inline ElementClass classify(const GroupElement& g) {
    if (g.is_identity()) return ElementClass::Identity;
    int64_t abs_trace = std::llabs(g.trace());
    if (abs_trace > 2) return ElementClass::Hyperbolic;
    if (abs_trace == 2)
        throw std::domain_error("classify: parabolic element " + g.to_string() +
                                " (impossible in a cocompact quaternion group)");
    int ord = torsion_matrix_order(g);
    if (ord != 4 && ord != 6)
        throw std::logic_error("classify: elliptic element " + g.to_string() +
                               " has matrix order " + std::to_string(ord) + ", expected 4 or 6");
    return ElementClass::Elliptic;
}

// ||g|| = sum of squared SL(2,R) entries = 2(x0^2 + a x1^2) + 2p(x2^2 + a x3^2)
inline int64_t norm_sl2(const GroupElement& g) {
    int64_t n = 2 * (g.x0() * g.x0() + g.a() * g.x1() * g.x1()) +
                2 * g.p() * (g.x2() * g.x2() + g.a() * g.x3() * g.x3());
    return n;
}

struct RadiusFromNorm {
    double paper;   // 1/sqrt(||g|| - 2), as printed in the source relation
    double direct;  // 2/sqrt(||g|| - 2) = 1/|C|, what the geometry uses
};

// The two radius readings differ by an exact factor 2:
// |C|^2 = (||g|| - 2)/4, so 1/|C| = 2/sqrt(||g|| - 2).
inline RadiusFromNorm circle_radius_from_norm(double norm) {
    if (norm <= 2) throw std::invalid_argument("circle_radius_from_norm: norm must exceed 2");
    double s = std::sqrt(norm - 2.0);
    return {1.0 / s, 2.0 / s};
}

// ---------------------------------------------------------------------------
// Circles, arcs, polygons

struct CircleIntersection {
    int count = 0;
    Complex z0, z1;
    bool tangent = false;
};

inline CircleIntersection circle_circle_intersection(Complex o1, double r1, Complex o2, double r2,
                                                     double tol = kDefaultTolerance) {
    CircleIntersection res;
    double d = std::abs(o2 - o1);
    if (d < 1e-15) return res;  // concentric (or identical)
    double along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    double h2 = r1 * r1 - along * along;
    Complex u = (o2 - o1) / d;
    double h = h2 > 0 ? std::sqrt(h2) : 0.0;
    if (h2 < 0 && -h2 > tol * (r1 + r2)) return res;  // disjoint or nested
    if (h <= tol) {
        res.count = 1;
        res.tangent = true;
        res.z0 = o1 + along * u;
        return res;
    }
    res.count = 2;
    res.z0 = o1 + along * u + h * Complex(0, 1) * u;
    res.z1 = o1 + along * u - h * Complex(0, 1) * u;
    return res;
}

// +1 exterior, 0 on the circle (within tol), -1 interior
inline int point_in_exterior(Complex z, Complex center, double radius, double tol = kDefaultTolerance) {
    double d = std::abs(z - center) - radius;
    if (d > tol) return 1;
    if (d < -tol) return -1;
    return 0;
}

// A directed boundary piece: either an arc of a circle (geodesic, or the
// unit circle itself for free boundary) or a straight chord through 0.
struct Arc {
    bool is_line = false;
    Complex center;            // circle case
    double radius = 0;
    double theta0 = 0, dtheta = 0;  // sweep from theta0 by dtheta (signed)
    Complex q0, q1;            // line case endpoints
    int owner = -1;            // -1: free (unit circle); >= 0: element index

    static Arc circle_arc(Complex center, double radius, double theta0, double dtheta, int owner) {
        Arc a;
        a.center = center;
        a.radius = radius;
        a.theta0 = theta0;
        a.dtheta = dtheta;
        a.owner = owner;
        return a;
    }
    static Arc line_arc(Complex q0, Complex q1, int owner) {
        Arc a;
        a.is_line = true;
        a.q0 = q0;
        a.q1 = q1;
        a.owner = owner;
        return a;
    }

    Complex point_at(double t) const {  // t in [0,1]
        if (is_line) return q0 + t * (q1 - q0);
        double th = theta0 + t * dtheta;
        return center + radius * Complex(std::cos(th), std::sin(th));
    }
    Complex start() const { return point_at(0); }
    Complex end() const { return point_at(1); }
    // traversal direction at parameter t
    Complex tangent_at(double t) const {
        if (is_line) {
            Complex d = q1 - q0;
            return d / std::abs(d);
        }
        double th = theta0 + t * dtheta;
        Complex rad(std::cos(th), std::sin(th));
        Complex tan = Complex(0, 1) * rad;
        return dtheta >= 0 ? tan : -tan;
    }
    double length_estimate() const {
        return is_line ? std::abs(q1 - q0) : std::abs(dtheta) * radius;
    }
    bool is_free() const { return owner < 0 && !is_line && radius == 1.0 && std::abs(center) == 0.0; }
};

struct HyperbolicPolygon {
    std::vector<Arc> arcs;  // cyclic, counterclockwise around the region

    bool chain_closes(double tol = 1e-7) const {
        if (arcs.empty()) return false;
        for (size_t k = 0; k < arcs.size(); ++k) {
            const Arc& cur = arcs[k];
            const Arc& nxt = arcs[(k + 1) % arcs.size()];
            if (std::abs(cur.end() - nxt.start()) > tol) return false;
        }
        return true;
    }
    bool has_free_boundary() const {
        for (const Arc& a : arcs)
            if (a.is_free()) return true;
        return false;
    }
    std::vector<Complex> vertices() const {
        std::vector<Complex> v;
        v.reserve(arcs.size());
        for (const Arc& a : arcs) v.push_back(a.start());
        return v;
    }
};

// Gauss-Bonnet for a closed geodesic polygon (counterclockwise):
// area = sum of exterior turn angles - 2 pi = (n-2) pi - sum interior angles.
// Cone points in side interiors contribute no turn and need no handling.
inline double polygon_area(const HyperbolicPolygon& poly, double tol = 1e-7) {
    const auto& arcs = poly.arcs;
    if (arcs.size() < 2) throw std::invalid_argument("polygon_area: too few sides");
    if (poly.has_free_boundary())
        throw std::invalid_argument("polygon_area: region touches the unit circle (not closed)");
    if (!poly.chain_closes(tol)) throw std::invalid_argument("polygon_area: boundary chain does not close");
    double turn_sum = 0;
    for (size_t k = 0; k < arcs.size(); ++k) {
        const Arc& in = arcs[k];
        const Arc& out = arcs[(k + 1) % arcs.size()];
        Complex tin = in.tangent_at(1.0), tout = out.tangent_at(0.0);
        double turn = std::arg(tout / tin);
        // cusp convention (interior angle 0, e.g. ideal vertices): the turn is
        // +pi; noise at the arg branch cut must not flip it to -pi
        if (turn < -kPi + 1e-9) turn += 2.0 * kPi;
        turn_sum += turn;
    }
    return turn_sum - 2.0 * kPi;
}

// The geodesic through two distinct disc points: a circle orthogonal to the
// unit circle, or a diameter when the points are collinear with 0.
inline Arc geodesic_segment(Complex z1, Complex z2, int owner = -2, double tol = kDefaultTolerance) {
    double cross = z1.real() * z2.imag() - z1.imag() * z2.real();
    if (std::abs(cross) < tol) return Arc::line_arc(z1, z2, owner);
    // 2 Re(conj(z) o) = |z|^2 + 1 for both endpoints
    double b1 = std::norm(z1) + 1.0, b2 = std::norm(z2) + 1.0;
    double det = 4.0 * cross;
    double ox = (2.0 * z2.imag() * b1 - 2.0 * z1.imag() * b2) / det;
    double oy = (-2.0 * z2.real() * b1 + 2.0 * z1.real() * b2) / det;
    Complex o(ox, oy);
    double r = std::sqrt(std::norm(o) - 1.0);
    double th1 = std::arg(z1 - o), th2 = std::arg(z2 - o);
    // sweep from th1 to th2 without passing the point farthest from 0
    auto wrap = [](double x) {
        while (x <= -kPi) x += 2 * kPi;
        while (x > kPi) x -= 2 * kPi;
        return x;
    };
    double fwd = wrap(th2 - th1);
    double to_far = wrap(std::arg(o) - th1);  // farthest-from-0 point sits at angle arg(o)
    double dtheta = fwd;
    if (fwd > 0 && to_far > 0 && to_far < fwd) dtheta = fwd - 2 * kPi;
    else if (fwd < 0 && to_far < 0 && to_far > fwd) dtheta = fwd + 2 * kPi;
    return Arc::circle_arc(o, r, th1, dtheta, owner);
}

inline HyperbolicPolygon polygon_from_vertices(const std::vector<Complex>& vs) {
    HyperbolicPolygon poly;
    for (size_t k = 0; k < vs.size(); ++k)
        poly.arcs.push_back(geodesic_segment(vs[k], vs[(k + 1) % vs.size()]));
    return poly;
}

// ---------------------------------------------------------------------------
// Dirichlet half-planes

// {x : rho(x, c) <= rho(x, w)} for distinct disc points c, w. Bounded by a
// geodesic: a circle (keep exterior or interior depending on c) or a
// straight line through 0 when |c| = |w|.
struct Halfplane {
    bool is_line = false;
    Complex center;       // circle case
    double radius = 0;
    Complex normal;       // line case: keep side with Re(conj(normal) x) <= 0-ish
    bool keep_exterior = true;

    // signed slack: positive inside the kept half-plane
    double margin(Complex x) const {
        if (is_line) return normal.real() * x.real() + normal.imag() * x.imag();
        double d = std::abs(x - center) - radius;
        return keep_exterior ? d : -d;
    }
    bool contains(Complex x, double tol = kDefaultTolerance) const { return margin(x) >= -tol; }
};

inline Halfplane dirichlet_halfplane_points(Complex c, Complex w, double tol = kDefaultTolerance) {
    if (std::abs(c - w) < tol)
        throw std::invalid_argument("dirichlet_halfplane: coincident points (fixed center?)");
    double beta = std::norm(c) - std::norm(w);
    Complex M = c * (1.0 - std::norm(w)) - w * (1.0 - std::norm(c));
    Halfplane hp;
    if (std::abs(beta) < 1e-14) {
        hp.is_line = true;
        Complex n = M;  // keep Re(conj(x) M)? sign fixed so that c is inside
        double at_c = n.real() * c.real() + n.imag() * c.imag();
        hp.normal = at_c >= 0 ? n : -n;
        return hp;
    }
    Complex center = M / beta;
    double r2 = std::norm(center) - 1.0;
    if (r2 <= 0) throw std::logic_error("dirichlet_halfplane: degenerate bisector");
    hp.center = center;
    hp.radius = std::sqrt(r2);
    hp.keep_exterior = std::abs(c - center) >= hp.radius;
    return hp;
}

// Half-plane D_g(c) = {x : rho(x,c) <= rho(x, g c)} for a group element.
inline Halfplane dirichlet_halfplane(const GroupElement& g, Complex c, double tol = kDefaultTolerance) {
    Complex gc = mobius_apply(su11_matrix(g), c);
    return dirichlet_halfplane_points(c, gc, tol);
}

}  // namespace quatdom
