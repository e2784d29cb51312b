#pragma once

// Incremental Ford fundamental domains in Hutchinson order with area
// certification against the covolume, generator extraction with side
// pairing, the Dirichlet-domain alternative, and the theoretical bound
// calculators (Chalk chain, epsilon cutoff).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "quatdom/disc_geometry.hpp"
#include "quatdom/lattice_enum.hpp"
#include "quatdom/order_arith.hpp"

namespace quatdom {

enum class VolNorm { Hyperbolic, Arithmetic };

struct BuildConfig {
    double tolerance = kDefaultTolerance;  // geometric predicate tolerance
    double eps_k = 3.0;                    // k in the epsilon bound, must be > 2
    int64_t max_shell_cap = 1000000000;    // hard cap on the shell value m
    VolNorm vol_norm = VolNorm::Hyperbolic;
    double certify_rel_tol = 1e-6;
};

// epsilon < (1/k)(1 - sqrt(V/(2+V))), and the norm value above which circles
// have radius <= epsilon (via 1/|C| = 2/sqrt(||g|| - 2)).
struct EpsilonBound {
    double epsilon = 0;
    double norm_bound = 0;
};

inline EpsilonBound johansson_epsilon(double vol, double k) {
    if (!(vol > 0)) throw std::invalid_argument("johansson_epsilon: volume must be positive");
    if (!(k > 2)) throw std::invalid_argument("johansson_epsilon: k must exceed 2");
    EpsilonBound b;
    b.epsilon = (1.0 - std::sqrt(vol / (2.0 + vol))) / k;
    b.norm_bound = 2.0 + 4.0 / (b.epsilon * b.epsilon);
    return b;
}

// N <= 6 + phi(d_H), ||A_1|| < 2 + 4N/pi, ||A_{i+1}|| < (9/64)(p^2/d_H^2) N ||A_i||^5.
// The quintic chain overflows any native float almost immediately, so it is
// carried - and reported - in log10.
struct ChalkBounds {
    int64_t n_bound = 0;
    double a1_bound = 0;
    std::vector<double> chain_log10;  // chain_log10[i] = log10(bound for ||A_{i+1}||)
};

inline ChalkBounds chalk_bounds(int64_t p, int64_t a) {
    require_valid_pair(p, a);
    QuatAlgebra h(a, p);
    ChalkBounds cb;
    cb.n_bound = 6 + euler_phi(h.discriminant());
    cb.a1_bound = 2.0 + 4.0 * (double)cb.n_bound / kPi;
    double dH = (double)h.discriminant();
    double step = std::log10(9.0 / 64.0 * (double)p * (double)p / (dH * dH) * (double)cb.n_bound);
    cb.chain_log10.push_back(std::log10(cb.a1_bound));
    for (int64_t i = 1; i < cb.n_bound; ++i)
        cb.chain_log10.push_back(step + 5.0 * cb.chain_log10.back());
    return cb;
}

// ---------------------------------------------------------------------------
// The evolving region: unit disc minus the union of inserted circle interiors

class DiscRegion {
public:
    explicit DiscRegion(double tol) : tol_(tol) {}

    const std::vector<Arc>& arcs() const { return arcs_; }
    bool whole_disc() const { return whole_disc_; }
    bool closed() const {
        if (whole_disc_) return false;
        for (const Arc& a : arcs_)
            if (a.owner < 0) return false;
        return true;
    }
    double min_vertex_separation() const { return min_vertex_sep_; }
    int degenerate_events() const { return degenerate_events_; }
    double max_vertex_abs() const { return whole_disc_ || !closed_cache_ ? 1.0 : max_vertex_abs_; }

    // Removes the open disc |z - o| < r from the region. Returns true if the
    // region actually shrank. The circle must be a geodesic (|o|^2 = 1 + r^2).
    bool insert_circle(Complex o, double r, int owner) {
        if (whole_disc_) {
            first_circle(o, r, owner);
            return true;
        }
        // quick reject once the region is closed: the region lies inside
        // |z| <= max vertex radius, the new disc outside |z| >= |o| - r
        if (closed_cache_ && std::abs(o) - r > max_vertex_abs_ + 16 * tol_) return false;

        // The region is star-shaped about 0, so the disc (o, r) only reaches
        // boundary arcs whose origin-angle interval meets the disc's angular
        // cone. Probe those; if none is touched this insert is a no-op.
        if (arcs_.size() >= 48) {
            bool any_touched = false;
            double phi = std::arg(o);
            double beta = std::asin(std::min(1.0, r / std::abs(o))) + 1e-7;
            double lo = phi - beta - max_arc_span_;
            size_t n = angle_index_.size();
            auto probe = [&](size_t idx) {
                if (any_touched) return;
                if (arc_touched(arcs_[angle_index_[idx].second], o, r)) any_touched = true;
            };
            // walk index entries with start angle in [lo, phi + beta] mod 2pi
            double span = (phi + beta) - lo;
            if (span >= 2 * kPi) {
                for (size_t i = 0; i < n && !any_touched; ++i) probe(i);
            } else {
                double lo_w = wrap_2pi(lo);
                size_t i = (size_t)(std::lower_bound(angle_index_.begin(), angle_index_.end(),
                                                     std::make_pair(lo_w, (int)-1)) -
                                    angle_index_.begin());
                double walked = 0;
                double prev = lo_w;
                for (size_t step = 0; step < n && walked <= span && !any_touched; ++step) {
                    size_t k = (i + step) % n;
                    double ang = angle_index_[k].first;
                    double fwd = ang - prev;
                    if (fwd < 0) fwd += 2 * kPi;
                    walked += fwd;
                    prev = ang;
                    if (walked > span) break;
                    probe(k);
                }
            }
            if (!any_touched) return false;
        }

        std::vector<Arc> kept;
        std::vector<int> gap_after;  // indices in `kept` after which a gap begins
        bool removed_any = false;
        bool pending_gap = false;  // currently walking removed chain
        bool leading_gap = false;  // chain started inside the removed region

        for (size_t k = 0; k < arcs_.size(); ++k) {
            const Arc& arc = arcs_[k];
            std::vector<double> ts = split_params(arc, o, r);
            double prev = 0;
            std::vector<std::pair<Arc, bool>> parts;  // (subarc, inside_new_disc)
            for (double t : ts) {
                parts.push_back({sub_arc(arc, prev, t), false});
                prev = t;
            }
            parts.push_back({sub_arc(arc, prev, 1.0), false});
            for (auto& pr : parts) {
                Complex mid = pr.first.point_at(0.5);
                pr.second = std::abs(mid - o) - r < -tol_;
            }
            for (auto& pr : parts) {
                if (pr.first.length_estimate() < tol_) continue;  // merged into a vertex
                if (pr.second) {
                    removed_any = true;
                    if (kept.empty())
                        leading_gap = true;
                    else
                        pending_gap = true;
                } else {
                    if (pending_gap) {
                        gap_after.push_back((int)kept.size() - 1);
                        pending_gap = false;
                    }
                    kept.push_back(pr.first);
                }
            }
        }
        if (!removed_any) return false;
        if (kept.empty())
            throw std::logic_error("DiscRegion: a circle swallowed the whole region (origin must stay inside)");
        if (pending_gap || leading_gap) gap_after.push_back((int)kept.size() - 1);

        // splice the new circle's arcs across each gap (convexity gives one
        // gap; tolerance slivers can briefly make more)
        if (gap_after.size() > 1) ++degenerate_events_;
        std::vector<Arc> next;
        for (size_t k = 0; k < kept.size(); ++k) {
            next.push_back(kept[k]);
            if (std::find(gap_after.begin(), gap_after.end(), (int)k) != gap_after.end()) {
                Complex from = kept[k].end();
                Complex to = kept[(k + 1) % kept.size()].start();
                if (std::abs(from - to) > tol_) next.push_back(clockwise_arc(o, r, from, to, owner));
            }
        }
        arcs_ = std::move(next);
        refresh_vertex_stats();
        return true;
    }

private:
    std::vector<Arc> arcs_;
    bool whole_disc_ = true;
    double tol_;
    double max_vertex_abs_ = 1.0;
    double min_vertex_sep_ = std::numeric_limits<double>::infinity();
    int degenerate_events_ = 0;
    bool closed_cache_ = false;
    std::vector<std::pair<double, int>> angle_index_;  // (origin angle of arc start, index), sorted
    double max_arc_span_ = 2 * kPi;

    static double wrap_pm_pi(double x) {
        while (x <= -kPi) x += 2 * kPi;
        while (x > kPi) x -= 2 * kPi;
        return x;
    }
    static double wrap_2pi(double x) {
        while (x < 0) x += 2 * kPi;
        while (x >= 2 * kPi) x -= 2 * kPi;
        return x;
    }

    // would the disc (o, r) remove a piece of this arc? mirrors the clip walk
    bool arc_touched(const Arc& arc, Complex o, double r) const {
        std::vector<double> ts = split_params(arc, o, r);
        double prev = 0;
        ts.push_back(1.0);
        for (double t : ts) {
            if ((t - prev) * std::abs(arc.dtheta) * arc.radius >= tol_) {
                Complex mid = arc.point_at((prev + t) / 2);
                if (std::abs(mid - o) - r < -tol_) return true;
            }
            prev = t;
        }
        return false;
    }

    static Arc clockwise_arc(Complex o, double r, Complex from, Complex to, int owner) {
        double th0 = std::arg(from - o), th1 = std::arg(to - o);
        double d = th1 - th0;
        while (d > 0) d -= 2 * kPi;
        while (d <= -2 * kPi) d += 2 * kPi;
        return Arc::circle_arc(o, r, th0, d, owner);
    }

    void first_circle(Complex o, double r, int owner) {
        double ao = std::abs(o);
        if (ao <= r + tol_) throw std::logic_error("DiscRegion: circle contains the origin");
        double phi = std::arg(o);
        double alpha = std::acos(std::min(1.0, 1.0 / ao));  // half-window on the unit circle
        Complex p_in = std::polar(1.0, phi - alpha), p_out = std::polar(1.0, phi + alpha);
        arcs_.clear();
        arcs_.push_back(Arc::circle_arc(Complex(0, 0), 1.0, phi + alpha, 2 * kPi - 2 * alpha, -1));
        arcs_.push_back(clockwise_arc(o, r, p_in, p_out, owner));
        whole_disc_ = false;
        refresh_vertex_stats();
    }

    // parameters in (0,1) where the circle (o,r) crosses the arc
    std::vector<double> split_params(const Arc& arc, Complex o, double r) const {
        CircleIntersection ci =
            circle_circle_intersection(arc.center, arc.radius, o, r, tol_);
        std::vector<double> ts;
        double ang_tol = std::min(0.1, tol_ / std::max(arc.radius, 1e-12));
        for (int k = 0; k < ci.count; ++k) {
            Complex z = k == 0 ? ci.z0 : ci.z1;
            double th = std::arg(z - arc.center);
            double rel = wrap_pm_pi(th - arc.theta0);
            double t;
            if (arc.dtheta >= 0) {
                if (rel < -ang_tol) rel += 2 * kPi;
                t = rel / arc.dtheta;
            } else {
                if (rel > ang_tol) rel -= 2 * kPi;
                t = rel / arc.dtheta;
            }
            double t_tol = ang_tol / std::max(std::abs(arc.dtheta), 1e-12);
            if (t > t_tol && t < 1.0 - t_tol) ts.push_back(t);
        }
        std::sort(ts.begin(), ts.end());
        return ts;
    }

    static Arc sub_arc(const Arc& arc, double t0, double t1) {
        Arc s = arc;
        s.theta0 = arc.theta0 + t0 * arc.dtheta;
        s.dtheta = (t1 - t0) * arc.dtheta;
        return s;
    }

    void refresh_vertex_stats() {
        closed_cache_ = closed();
        angle_index_.clear();
        angle_index_.reserve(arcs_.size());
        max_arc_span_ = 0;
        for (size_t k = 0; k < arcs_.size(); ++k) {
            double s = wrap_2pi(std::arg(arcs_[k].start()));
            double e = wrap_2pi(std::arg(arcs_[k].end()));
            double span = e - s;
            if (span < 0) span += 2 * kPi;
            max_arc_span_ = std::max(max_arc_span_, span);
            angle_index_.push_back({s, (int)k});
        }
        std::sort(angle_index_.begin(), angle_index_.end());
        if (!closed_cache_) {
            max_vertex_abs_ = 1.0;
            return;
        }
        double mx = 0;
        min_vertex_sep_ = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < arcs_.size(); ++k) {
            const Arc& a = arcs_[k];
            mx = std::max(mx, std::abs(a.start()));
            // an arc can bulge past its endpoints if it spans the far point
            double far_rel = wrap_pm_pi(std::arg(a.center) - a.theta0);
            double span = a.dtheta;
            bool covers = a.dtheta >= 0 ? (far_rel >= 0 && far_rel <= span)
                                        : (far_rel <= 0 && far_rel >= span);
            if (covers) mx = std::max(mx, std::abs(a.center) + a.radius);
            double sep = std::abs(a.start() - arcs_[(k + 1) % arcs_.size()].start());
            min_vertex_sep_ = std::min(min_vertex_sep_, sep);
        }
        max_vertex_abs_ = mx;
    }
};

// ---------------------------------------------------------------------------

struct DomainStats {
    int n_sides = 0;
    int n_generators = 0;  // side-pairing classes {g, g^-1}
    int64_t max_x0 = 0;
    int64_t max_norm = 0;
    int elliptic_vertex_count = 0;
    double min_vertex_separation = 0;
    int degenerate_events = 0;
};

struct FordDomain {
    int64_t p = 0, a = 0;
    HyperbolicPolygon polygon;                // arcs own indices into `elements`
    std::vector<GroupElement> elements;       // every consumed element, shell order
    std::vector<GroupElement> generators;     // distinct boundary-arc owners
    int64_t shells_consumed = 0;              // largest m processed
    int64_t closure_shell = -1;               // m at which the free boundary vanished
    double area = 0;
    double area_at_closure = 0;
    bool certified = false;
    bool certified_at_closure = false;
    bool any_post_closure_cut = false;
    double epsilon_used = 0;
    double area_gap = 0;  // |area - covolume| / covolume at the end
    Rational covolume_over_pi;
    double covolume = 0;
    Covolume covolume_detail;
    DomainStats stats;

    const GroupElement& owner_of(const Arc& arc) const { return elements.at((size_t)arc.owner); }
};

namespace detail {

inline std::string pm_key(const GroupElement& g) { return g.to_zquat().pm_canonical().key(); }

inline void fill_generator_stats(FordDomain& d) {
    std::unordered_map<std::string, int> owner_seen;
    d.generators.clear();
    DomainStats& st = d.stats;
    st.n_sides = (int)d.polygon.arcs.size();
    std::unordered_map<std::string, int> pair_classes;
    for (const Arc& arc : d.polygon.arcs) {
        if (arc.owner < 0) continue;
        const GroupElement& g = d.elements.at((size_t)arc.owner);
        if (owner_seen.emplace(pm_key(g), 1).second) d.generators.push_back(g);
        std::string k1 = pm_key(g), k2 = pm_key(g.inverse());
        pair_classes.emplace(std::min(k1, k2), 0);
    }
    st.n_generators = (int)pair_classes.size();
    st.max_x0 = 0;
    st.max_norm = 0;
    st.elliptic_vertex_count = 0;
    std::unordered_map<std::string, int> elliptic_classes;
    for (const GroupElement& g : d.generators) {
        st.max_x0 = std::max<int64_t>(st.max_x0, g.x0() < 0 ? -g.x0() : g.x0());
        st.max_norm = std::max<int64_t>(st.max_norm, norm_sl2(g));
        if (g.is_torsion()) elliptic_classes.emplace(pm_key(g), 0);
    }
    st.elliptic_vertex_count = (int)elliptic_classes.size();
}

}  // namespace detail

// Ford construction: consume shells in ascending m (descending circle
// radius), detect closure, keep consuming to the epsilon cutoff m <= 1/eps^2,
// then certify the Gauss-Bonnet area against the covolume. Fails closed:
// on a miss the cutoff deepens (eps halves) until the safety cap.
inline FordDomain build_ford_domain(int64_t p, int64_t a, const BuildConfig& cfg = {}) {
    require_valid_pair(p, a);
    if (!(cfg.eps_k > 2)) throw std::invalid_argument("build_ford_domain: eps_k must exceed 2");

    FordDomain d;
    d.p = p;
    d.a = a;
    d.covolume_detail = covolume_canonical(p, a);
    d.covolume_over_pi = d.covolume_detail.area_over_pi;
    d.covolume = d.covolume_detail.area();

    double vol_for_eps =
        cfg.vol_norm == VolNorm::Hyperbolic ? d.covolume : d.covolume / (2.0 * kPi);
    double eps = johansson_epsilon(vol_for_eps, cfg.eps_k).epsilon;
    int64_t cutoff = (int64_t)std::ceil(1.0 / (eps * eps));

    DiscRegion region(cfg.tolerance);
    int64_t next_lo = 1, chunk = 1024;
    bool was_closed = false;

    auto area_now = [&]() {
        HyperbolicPolygon poly{region.arcs()};
        return polygon_area(poly);
    };

    while (true) {
        int64_t effective_cutoff = std::min(cutoff, cfg.max_shell_cap);
        int64_t hi = std::min(std::max(effective_cutoff, next_lo), next_lo + chunk - 1);
        for (const EnumerationShell& shell : enumerate_shells(p, a, next_lo, hi)) {
            for (const GroupElement& g : shell.members) {
                auto ic = isometric_circle(g);
                d.elements.push_back(g);
                bool cut = region.insert_circle(ic->center, ic->radius, (int)d.elements.size() - 1);
                if (cut && was_closed) d.any_post_closure_cut = true;
            }
            d.shells_consumed = shell.m;
            if (!was_closed && region.closed()) {
                was_closed = true;
                d.closure_shell = shell.m;
                d.area_at_closure = area_now();
                d.certified_at_closure =
                    std::abs(d.area_at_closure - d.covolume) / d.covolume <= cfg.certify_rel_tol;
            }
        }
        next_lo = hi + 1;
        chunk = std::min<int64_t>(chunk * 2, 1 << 22);
        if (next_lo <= effective_cutoff) continue;

        // reached the cutoff: certify or deepen
        if (was_closed) {
            d.area = area_now();
            d.area_gap = std::abs(d.area - d.covolume) / d.covolume;
            if (d.area_gap <= cfg.certify_rel_tol) {
                d.certified = true;
                d.epsilon_used = eps;
                break;
            }
        } else {
            d.area_gap = std::numeric_limits<double>::infinity();
        }
        if (cutoff >= cfg.max_shell_cap) {
            d.epsilon_used = eps;
            d.certified = false;
            break;  // explicit failure report with the partial domain and gap
        }
        eps /= 2;
        cutoff = (int64_t)std::ceil(1.0 / (eps * eps));
    }
    d.shells_consumed = std::max(d.shells_consumed, std::min(cutoff, cfg.max_shell_cap));
    d.polygon = HyperbolicPolygon{region.arcs()};
    d.stats.min_vertex_separation = region.min_vertex_separation();
    d.stats.degenerate_events = region.degenerate_events();
    detail::fill_generator_stats(d);
    return d;
}

// largest endpoint mismatch of the side pairing gamma(side of gamma) =
// side of gamma^{-1}; certified domains should sit at float-error level
inline double verify_side_pairing(const FordDomain& d) {
    std::unordered_map<std::string, std::vector<const Arc*>> arcs_of;
    for (const Arc& arc : d.polygon.arcs) {
        if (arc.owner < 0) throw std::invalid_argument("verify_side_pairing: domain has free boundary");
        arcs_of[detail::pm_key(d.owner_of(arc))].push_back(&arc);
    }
    double worst = 0;
    for (const Arc& arc : d.polygon.arcs) {
        const GroupElement& g = d.owner_of(arc);
        Mobius m = su11_matrix(g);
        Complex e0 = mobius_apply(m, arc.start()), e1 = mobius_apply(m, arc.end());
        auto it = arcs_of.find(detail::pm_key(g.inverse()));
        if (it == arcs_of.end())
            throw std::logic_error("verify_side_pairing: no partner side for " + g.to_string());
        double best = std::numeric_limits<double>::infinity();
        for (const Arc* partner : it->second) {
            Complex s = partner->start(), e = partner->end();
            double direct = std::max(std::abs(e0 - s), std::abs(e1 - e));
            double swapped = std::max(std::abs(e0 - e), std::abs(e1 - s));
            best = std::min({best, direct, swapped});
        }
        worst = std::max(worst, best);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Dirichlet construction (norm-schedule driver, same clipping core)

struct DirichletConfig {
    BuildConfig base;
    Complex center{0, 0};
    std::vector<double> schedule;  // explicit increasing k_1 < k_2 < ...; empty: doubling default
    int max_schedule_steps = 60;
    int max_final_deepenings = 3;
};

// Dirichlet domain D(c) = intersection of half-planes closer to c than to
// g(c), grown over an increasing norm schedule k_1 < k_2 < ..., stopped at
// the first compact region, finished by the triangle-inequality radius R,
// and certified by area like the Ford build. Built in the frame where the
// center sits at 0; mapped back at the end.
inline FordDomain build_dirichlet_domain(int64_t p, int64_t a, const DirichletConfig& dcfg = {}) {
    require_valid_pair(p, a);
    const BuildConfig& cfg = dcfg.base;
    Complex c = dcfg.center;
    if (std::abs(c) >= 1.0) throw std::invalid_argument("build_dirichlet_domain: center outside the disc");

    FordDomain d;
    d.p = p;
    d.a = a;
    d.covolume_detail = covolume_canonical(p, a);
    d.covolume_over_pi = d.covolume_detail.area_over_pi;
    d.covolume = d.covolume_detail.area();

    // frame shift sending c to 0
    double s = 1.0 / std::sqrt(1.0 - std::norm(c));
    Mobius to_zero{Complex(s, 0), -c * s, -std::conj(c) * s, Complex(s, 0)};
    Mobius back = to_zero.inverse();

    DiscRegion region(cfg.tolerance);
    int64_t consumed_m = 0;

    auto insert_up_to = [&](int64_t m_hi) {
        if (m_hi <= consumed_m) return;
        for (const EnumerationShell& shell : enumerate_shells(p, a, consumed_m + 1, m_hi)) {
            for (const GroupElement& g : shell.members) {
                d.elements.push_back(g);
                int idx = (int)d.elements.size() - 1;
                // D_{g^{-1}}(c) is bounded by the bisector of (c, g^{-1}c),
                // which is the isometric circle of g in the shifted frame;
                // owning it by g keeps the Ford side-pairing convention.
                // The member list is inverse-closed, so every half-plane of
                // the Dirichlet intersection is inserted exactly once.
                Complex gc = mobius_apply(su11_matrix(g.inverse()), c);
                Complex w = mobius_apply(to_zero, gc);
                if (std::abs(w) < cfg.tolerance)
                    throw std::invalid_argument("build_dirichlet_domain: center fixed by " +
                                                g.to_string());
                Complex ctr = w / std::norm(w);
                double r = std::sqrt(1.0 / std::norm(w) - 1.0);
                region.insert_circle(ctr, r, idx);
            }
            d.shells_consumed = shell.m;
        }
        consumed_m = m_hi;
    };

    // Schedule phase: explicit norm bounds k_i when given, else k_1 from an
    // area-based diameter estimate with doubling. Half-planes are consumed
    // in shell chunks and the phase stops at the first compact region; the
    // exhaustive radius-R pass below completes the half-plane set.
    double diameter_estimate = 2.0 * std::acosh(1.0 + d.covolume / kPi);
    double k = 2.0 * std::cosh(2.0 * diameter_estimate);
    int max_steps = dcfg.schedule.empty() ? dcfg.max_schedule_steps : (int)dcfg.schedule.size();
    for (int step = 0; step < max_steps && !region.closed(); ++step) {
        if (!dcfg.schedule.empty())
            k = dcfg.schedule[(size_t)step];
        else if (step > 0)
            k *= 2;
        int64_t m_k = std::min((int64_t)std::floor(std::min(k - 2.0, 4e18) / 4.0),
                               cfg.max_shell_cap);  // ||g|| <= k  <=>  m <= (k-2)/4
        for (int64_t chunk = 1024; consumed_m < m_k && !region.closed();) {
            insert_up_to(std::min(consumed_m + chunk, m_k));
            chunk = std::min<int64_t>(chunk * 2, 1 << 22);
        }
        if (!region.closed() && m_k >= cfg.max_shell_cap)
            throw std::runtime_error("build_dirichlet_domain: shell cap hit before compactness");
    }
    if (!region.closed()) throw std::runtime_error("build_dirichlet_domain: schedule exhausted");
    d.closure_shell = d.shells_consumed;

    // R = 2 max(rho_n/2, reach) with rho_n the displacement realized by the
    // compact stage (norms convert to distances by ||g|| = 2 cosh rho); then
    // every element with rho(c, g c) <= R is taken and the area certified.
    double rho_n = std::acosh(1.0 + 2.0 * (double)consumed_m);  // = max rho(c, gc) consumed
    for (int deepen = 0; deepen <= dcfg.max_final_deepenings; ++deepen) {
        double reach = 0;
        for (const Arc& arc : region.arcs())
            reach = std::max(reach, hyperbolic_distance(Complex(0, 0), arc.start()));
        double R = std::max(rho_n, 2.0 * reach) * (deepen ? std::pow(1.5, deepen) : 1.0);
        int64_t m_R = R < 42.0 ? (int64_t)std::floor((std::cosh(R) - 1.0) / 2.0)
                               : cfg.max_shell_cap;  // rho(c, gc) <= R
        insert_up_to(std::min(m_R, cfg.max_shell_cap));
        HyperbolicPolygon poly{region.arcs()};
        d.area = polygon_area(poly);
        d.area_gap = std::abs(d.area - d.covolume) / d.covolume;
        if (d.area_gap <= cfg.certify_rel_tol) {
            d.certified = true;
            break;
        }
    }
    // the radius cutoff this build effectively applied
    d.epsilon_used = 1.0 / std::sqrt((double)std::max<int64_t>(1, d.shells_consumed));

    // map the polygon back into the requested frame
    d.polygon.arcs.clear();
    for (const Arc& arc : region.arcs()) {
        if (std::abs(c) < 1e-15) {
            d.polygon.arcs.push_back(arc);
            continue;
        }
        Complex s0 = mobius_apply(back, arc.start()), s1 = mobius_apply(back, arc.end());
        Arc mapped = geodesic_segment(s0, s1, arc.owner, cfg.tolerance);
        d.polygon.arcs.push_back(mapped);
    }
    d.stats.min_vertex_separation = region.min_vertex_separation();
    d.stats.degenerate_events = region.degenerate_events();
    detail::fill_generator_stats(d);
    return d;
}

// ---------------------------------------------------------------------------
// Exact word arithmetic over generators

// every word of length <= len over gens and their inverses keeps norm 1
inline bool words_keep_unit_norm(const std::vector<GroupElement>& gens, int len) {
    if (gens.empty()) return true;
    std::vector<ZQuat> alphabet;
    for (const GroupElement& g : gens) {
        alphabet.push_back(g.to_zquat());
        alphabet.push_back(g.inverse().to_zquat());
    }
    BigInt one(1);
    auto walk = [&](auto&& self, const ZQuat& w, int depth) -> bool {
        if (depth == 0) return true;
        for (const ZQuat& s : alphabet) {
            ZQuat prod = w * s;
            if (!(prod.norm() == one)) return false;
            if (!self(self, prod, depth - 1)) return false;
        }
        return true;
    };
    return walk(walk, ZQuat::one(gens[0].p(), gens[0].a()), len);
}

// target expressible as a word of length <= maxlen over gens (mod +-1),
// meet-in-the-middle over exact quaternions
inline bool expressible_as_word(const GroupElement& target, const std::vector<GroupElement>& gens,
                                int maxlen) {
    if (gens.empty()) return target.is_identity();
    int64_t p = gens[0].p(), a = gens[0].a();
    std::vector<ZQuat> alphabet;
    for (const GroupElement& g : gens) {
        alphabet.push_back(g.to_zquat());
        alphabet.push_back(g.inverse().to_zquat());
    }
    int half = (maxlen + 1) / 2;
    std::unordered_map<std::string, ZQuat> ball;
    std::vector<ZQuat> level{ZQuat::one(p, a)};
    ball.emplace(ZQuat::one(p, a).pm_canonical().key(), ZQuat::one(p, a));
    for (int l = 1; l <= half; ++l) {
        std::vector<ZQuat> next;
        for (const ZQuat& w : level)
            for (const ZQuat& s : alphabet) {
                ZQuat prod = (w * s);
                std::string key = prod.pm_canonical().key();
                if (ball.emplace(key, prod).second) next.push_back(prod);
            }
        level = std::move(next);
        if (ball.size() > 2000000) throw std::invalid_argument("expressible_as_word: ball too large");
    }
    ZQuat t = target.to_zquat();
    for (const auto& [key, u] : ball) {
        // u^{-1} t for unit-norm u; the canonical key absorbs the sign
        ZQuat rest = u.conj() * t;
        if (ball.count(rest.pm_canonical().key())) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Bound comparison

struct BoundReport {
    int64_t chalk_n_bound = 0;
    double chalk_a1_bound = 0;
    std::vector<double> chalk_chain_log10;
    double johansson_epsilon = 0;       // formula value from the covolume
    double johansson_norm_bound = 0;
    double epsilon_used = 0;            // the certified run's cutoff
    int exact_n_generators = 0;
    int64_t exact_max_x0 = 0;
    int64_t exact_max_norm = 0;
    double norm_ratio_over_exact = 0;  // johansson bound / exact max norm
    double chalk_n_ratio_over_exact = 0;
    // no generator circle has radius <= epsilon, for the two epsilons:
    bool formula_epsilon_sound = false;  // falsifiable data about the formula
    bool used_epsilon_sound = false;     // the run's own cutoff
};

inline BoundReport compare_bounds(const FordDomain& d, const BuildConfig& cfg = {}) {
    BoundReport r;
    ChalkBounds cb = chalk_bounds(d.p, d.a);
    r.chalk_n_bound = cb.n_bound;
    r.chalk_a1_bound = cb.a1_bound;
    r.chalk_chain_log10 = cb.chain_log10;
    double vol_for_eps = cfg.vol_norm == VolNorm::Hyperbolic ? d.covolume : d.covolume / (2.0 * kPi);
    EpsilonBound eb = johansson_epsilon(vol_for_eps, cfg.eps_k);
    r.johansson_epsilon = eb.epsilon;
    r.johansson_norm_bound = eb.norm_bound;
    r.epsilon_used = d.epsilon_used;
    r.exact_n_generators = d.stats.n_generators;
    r.exact_max_x0 = d.stats.max_x0;
    r.exact_max_norm = d.stats.max_norm;
    r.norm_ratio_over_exact = eb.norm_bound / (double)d.stats.max_norm;
    r.chalk_n_ratio_over_exact = (double)cb.n_bound / std::max(1, d.stats.n_generators);
    int64_t max_gen_m = 0;
    for (const GroupElement& g : d.generators) max_gen_m = std::max(max_gen_m, g.c_norm_sq());
    // radius 1/sqrt(m) > eps  <=>  m < 1/eps^2 (compared in shell units)
    r.formula_epsilon_sound = (double)max_gen_m < 1.0 / (eb.epsilon * eb.epsilon);
    r.used_epsilon_sound =
        d.epsilon_used > 0 &&
        (double)max_gen_m <= std::ceil(1.0 / (d.epsilon_used * d.epsilon_used));
    return r;
}

}  // namespace quatdom
