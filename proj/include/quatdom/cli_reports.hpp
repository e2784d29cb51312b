#pragma once

// Reporting and orchestration: sweep rows and CSV, JSON generator dumps,
// SVG renderings of domains, and the parallel pair sweep.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "quatdom/domain_builder.hpp"

namespace quatdom {

struct SweepRow {
    int64_t p = 0, a = 0, d_H = 0;
    BigInt d_O;
    int n_generators = 0;
    int64_t max_x0 = 0;
    int64_t max_norm = 0;
    Rational covolume_over_pi;
    double area = 0;
    double epsilon_used = 0;
    int64_t shells_consumed = 0;
    bool certified = false;
    int elliptic_vertices = 0;
    int64_t runtime_ms = 0;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// exact rationals as "n/d" so nothing is lost in the table
inline std::string fmt_rational(const Rational& r) {
    return r.num().to_string() + "/" + r.den().to_string();
}

}  // namespace detail

inline std::string csv_header() {
    return "p,a,d_H,d_O,n_generators,max_x0,max_norm,covolume_over_pi,area,"
           "epsilon_used,shells_consumed,certified,elliptic_vertices,runtime_ms";
}

inline std::string to_csv_row(const SweepRow& r) {
    std::ostringstream os;
    os << r.p << ',' << r.a << ',' << r.d_H << ',' << r.d_O.to_string() << ',' << r.n_generators
       << ',' << r.max_x0 << ',' << r.max_norm << ',' << detail::fmt_rational(r.covolume_over_pi)
       << ',' << detail::fmt_double(r.area) << ',' << detail::fmt_double(r.epsilon_used) << ','
       << r.shells_consumed << ',' << (r.certified ? "true" : "false") << ','
       << r.elliptic_vertices << ',' << r.runtime_ms;
    return os.str();
}

inline SweepRow sweep_row_from(const FordDomain& d, int64_t runtime_ms) {
    SweepRow r;
    r.p = d.p;
    r.a = d.a;
    r.d_H = d.covolume_detail.d_H;
    r.d_O = d.covolume_detail.d_O;
    r.n_generators = d.stats.n_generators;
    r.max_x0 = d.stats.max_x0;
    r.max_norm = d.stats.max_norm;
    r.covolume_over_pi = d.covolume_over_pi;
    r.area = d.area;
    r.epsilon_used = d.epsilon_used;
    r.shells_consumed = d.shells_consumed;
    r.certified = d.certified;
    r.elliptic_vertices = d.stats.elliptic_vertex_count;
    r.runtime_ms = runtime_ms;
    return r;
}

// all valid (p, a), ordered by (p, a)
inline std::vector<std::pair<int64_t, int64_t>> default_pairs(int64_t p_max) {
    std::vector<std::pair<int64_t, int64_t>> pairs;
    for (int64_t p = 3; p <= p_max; p += 2) {
        if (!is_prime(p)) continue;
        for (int64_t a = 2; a < p; ++a)
            if (is_valid_pair(p, a)) pairs.push_back({p, a});
    }
    return pairs;
}

struct SweepOptions {
    std::vector<std::pair<int64_t, int64_t>> pairs;  // empty: use p_max
    int64_t p_max = 37;
    int jobs = 1;
    bool timings = false;  // off by default so reruns are byte-identical
    BuildConfig build;
};

// one row per pair, deterministic (p, a) order regardless of scheduling;
// per-pair failures land in the row as certified=false, never abort the sweep
inline std::vector<SweepRow> run_sweep(const SweepOptions& opt) {
    std::vector<std::pair<int64_t, int64_t>> pairs =
        opt.pairs.empty() ? default_pairs(opt.p_max) : opt.pairs;
    std::vector<SweepRow> rows(pairs.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t k = next.fetch_add(1);
            if (k >= pairs.size()) return;
            auto [p, a] = pairs[k];
            auto t0 = std::chrono::steady_clock::now();
            SweepRow row;
            try {
                FordDomain d = build_ford_domain(p, a, opt.build);
                int64_t ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
                row = sweep_row_from(d, opt.timings ? ms : 0);
            } catch (const std::exception&) {
                row.p = p;
                row.a = a;
                row.certified = false;
            }
            rows[k] = std::move(row);
        }
    };
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return rows;
}

inline void write_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << csv_header() << '\n';
    for (const SweepRow& r : rows) os << to_csv_row(r) << '\n';
}

inline void write_csv_file(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    write_csv(rows, f);
}

// ---------------------------------------------------------------------------
// JSON generator dump

inline nlohmann::json generators_json(const FordDomain& d) {
    nlohmann::json j;
    j["p"] = d.p;
    j["a"] = d.a;
    nlohmann::json gens = nlohmann::json::array();
    for (const GroupElement& g : d.generators)
        gens.push_back({g.x0(), g.x1(), g.x2(), g.x3()});
    j["generators"] = gens;
    j["area"] = d.area;
    j["covolume"] = detail::fmt_rational(d.covolume_over_pi) + " * pi";
    j["certified"] = d.certified;
    return j;
}

inline void write_generators_json(const FordDomain& d, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_generators_json: cannot open " + path);
    f << generators_json(d).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// SVG rendering

namespace detail {

inline std::string svg_pt(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f %.6f", z.real(), z.imag());
    return buf;
}

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace detail

// Unit circle, every consumed isometric circle (thin), the boundary path
// (thick, closed for certified domains), cone points of elliptic sides,
// and a small legend.
inline void render_svg(const FordDomain& d, std::ostream& os) {
    using detail::svg_num;
    using detail::svg_pt;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
          "viewBox=\"-1.15 -1.15 2.3 2.3\">\n";
    os << "<g transform=\"scale(1,-1)\">\n";
    os << "<circle class=\"unit\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#404040\" "
          "stroke-width=\"0.004\"/>\n";
    for (const GroupElement& g : d.elements) {
        auto ic = isometric_circle(g);
        os << "<circle class=\"isocircle\" cx=\"" << svg_num(ic->center.real()) << "\" cy=\""
           << svg_num(ic->center.imag()) << "\" r=\"" << svg_num(ic->radius)
           << "\" fill=\"none\" stroke=\"#9ecae1\" stroke-width=\"0.0012\"/>\n";
    }
    if (!d.polygon.arcs.empty()) {
        std::ostringstream path;
        path << "M " << svg_pt(d.polygon.arcs.front().start());
        for (const Arc& arc : d.polygon.arcs) {
            if (arc.is_line) {
                path << " L " << svg_pt(arc.end());
            } else {
                int large = std::abs(arc.dtheta) > kPi ? 1 : 0;
                int sweep = arc.dtheta > 0 ? 1 : 0;
                path << " A " << svg_num(arc.radius) << " " << svg_num(arc.radius) << " 0 "
                     << large << " " << sweep << " " << svg_pt(arc.end());
            }
        }
        bool closed = d.polygon.chain_closes() && !d.polygon.has_free_boundary();
        if (closed) path << " Z";
        os << "<path class=\"boundary\" d=\"" << path.str()
           << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"0.006\"/>\n";
    }
    for (const GroupElement& g : d.generators) {
        if (!g.is_torsion()) continue;
        auto ic = isometric_circle(g);
        Complex cone = ic->center * (1.0 - ic->radius / std::abs(ic->center));
        os << "<circle class=\"conepoint\" cx=\"" << svg_num(cone.real()) << "\" cy=\""
           << svg_num(cone.imag()) << "\" r=\"0.012\" fill=\"#2ca02c\"/>\n";
    }
    os << "</g>\n";
    os << "<text x=\"-1.12\" y=\"-1.08\" font-size=\"0.05\" font-family=\"monospace\">(p,a)=("
       << d.p << "," << d.a << ")  area=" << svg_num(d.area)
       << "  covolume=" << detail::fmt_rational(d.covolume_over_pi) << "*pi  "
       << (d.certified ? "certified" : "NOT certified") << "</text>\n";
    os << "</svg>\n";
}

inline void render_svg_file(const FordDomain& d, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("render_svg: cannot open " + path);
    render_svg(d, f);
}

}  // namespace quatdom
