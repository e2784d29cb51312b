// quatdom: Ford/Dirichlet fundamental domains and generators for the unit
// groups Gamma_{p,a} of x0^2 - a x1^2 - p x2^2 + a p x3^2 = 1.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quatdom/cli_reports.hpp"

using namespace quatdom;

namespace {

double env_tolerance() {
    if (const char* s = std::getenv("QUATDOM_TOL")) {
        double v = std::atof(s);
        if (v > 0) return v;
    }
    return kDefaultTolerance;
}

void print_invariants(int64_t p, int64_t a) {
    QuatOrder o = canonical_order(p, a);
    const QuatAlgebra& h = o.algebra();
    Covolume cv = covolume(o);
    std::printf("pair            (p, a) = (%lld, %lld)\n", (long long)p, (long long)a);
    std::printf("algebra         (a, b / Q) with i^2 = %lld, j^2 = %lld\n", (long long)h.a(),
                (long long)h.b());
    std::string places;
    for (const Place& v : h.ramified_places()) places += v.to_string() + " ";
    std::printf("ramified places %s\n", places.c_str());
    std::printf("d_H             %lld\n", (long long)h.discriminant());
    std::printf("d(O)            %s\n", o.reduced_discriminant().to_string().c_str());
    std::printf("ternary form    %s\n", o.ternary_form().to_string().c_str());
    for (const LocalInvariant& li : cv.locals) {
        std::printf("  q = %-4lld e(O_q) = %+d   %-8s [Z_q*:n(O_q*)] = %d   [M_q^1:O_q^1] = %s\n",
                    (long long)li.q, li.eichler_invariant, li.split ? "split" : "ramified",
                    li.norm_index, li.unit_index.to_string().c_str());
    }
    std::printf("[M^1 : Gamma]   %s\n", cv.unit_group_index.to_string().c_str());
    std::printf("covolume        %s * pi  =  %.9f   (normalized %s)\n",
                cv.area_over_pi.to_string().c_str(), cv.area(), cv.normalized.to_string().c_str());
}

void print_domain_report(const FordDomain& d, const BuildConfig& cfg) {
    std::printf("\nmethod report\n");
    std::printf("  area            %.12f\n", d.area);
    std::printf("  covolume        %.12f  (%s * pi)\n", d.covolume,
                d.covolume_over_pi.to_string().c_str());
    std::printf("  relative gap    %.3e\n", d.area_gap);
    std::printf("  certified       %s\n", d.certified ? "yes" : "NO");
    std::printf("  sides           %d\n", d.stats.n_sides);
    std::printf("  generators      %d side-pairing classes (%zu distinct owners)\n",
                d.stats.n_generators, d.generators.size());
    std::printf("  elliptic sides  %d\n", d.stats.elliptic_vertex_count);
    std::printf("  closure shell   %lld, cutoff shell %lld, epsilon %.6g\n",
                (long long)d.closure_shell, (long long)d.shells_consumed, d.epsilon_used);
    std::printf("  closed at first covering: %s\n",
                d.certified_at_closure ? "fundamental already" : "trimmed afterwards");
    std::printf("  conditioning    min vertex separation %.3e, degenerate events %d\n",
                d.stats.min_vertex_separation, d.stats.degenerate_events);
    std::printf("\ngenerators (x0, x1, x2, x3), trace, |C|^2:\n");
    for (const GroupElement& g : d.generators)
        std::printf("  %-22s  trace %-6lld  m %lld\n", g.to_string().c_str(),
                    (long long)g.trace(), (long long)g.c_norm_sq());

    BoundReport br = compare_bounds(d, cfg);
    std::printf("\nbounds\n");
    std::printf("  exact: generators %d, max |x0| %lld, max ||g|| %lld\n", br.exact_n_generators,
                (long long)br.exact_max_x0, (long long)br.exact_max_norm);
    std::printf("  chalk: N <= %lld, ||A_1|| < %.4f, chain log10 tail %.3g\n",
                (long long)br.chalk_n_bound, br.chalk_a1_bound, br.chalk_chain_log10.back());
    std::printf("  epsilon bound: formula eps = %.6g (sound: %s), run cutoff eps = %.6g (sound: %s)\n",
                br.johansson_epsilon, br.formula_epsilon_sound ? "yes" : "NO", br.epsilon_used,
                br.used_epsilon_sound ? "yes" : "NO");
    std::printf("  ratios: norm bound / exact = %.3f, chalk N / exact = %.3f\n",
                br.norm_ratio_over_exact, br.chalk_n_ratio_over_exact);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ford fundamental domains and generators for Gamma_{p,a}"};
    app.require_subcommand(1);

    int64_t p = 0, a = 0;
    double eps_k = 3.0, tol = env_tolerance();
    std::string svg_path, json_path, method = "ford", vol_norm = "hyperbolic";

    auto add_pair_flags = [&](CLI::App* cmd) {
        cmd->add_option("-p,--prime", p, "odd prime p")->required();
        cmd->add_option("-a,--nonresidue", a, "quadratic nonresidue a, 1 < a < p")->required();
    };
    auto add_build_flags = [&](CLI::App* cmd) {
        cmd->add_option("--eps-k", eps_k, "k in the epsilon bound (k > 2)");
        cmd->add_option("--tol", tol, "geometric tolerance");
        cmd->add_option("--vol-norm", vol_norm, "hyperbolic|arithmetic")
            ->check(CLI::IsMember({"hyperbolic", "arithmetic"}));
    };

    CLI::App* analyze = app.add_subcommand("analyze", "build and certify one fundamental domain");
    add_pair_flags(analyze);
    add_build_flags(analyze);
    analyze->add_option("--svg", svg_path, "write an SVG rendering");
    analyze->add_option("--json", json_path, "write a JSON generator dump");
    analyze->add_option("--method", method, "ford|dirichlet")
        ->check(CLI::IsMember({"ford", "dirichlet"}));

    CLI::App* invariants = app.add_subcommand("invariants", "arithmetic invariants only (no build)");
    add_pair_flags(invariants);

    CLI::App* bounds = app.add_subcommand("bounds", "exact generator stats vs theoretical bounds");
    add_pair_flags(bounds);
    add_build_flags(bounds);

    CLI::App* sweep = app.add_subcommand("sweep", "build every valid pair and emit a CSV table");
    int64_t p_max = 37;
    int jobs = 1;
    bool timings = false;
    std::string pairs_file, csv_path;
    sweep->add_option("--p-max", p_max, "largest prime p (default 37)");
    sweep->add_option("--pairs", pairs_file, "file of 'p a' lines overriding --p-max");
    sweep->add_option("--csv", csv_path, "output CSV path (default stdout)");
    sweep->add_option("--jobs", jobs, "parallel workers");
    sweep->add_flag("--timings", timings, "record wall-clock runtime_ms (breaks rerun determinism)");
    add_build_flags(sweep);

    CLI11_PARSE(app, argc, argv);

    BuildConfig cfg;
    cfg.eps_k = eps_k;
    cfg.tolerance = tol;
    cfg.vol_norm = vol_norm == "arithmetic" ? VolNorm::Arithmetic : VolNorm::Hyperbolic;

    try {
        if (analyze->parsed()) {
            require_valid_pair(p, a);
            print_invariants(p, a);
            FordDomain d;
            if (method == "dirichlet") {
                DirichletConfig dc;
                dc.base = cfg;
                d = build_dirichlet_domain(p, a, dc);
            } else {
                d = build_ford_domain(p, a, cfg);
            }
            print_domain_report(d, cfg);
            if (!svg_path.empty()) render_svg_file(d, svg_path);
            if (!json_path.empty()) write_generators_json(d, json_path);
            return d.certified ? 0 : 2;
        }
        if (invariants->parsed()) {
            require_valid_pair(p, a);
            print_invariants(p, a);
            return 0;
        }
        if (bounds->parsed()) {
            require_valid_pair(p, a);
            FordDomain d = build_ford_domain(p, a, cfg);
            BoundReport br = compare_bounds(d, cfg);
            std::printf("exact:     generators %d, max |x0| %lld, max norm %lld\n",
                        br.exact_n_generators, (long long)br.exact_max_x0,
                        (long long)br.exact_max_norm);
            std::printf("chalk:     N <= %lld, ||A_1|| < %.4f\n", (long long)br.chalk_n_bound,
                        br.chalk_a1_bound);
            std::printf("           quintic chain (log10):");
            for (size_t i = 0; i < br.chalk_chain_log10.size() && i < 6; ++i)
                std::printf(" %.3g", br.chalk_chain_log10[i]);
            if (br.chalk_chain_log10.size() > 6) std::printf(" ...");
            std::printf("\n");
            std::printf("epsilon:   formula %.6g (norm cutoff %.6g, sound: %s); run cutoff %.6g "
                        "(sound: %s)\n",
                        br.johansson_epsilon, br.johansson_norm_bound,
                        br.formula_epsilon_sound ? "yes" : "NO", br.epsilon_used,
                        br.used_epsilon_sound ? "yes" : "NO");
            std::printf("log-scale: log10(norm bound / exact) = %.4f, log10(chalk N / exact) = %.4f\n",
                        std::log10(br.norm_ratio_over_exact), std::log10(br.chalk_n_ratio_over_exact));
            return 0;
        }
        if (sweep->parsed()) {
            SweepOptions opt;
            opt.p_max = p_max;
            opt.jobs = jobs;
            opt.timings = timings;
            opt.build = cfg;
            if (!pairs_file.empty()) {
                std::ifstream f(pairs_file);
                if (!f) throw std::runtime_error("cannot open pairs file " + pairs_file);
                int64_t pp, aa;
                while (f >> pp >> aa) {
                    require_valid_pair(pp, aa);
                    opt.pairs.push_back({pp, aa});
                }
            }
            std::vector<SweepRow> rows = run_sweep(opt);
            if (csv_path.empty())
                write_csv(rows, std::cout);
            else
                write_csv_file(rows, csv_path);
            for (const SweepRow& r : rows)
                if (!r.certified)
                    std::fprintf(stderr, "warning: (%lld,%lld) not certified\n", (long long)r.p,
                                 (long long)r.a);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
