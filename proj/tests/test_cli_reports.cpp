#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "quatdom/cli_reports.hpp"

using namespace quatdom;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("default pair list") {
    auto pairs = default_pairs(7);
    std::vector<std::pair<int64_t, int64_t>> expect{{3, 2}, {5, 2}, {5, 3}, {7, 3}, {7, 5}, {7, 6}};
    CHECK(pairs == expect);
    for (auto [p, a] : default_pairs(17)) CHECK(is_valid_pair(p, a));
    CHECK(default_pairs(17).size() == 25);  // sum over p of nonresidues in (1, p)
    CHECK(default_pairs(2).empty());
}

TEST_CASE("csv schema and numeric round trip") {
    SweepOptions opt;
    opt.pairs = {{3, 2}, {5, 2}, {5, 3}};
    std::vector<SweepRow> rows = run_sweep(opt);
    REQUIRE(rows.size() == 3);
    for (const SweepRow& r : rows) CHECK(r.certified);

    std::ostringstream os;
    write_csv(rows, os);
    std::vector<std::string> lines = split(os.str(), '\n');
    REQUIRE(lines.size() == 5);  // header + 3 rows + trailing empty
    CHECK(lines[0] == csv_header());
    CHECK(split(lines[0], ',').size() == 14);
    for (int k = 1; k <= 3; ++k) {
        auto cols = split(lines[k], ',');
        REQUIRE(cols.size() == 14);
        const SweepRow& r = rows[k - 1];
        CHECK(std::stoll(cols[0]) == r.p);
        CHECK(std::stoll(cols[1]) == r.a);
        CHECK(std::stoll(cols[2]) == r.d_H);
        CHECK(BigInt(cols[3]) == r.d_O);
        CHECK(std::stoi(cols[4]) == r.n_generators);
        CHECK(std::stoll(cols[5]) == r.max_x0);
        CHECK(std::stoll(cols[6]) == r.max_norm);
        auto nd = split(cols[7], '/');
        REQUIRE(nd.size() == 2);
        CHECK(Rational(BigInt(nd[0]), BigInt(nd[1])) == r.covolume_over_pi);
        // 12 significant digits: parse-print is stable and faithful to 1e-11
        CHECK(detail::fmt_double(std::stod(cols[8])) == cols[8]);
        CHECK(std::stod(cols[8]) == doctest::Approx(r.area).epsilon(1e-11));
        CHECK(detail::fmt_double(std::stod(cols[9])) == cols[9]);
        CHECK(std::stod(cols[9]) == doctest::Approx(r.epsilon_used).epsilon(1e-11));
        CHECK(std::stoll(cols[10]) == r.shells_consumed);
        CHECK(cols[11] == "true");
        CHECK(std::stoi(cols[12]) == r.elliptic_vertices);
        CHECK(cols[13] == "0");  // timings off by default
    }

    // rerun determinism at the library level
    std::ostringstream os2;
    write_csv(run_sweep(opt), os2);
    CHECK(os.str() == os2.str());

    // empty pair set: header only
    SweepOptions none;
    none.p_max = 2;
    std::ostringstream os3;
    write_csv(run_sweep(none), os3);
    CHECK(os3.str() == csv_header() + "\n");
}

TEST_CASE("sweep runs pairs in parallel with identical output") {
    SweepOptions serial, parallel;
    serial.pairs = parallel.pairs = {{3, 2}, {5, 2}, {5, 3}, {7, 3}};
    parallel.jobs = 2;
    std::ostringstream a, b;
    write_csv(run_sweep(serial), a);
    write_csv(run_sweep(parallel), b);
    CHECK(a.str() == b.str());
}

TEST_CASE("json generator dump schema") {
    FordDomain d = build_ford_domain(5, 2);
    nlohmann::json j = generators_json(d);
    CHECK(j["p"] == 5);
    CHECK(j["a"] == 2);
    CHECK(j["certified"] == true);
    CHECK(j["area"].get<double>() == doctest::Approx(8.0 * kPi));
    std::string cov = j["covolume"].get<std::string>();
    CHECK(cov == "8/1 * pi");
    REQUIRE(j["generators"].is_array());
    REQUIRE(j["generators"].size() == d.generators.size());
    for (const auto& t : j["generators"]) {
        REQUIRE(t.size() == 4);
        int64_t x0 = t[0], x1 = t[1], x2 = t[2], x3 = t[3];
        CHECK(x0 * x0 - 2 * x1 * x1 - 5 * x2 * x2 + 10 * x3 * x3 == 1);
    }
    // round trip through the serializer
    nlohmann::json j2 = nlohmann::json::parse(j.dump(2));
    CHECK(j2 == j);
}

TEST_CASE("svg rendering is well formed and complete") {
    FordDomain d = build_ford_domain(3, 2);
    std::ostringstream os;
    render_svg(d, os);
    std::string svg = os.str();

    // single root element
    size_t pos = 0, svg_open = 0;
    while ((pos = svg.find("<svg", pos)) != std::string::npos) {
        ++svg_open;
        pos += 4;
    }
    CHECK(svg_open == 1);
    CHECK(svg.find("</svg>") == svg.size() - 7);

    // one thin circle per consumed element
    size_t count = 0;
    pos = 0;
    while ((pos = svg.find("class=\"isocircle\"", pos)) != std::string::npos) {
        ++count;
        pos += 10;
    }
    CHECK(count == d.elements.size());

    // boundary path closes: starts with M x y, ends with Z, and the last arc
    // target returns to the start within print precision
    size_t dpos = svg.find("class=\"boundary\" d=\"");
    REQUIRE(dpos != std::string::npos);
    size_t dstart = svg.find("d=\"", dpos) + 3;
    size_t dend = svg.find('"', dstart);
    std::string path = svg.substr(dstart, dend - dstart);
    REQUIRE(path.substr(0, 2) == "M ");
    REQUIRE(path.substr(path.size() - 2) == " Z");
    std::istringstream ps(path.substr(2));
    double mx, my;
    ps >> mx >> my;
    // walk to the final coordinate pair before Z
    std::vector<std::string> toks = split(path, ' ');
    REQUIRE(toks.size() >= 4);
    double lx = std::stod(toks[toks.size() - 3]);
    double ly = std::stod(toks[toks.size() - 2]);
    CHECK(std::abs(mx - lx) < 2e-6);
    CHECK(std::abs(my - ly) < 2e-6);

    // elliptic cone points are marked for (3,2)
    CHECK(svg.find("class=\"conepoint\"") != std::string::npos);

    // uncertified/partial domains still render, without the Z closure
    BuildConfig cfg;
    cfg.max_shell_cap = 3;
    FordDomain partial = build_ford_domain(3, 2, cfg);
    REQUIRE(!partial.certified);
    std::ostringstream os2;
    render_svg(partial, os2);
    std::string svg2 = os2.str();
    size_t d2 = svg2.find("class=\"boundary\" d=\"");
    REQUIRE(d2 != std::string::npos);
    size_t s2 = svg2.find("d=\"", d2) + 3;
    std::string path2 = svg2.substr(s2, svg2.find('"', s2) - s2);
    CHECK(path2.substr(path2.size() - 2) != " Z");
}
