#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sta/errors.hpp"
#include "sta/shell.hpp"

#include <cstdio>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace sta;
using namespace sta::shell;

namespace {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const
    {
        for (std::size_t k = 0; k < header.size(); ++k)
            if (header[k] == name)
                return k;
        FAIL("missing column " << name);
        return 0;
    }
    double at(std::size_t row, const std::string& name) const { return std::stod(rows[row][col(name)]); }
    std::vector<double> column(const std::string& name) const
    {
        std::vector<double> v;
        const auto c = col(name);
        for (const auto& r : rows)
            v.push_back(std::stod(r[c]));
        return v;
    }
};

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    return out;
}

Csv parse_csv(const std::string& text)
{
    Csv csv;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    csv.header = split(line);
    while (std::getline(ss, line))
        csv.rows.push_back(split(line));
    return csv;
}

template <class F>
Csv run_csv(F&& f)
{
    std::ostringstream out;
    f(out);
    return parse_csv(out.str());
}

RunConfig atom_cfg(Scenario s)
{
    RunConfig c;
    c.scenario = s;
    c.dt = 2e-3;
    return c;
}

std::string config_error(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("scenario names round-trip")
{
    for (auto s : {Scenario::rap, Scenario::rap_cd, Scenario::rap_cd_approx, Scenario::cd_terms,
                   Scenario::oscillator, Scenario::check})
        CHECK(parse_scenario(scenario_name(s)) == s);
    CHECK(parse_scenario("rap-cd") == Scenario::rap_cd);
    CHECK_THROWS_AS(parse_scenario("rapcd"), ConfigError);
}

TEST_CASE("parse_config: strict")
{
    const auto cfg = parse_config(R"({"scenario": "cd-terms", "dt": 0.01, "atom": {"gamma_mhz": 0}})");
    CHECK(cfg.scenario == Scenario::cd_terms);
    CHECK(*cfg.dt == 0.01);
    CHECK(cfg.atom.gamma_mhz == 0.0);
    CHECK(cfg.atom.omega0_mhz == 100.0);

    CHECK(config_error(R"({"atom": {"gama_mhz": 2}})").find("gama_mhz") != std::string::npos);
    CHECK(config_error(R"({"windowfactor": 4})").find("windowfactor") != std::string::npos);
    CHECK(config_error(R"({"oscillator": {"tf_ms": "25"}})").find("tf_ms") != std::string::npos);
    CHECK_FALSE(config_error(R"({"dt": -1})").empty());
    CHECK_FALSE(config_error(R"({"oscillator": {"mass_kg": 0}})").empty());
    CHECK_FALSE(config_error(R"({"dt": 0.01,})").empty());
    CHECK_FALSE(config_error(R"([1, 2])").empty());
    CHECK_THROWS_AS(load_config("/nonexistent/sta.json"), ConfigError);
}

TEST_CASE("format_double")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(std::nan("")) == "nan");
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -1e-17, 7.9577471545947667, -2.5e-300, 1e22, 0.0}) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        CHECK(format_double(v) == buf);
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("rap: output shape and determinism")
{
    const auto cfg = atom_cfg(Scenario::rap);
    std::ostringstream a, b;
    run_rap(cfg, a);
    run_rap(cfg, b);
    CHECK(a.str() == b.str());

    const auto csv = parse_csv(a.str());
    CHECK(csv.header == std::vector<std::string>{"t_ns", "P1", "P2", "norm2", "adiab_ratio"});
    const double w = 5.0 / std::sqrt(std::pow(2 * M_PI, 2) * 0.01);
    CHECK(csv.at(0, "t_ns") == doctest::Approx(-w).epsilon(1e-14));
    CHECK(csv.at(csv.rows.size() - 1, "t_ns") == doctest::Approx(w).epsilon(1e-14));
    CHECK(csv.at(0, "P2") == 1.0);
    const double p1 = csv.at(csv.rows.size() - 1, "P1");
    CHECK(p1 > 0.3);
    CHECK(p1 < 0.8);

    // Step halving does not move the final population.
    auto fine = cfg;
    fine.dt = 1e-3;
    const auto csv_fine = run_csv([&](std::ostream& o) { run_rap(fine, o); });
    CHECK(std::abs(csv_fine.at(csv_fine.rows.size() - 1, "P1") - p1) < 1e-8);
}

TEST_CASE("rap: no driving means pure decay")
{
    auto cfg = atom_cfg(Scenario::rap);
    cfg.atom.omega0_mhz = 0.0;
    cfg.dt = 1e-2;
    const auto csv = run_csv([&](std::ostream& o) { run_rap(cfg, o); });
    const double gamma = 2 * M_PI * 0.002;
    const double t0 = csv.at(0, "t_ns");
    for (std::size_t k = 0; k < csv.rows.size(); k += 50) {
        const double t = csv.at(k, "t_ns");
        CHECK(csv.at(k, "P2") == doctest::Approx(std::exp(-gamma * (t - t0))).epsilon(1e-9));
        CHECK(csv.at(k, "P1") == 0.0);
    }
}

TEST_CASE("rap-cd: follows the + branch")
{
    const auto csv = run_csv([&](std::ostream& o) { run_rap_cd(atom_cfg(Scenario::rap_cd), false, o); });
    CHECK(csv.header.back() == "abs_c_minus");
    double leak = 0.0;
    for (double c : csv.column("abs_c_minus"))
        leak = std::max(leak, c);
    CHECK(leak < 1e-6);
    const auto last = csv.rows.size() - 1;
    CHECK(csv.at(last, "P1") > 0.85);
    CHECK(csv.at(last, "norm2") == doctest::Approx(csv.at(last, "P1") + csv.at(last, "P2")));

    auto herm = atom_cfg(Scenario::rap_cd);
    herm.atom.gamma_mhz = 0.0;
    const auto h = run_csv([&](std::ostream& o) { run_rap_cd(herm, false, o); });
    for (double n : h.column("norm2"))
        CHECK(n == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(h.at(h.rows.size() - 1, "P1") > 1.0 - 1e-6);
}

TEST_CASE("rap-cd-approx stays close to the exact driving")
{
    const auto cfg = atom_cfg(Scenario::rap_cd);
    const auto exact = run_csv([&](std::ostream& o) { run_rap_cd(cfg, false, o); });
    const auto approx = run_csv([&](std::ostream& o) { run_rap_cd(cfg, true, o); });
    REQUIRE(exact.rows.size() == approx.rows.size());
    double diff = 0.0;
    const auto a = exact.column("P1"), b = approx.column("P1");
    for (std::size_t k = 0; k < a.size(); ++k)
        diff = std::max(diff, std::abs(a[k] - b[k]));
    CHECK(diff > 0.0);
    CHECK(diff < 0.01);
}

TEST_CASE("cd-terms")
{
    auto cfg = atom_cfg(Scenario::cd_terms);
    cfg.dt = 1e-2;
    const auto csv = run_csv([&](std::ostream& o) { run_cd_terms(cfg, o); });
    CHECK(csv.header == std::vector<std::string>{"t_ns", "ReC_rad_per_ns", "ImC_rad_per_ns", "adiab_ratio"});
    const auto t = csv.column("t_ns");
    const auto re = csv.column("ReC_rad_per_ns");
    const auto im = csv.column("ImC_rad_per_ns");
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        max_re = std::max(max_re, std::abs(re[k]));
        max_im = std::max(max_im, std::abs(im[k]));
        if (std::abs(t[k]) < 1e-12) {
            CHECK(std::abs(re[k]) < 1e-15);
            CHECK(im[k] == doctest::Approx(0.015709).epsilon(1e-4));
        }
    }
    CHECK(max_im > max_re);
    CHECK(max_re > 0.0);

    cfg.atom.gamma_mhz = 0.0;
    const auto h = run_csv([&](std::ostream& o) { run_cd_terms(cfg, o); });
    for (double v : h.column("ReC_rad_per_ns"))
        CHECK(v == 0.0);
}

TEST_CASE("oscillator")
{
    RunConfig cfg;
    cfg.scenario = Scenario::oscillator;
    const auto csv = run_csv([&](std::ostream& o) { run_oscillator(cfg, o); });
    CHECK(csv.header.front() == "segment");
    const auto sp = cfg.oscillator.spec();

    std::size_t ramp_start = 0, post_start = 0;
    for (std::size_t k = 0; k < csv.rows.size(); ++k) {
        if (!ramp_start && csv.rows[k][0] == "ramp")
            ramp_start = k;
        if (!post_start && csv.rows[k][0] == "post")
            post_start = k;
    }
    REQUIRE(ramp_start > 0);
    REQUIRE(post_start > ramp_start);
    CHECK(csv.at(ramp_start, "t_s") == 0.0);
    CHECK(csv.at(ramp_start, "q_m") == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(csv.at(0, "q_m") == doctest::Approx(1e-6).epsilon(1e-12));

    const double e_over_w0 = csv.at(ramp_start, "E_over_omega_J_s");
    const double tf = csv.at(post_start - 1, "t_s");
    CHECK(tf == doctest::Approx(sp.tf).epsilon(1e-14));
    CHECK(csv.at(post_start - 1, "E_over_omega_J_s") == doctest::Approx(e_over_w0).epsilon(1e-6));
    CHECK(csv.at(post_start - 1, "rho") == doctest::Approx(10.0).epsilon(1e-10));
    CHECK(csv.at(post_start - 1, "E_J") == doctest::Approx(0.01 * csv.at(ramp_start, "E_J")).epsilon(1e-6));

    const auto q = csv.column("q_m"), qo = csv.column("q_oracle_m");
    double scale = 0.0, diff = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        scale = std::max(scale, std::abs(q[k]));
        diff = std::max(diff, std::abs(q[k] - qo[k]));
    }
    CHECK(diff / scale < 1e-6);

    cfg.oscillator.q0_um = 0.0;
    const auto rest = run_csv([&](std::ostream& o) { run_oscillator(cfg, o); });
    for (double v : rest.column("q_m"))
        CHECK(v == 0.0);
}

TEST_CASE("check: passes and catches a corrupted construction")
{
    RunConfig cfg;
    cfg.scenario = Scenario::check;
    const auto report = run_check(cfg);
    CHECK(report.all_passed());
    CHECK(report.items.size() >= 10);
    std::ostringstream text;
    report.print(text);
    CHECK(text.str().find("FAIL") == std::string::npos);

    CheckOptions bad;
    bad.h_a = [](const pulse::PulseSchedule& s, double t) {
        return ctrlh::h_a0(s, t) - ctrlh::h_a1(s, t);
    };
    const auto broken = run_check(cfg, bad);
    CHECK_FALSE(broken.all_passed());
    bool transitionless_failed = false;
    for (const auto& item : broken.items)
        if (item.name.find("transitionless") != std::string::npos && !item.passed)
            transitionless_failed = true;
    CHECK(transitionless_failed);

    // Tightened thresholds fail but still report the measured residuals.
    cfg.tolerance_scale = 1e-30;
    const auto tight = run_check(cfg);
    CHECK_FALSE(tight.all_passed());
    std::ostringstream tight_text;
    tight.print(tight_text);
    CHECK(tight_text.str().find("e-") != std::string::npos);
}

TEST_CASE("run: exit codes")
{
    std::ostringstream out, err;
    RunConfig cfg;
    cfg.scenario = Scenario::cd_terms;
    cfg.dt = 0.05;
    CHECK(run(cfg, out, err) == kExitOk);

    cfg.dt = -1.0;
    CHECK(run(cfg, out, err) == kExitConfig);

    // Coalescing eigenvalues at the pulse centre: 2 Omega0 = Gamma.
    cfg.dt = 0.05;
    cfg.atom.gamma_mhz = 200.0;
    cfg.scenario = Scenario::rap_cd;
    std::ostringstream err2;
    CHECK(run(cfg, out, err2) == kExitNumerical);
    CHECK_FALSE(err2.str().empty());

    cfg = {};
    cfg.scenario = Scenario::check;
    cfg.tolerance_scale = 1e-30;
    CHECK(run(cfg, out, err) == kExitCheckFailed);

    cfg = {};
    cfg.output = "/nonexistent/dir/out.csv";
    CHECK(run(cfg, out, err) == kExitConfig);
}
