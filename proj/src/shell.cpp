#include "sta/shell.hpp"

#include "sta/errors.hpp"
#include "sta/prop.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace sta::shell {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double number_at(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw ConfigError("config: '" + path + "' must be a number");
    return v.get<double>();
}

void require_object(const json& v, const std::string& path)
{
    if (!v.is_object())
        throw ConfigError("config: '" + path + "' must be an object");
}

template <typename Section>
void parse_section(const json& obj, const std::string& path, Section& section,
                   const std::map<std::string, double Section::*>& fields)
{
    require_object(obj, path);
    for (const auto& [key, value] : obj.items()) {
        const auto it = fields.find(key);
        if (it == fields.end())
            throw ConfigError("config: unknown key '" + path + "." + key + "'");
        section.*(it->second) = number_at(value, path + "." + key);
    }
}

void write_row(std::ostream& out, std::initializer_list<double> values)
{
    bool first = true;
    for (double v : values) {
        if (!first)
            out << ',';
        out << format_double(v);
        first = false;
    }
    out << '\n';
}

pulse::PulseSchedule atom_schedule(const RunConfig& cfg)
{
    return pulse::chirped_gaussian(cfg.atom.params(), cfg.window_factor);
}

std::vector<double> atom_grid(const RunConfig& cfg, const pulse::PulseSchedule& s)
{
    return prop::grid_with_step(s.t_start, s.t_end, cfg.atom_dt_ns());
}

} // namespace

Scenario parse_scenario(std::string_view name)
{
    static const std::map<std::string_view, Scenario> names = {
        {"rap", Scenario::rap},           {"rap-cd", Scenario::rap_cd},
        {"rap-cd-approx", Scenario::rap_cd_approx}, {"cd-terms", Scenario::cd_terms},
        {"oscillator", Scenario::oscillator}, {"check", Scenario::check}};
    const auto it = names.find(name);
    if (it == names.end())
        throw ConfigError("unknown scenario '" + std::string(name) + "'");
    return it->second;
}

std::string_view scenario_name(Scenario s)
{
    switch (s) {
    case Scenario::rap: return "rap";
    case Scenario::rap_cd: return "rap-cd";
    case Scenario::rap_cd_approx: return "rap-cd-approx";
    case Scenario::cd_terms: return "cd-terms";
    case Scenario::oscillator: return "oscillator";
    case Scenario::check: return "check";
    }
    return "?";
}

pulse::ChirpedGaussianParams AtomConfig::params() const
{
    return {pulse::mhz_to_rad_per_ns(omega0_mhz), pulse::ghz2_to_per_ns2(a_ghz2), pulse::ghz2_to_per_ns2(b_ghz2),
            pulse::mhz_to_rad_per_ns(gamma_mhz)};
}

ermakov::ExpansionSpec OscillatorConfig::spec() const
{
    // um/ms == mm/s
    return {kTwoPi * omega0_hz, kTwoPi * omegaf_hz, tf_ms * 1e-3, mass_kg, q0_um * 1e-6, v0_um_per_ms * 1e-3};
}

void RunConfig::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("config: '") + name + "' must be positive");
    };
    auto non_negative = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("config: '") + name + "' must be non-negative");
    };
    if (dt)
        positive(*dt, "dt");
    positive(window_factor, "window_factor");
    positive(tolerance_scale, "tolerance_scale");
    non_negative(atom.gamma_mhz, "atom.gamma_mhz");
    non_negative(atom.omega0_mhz, "atom.omega0_mhz");
    positive(atom.a_ghz2, "atom.a_ghz2");
    if (!std::isfinite(atom.b_ghz2))
        throw ConfigError("config: 'atom.b_ghz2' must be finite");
    positive(oscillator.omega0_hz, "oscillator.omega0_hz");
    positive(oscillator.omegaf_hz, "oscillator.omegaf_hz");
    positive(oscillator.tf_ms, "oscillator.tf_ms");
    positive(oscillator.mass_kg, "oscillator.mass_kg");
    if (!std::isfinite(oscillator.q0_um) || !std::isfinite(oscillator.v0_um_per_ms))
        throw ConfigError("config: oscillator initial conditions must be finite");
}

RunConfig parse_config(std::string_view json_text, RunConfig cfg)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    require_object(doc, "<root>");
    for (const auto& [key, value] : doc.items()) {
        if (key == "scenario") {
            if (!value.is_string())
                throw ConfigError("config: 'scenario' must be a string");
            cfg.scenario = parse_scenario(value.get<std::string>());
        } else if (key == "output") {
            if (!value.is_string())
                throw ConfigError("config: 'output' must be a string");
            cfg.output = value.get<std::string>();
        } else if (key == "dt") {
            cfg.dt = number_at(value, key);
        } else if (key == "window_factor") {
            cfg.window_factor = number_at(value, key);
        } else if (key == "tolerance_scale") {
            cfg.tolerance_scale = number_at(value, key);
        } else if (key == "approx") {
            if (!value.is_boolean())
                throw ConfigError("config: 'approx' must be a boolean");
            cfg.approx = value.get<bool>();
        } else if (key == "atom") {
            parse_section<AtomConfig>(value, key, cfg.atom,
                                      {{"gamma_mhz", &AtomConfig::gamma_mhz},
                                       {"omega0_mhz", &AtomConfig::omega0_mhz},
                                       {"a_ghz2", &AtomConfig::a_ghz2},
                                       {"b_ghz2", &AtomConfig::b_ghz2}});
        } else if (key == "oscillator") {
            parse_section<OscillatorConfig>(value, key, cfg.oscillator,
                                            {{"omega0_hz", &OscillatorConfig::omega0_hz},
                                             {"omegaf_hz", &OscillatorConfig::omegaf_hz},
                                             {"tf_ms", &OscillatorConfig::tf_ms},
                                             {"mass_kg", &OscillatorConfig::mass_kg},
                                             {"q0_um", &OscillatorConfig::q0_um},
                                             {"v0_um_per_ms", &OscillatorConfig::v0_um_per_ms}});
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void run_rap(const RunConfig& cfg, std::ostream& out)
{
    const auto s = atom_schedule(cfg);
    const auto grid = atom_grid(cfg, s);
    const auto traj = prop::propagate([&](double t) { return ctrlh::h_a0(s, t); }, {0.0, 1.0}, grid);
    out << "t_ns,P1,P2,norm2,adiab_ratio\n";
    for (std::size_t k = 0; k < traj.size(); ++k)
        write_row(out, {grid[k], traj.p1(k), traj.p2(k), traj.norm2(k), pulse::adiabaticity_ratio(s, grid[k])});
}

void run_rap_cd(const RunConfig& cfg, bool approx, std::ostream& out)
{
    const auto s = atom_schedule(cfg);
    const auto grid = atom_grid(cfg, s);
    const auto alpha = ctrlh::mixing_angle_trajectory(s, grid);
    const ComplexVec2 psi0 = ctrlh::adiabatic_state(ctrlh::Branch::plus, alpha.front().alpha);
    const auto traj = approx ? prop::propagate([&](double t) { return ctrlh::h_a_approx(s, t); }, psi0, grid)
                             : prop::propagate([&](double t) { return ctrlh::h_a(s, t); }, psi0, grid);
    out << "t_ns,P1,P2,norm2,abs_c_minus\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const cplx c_minus = inner(ctrlh::adiabatic_dual(ctrlh::Branch::minus, alpha[k].alpha), traj.states[k]);
        write_row(out, {grid[k], traj.p1(k), traj.p2(k), traj.norm2(k), std::abs(c_minus)});
    }
}

void run_cd_terms(const RunConfig& cfg, std::ostream& out)
{
    const auto s = atom_schedule(cfg);
    const auto grid = atom_grid(cfg, s);
    out << "t_ns,ReC_rad_per_ns,ImC_rad_per_ns,adiab_ratio\n";
    for (double t : grid) {
        const cplx c = ctrlh::cd_coupling(s, t);
        write_row(out, {t, c.real(), c.imag(), pulse::adiabaticity_ratio(s, t)});
    }
}

void run_oscillator(const RunConfig& cfg, std::ostream& out)
{
    const auto spec = cfg.oscillator.spec();
    const auto plan = ermakov::plan_expansion(spec);
    const double dt = cfg.oscillator_dt_ms() * 1e-3;
    const double t0_period = kTwoPi / spec.omega0;
    const double tf_period = kTwoPi / spec.omegaf;

    // Segment boundaries are grid points, so RK4 never steps across the
    // kinks of w^2 at t = 0 and t = tf.
    std::vector<double> grid;
    std::vector<const char*> segment;
    auto append = [&](double a, double b, const char* name, bool skip_first) {
        const auto g = prop::grid_with_step(a, b, dt);
        for (std::size_t k = skip_first ? 1 : 0; k < g.size(); ++k) {
            grid.push_back(g[k]);
            segment.push_back(name);
        }
    };
    append(-t0_period, 0.0, "pre", false);
    segment.back() = "ramp";
    append(0.0, spec.tf, "ramp", true);
    append(spec.tf, spec.tf + tf_period, "post", true);

    std::vector<double> q(grid.size(), 0.0), p(grid.size(), 0.0);
    try {
        const auto closed = ermakov::trajectory_closed_form(plan, grid);
        q = closed.q;
        p = closed.p;
    } catch (const InconsistentInitialConditions&) {
        // Rest solution: the particle sits at the trap center.
    }
    const auto oracle = ermakov::hamilton_oracle(plan, grid);

    out << "segment,t_s,q_m,v_m_per_s,E_J,E_over_omega_J_s,omega_sq_rad2_per_s2,rho,q_oracle_m,v_oracle_m_per_s\n";
    const double m = spec.mass;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        const double w2 = plan.omega_sq(t);
        const double e = ermakov::energy(plan, t, q[k], p[k]);
        const double e_over_w = w2 > 0.0 ? e / std::sqrt(w2) : std::nan("");
        out << segment[k] << ',';
        write_row(out, {t, q[k], p[k] / m, e, e_over_w, w2, plan.rho(t), oracle.q[k], oracle.p[k] / m});
    }
}

bool CheckReport::all_passed() const
{
    return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed; });
}

void CheckReport::print(std::ostream& out) const
{
    for (const auto& item : items) {
        out << (item.passed ? "PASS  " : "FAIL  ") << item.name << ": measured " << format_double(item.measured);
        if (item.upper)
            out << " in [" << format_double(item.threshold) << ", " << format_double(*item.upper) << "]";
        else
            out << " < " << format_double(item.threshold);
        out << '\n';
    }
    const auto failed = std::count_if(items.begin(), items.end(), [](const CheckItem& i) { return !i.passed; });
    out << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
}

CheckReport run_check(const RunConfig& cfg, const CheckOptions& options)
{
    CheckReport report;
    const double scale = cfg.tolerance_scale;
    auto below = [&](std::string name, double measured, double threshold) {
        threshold *= scale;
        report.items.push_back({std::move(name), measured, threshold, std::nullopt, measured < threshold});
    };
    auto within = [&](std::string name, double measured, double lo, double hi) {
        report.items.push_back({std::move(name), measured, lo, hi, measured >= lo && measured <= hi});
    };

    // Biorthogonal algebra on random complex-symmetric matrices.
    {
        std::mt19937_64 rng(20120706);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double bio = 0.0, clo = 0.0, rec = 0.0;
        int done = 0;
        while (done < 1000) {
            const cplx d1{u(rng), u(rng)}, d2{u(rng), u(rng)}, off{u(rng), u(rng)};
            const ComplexMat2 m{d1, off, off, d2};
            const cplx diff = d1 - d2;
            if (std::abs(std::sqrt(diff * diff + 4.0 * off * off)) <= 1e-6)
                continue;
            const auto basis = eigensystem_2x2(m);
            bio = std::max(bio, biorthonormality_defect(basis));
            clo = std::max(clo, closure_defect(basis));
            rec = std::max(rec, (reconstruct(basis) - m).frobenius_norm() / std::max(1.0, m.frobenius_norm()));
            ++done;
        }
        below("biorthonormality defect (1000 random matrices)", bio, 1e-10);
        below("closure defect (1000 random matrices)", clo, 1e-10);
        below("reconstruction defect (1000 random matrices)", rec, 1e-10);
    }

    const auto s = atom_schedule(cfg);
    const auto grid = prop::grid_with_step(s.t_start, s.t_end, kDefaultAtomDtNs);
    {
        const auto h = [&](double t) { return options.h_a(s, t); };
        const double plus = ctrlh::transitionless_residual(s, ctrlh::Branch::plus, grid, h);
        const double minus = ctrlh::transitionless_residual(s, ctrlh::Branch::minus, grid, h);
        below("transitionless residual, + branch", plus, 1e-6);
        below("transitionless residual, - branch", minus, 1e-6);
    }
    {
        const auto h0 = [&](double t) { return ctrlh::h_a0(s, t); };
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const double t = s.t_start + (s.t_end - s.t_start) * (k + 0.5) / 10.0;
            worst = std::max(worst, (ctrlh::h1_general(h0, t, 1e-4) - ctrlh::h_a1(s, t)).max_abs());
        }
        below("numeric H1 vs analytic H_a1", worst, 1e-6);
    }
    {
        const auto alpha = ctrlh::mixing_angle_trajectory(s, std::span<const double>(grid.data(), 1));
        const ComplexVec2 psi0 = ctrlh::adiabatic_state(ctrlh::Branch::plus, alpha[0].alpha);
        const ComplexVec2 psihat0 = ctrlh::adiabatic_dual(ctrlh::Branch::plus, alpha[0].alpha);
        const auto traj =
            prop::propagate_pair([&](double t) { return ctrlh::h_a0(s, t); }, psi0, psihat0, grid);
        below("biorthogonal overlap drift", prop::overlap_drift(traj), 1e-8);
        const double order = prop::convergence_order([&](double t) { return ctrlh::h_a0(s, t); }, {0.0, 1.0},
                                                     s.t_start, s.t_end, 400);
        within("RK4 order, RAP", order, 3.7, 4.3);
    }

    const auto plan = ermakov::plan_expansion(cfg.oscillator.spec());
    {
        const auto& sp = plan.spec();
        double erm = 0.0, det = 0.0, inv = 0.0;
        constexpr int n = 10000;
        for (int k = 0; k <= n; ++k) {
            const double t = sp.tf * k / n;
            erm = std::max(erm, plan.ermakov_residual(t));
            const auto im = ermakov::invariant_at(plan, t);
            det = std::max(det, std::abs(im.det_identity() + 1.0));
            inv = std::max(inv, ermakov::invariance_residual(plan, t));
        }
        below("boundary conditions on rho", plan.boundary_residual(), 1e-10);
        below("Ermakov residual / w0^2", erm / (sp.omega0 * sp.omega0), 1e-9);
        below("invariant determinant |b^2 - ac + 1|", det, 1e-12);
        below("invariance residual / |I|", inv, 1e-9);

        const double w = std::sqrt(std::abs(plan.min_omega_sq())) + sp.omega0;
        const auto h = [&](double t) { return ermakov::effective_hamiltonian(sp.mass, plan.omega_sq(t)); };
        const auto steps = static_cast<std::size_t>(std::ceil(2.0 * w * sp.tf));
        const double order = prop::convergence_order(h, {sp.q0, sp.mass * sp.v0}, 0.0, sp.tf, steps);
        within("RK4 order, oscillator", order, 3.7, 4.3);
    }
    return report;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.output.empty()) {
        file.open(cfg.output, std::ios::binary);
        if (!file) {
            err << "sta: cannot open output '" << cfg.output << "'\n";
            return kExitConfig;
        }
        sink = &file;
    }
    try {
        cfg.validate();
        switch (cfg.scenario) {
        case Scenario::rap: run_rap(cfg, *sink); break;
        case Scenario::rap_cd: run_rap_cd(cfg, cfg.approx, *sink); break;
        case Scenario::rap_cd_approx: run_rap_cd(cfg, true, *sink); break;
        case Scenario::cd_terms: run_cd_terms(cfg, *sink); break;
        case Scenario::oscillator: {
            const auto spec = cfg.oscillator.spec();
            if (spec.q0 == 0.0 && spec.v0 == 0.0)
                err << "sta: q0 = v0 = 0, emitting the rest trajectory\n";
            run_oscillator(cfg, *sink);
            break;
        }
        case Scenario::check: {
            const auto report = run_check(cfg);
            report.print(*sink);
            return report.all_passed() ? kExitOk : kExitCheckFailed;
        }
        }
    } catch (const ConfigError& e) {
        err << "sta: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "sta: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

} // namespace sta::shell
