// sta <scenario> [--config PATH] [--out PATH] [--dt X] [--window-factor X] [--approx]
#include "sta/errors.hpp"
#include "sta/shell.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    using namespace sta::shell;

    CLI::App app{"Shortcuts to adiabaticity for non-Hermitian two-level systems"};
    std::string scenario;
    std::string config_path;
    std::string out_path;
    double dt = 0.0;
    double window_factor = 0.0;
    double tolerance_scale = 0.0;
    bool approx = false;

    app.add_option("scenario", scenario, "rap | rap-cd | rap-cd-approx | cd-terms | oscillator | check")
        ->required();
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_path, "Output file (default: stdout)");
    auto* dt_opt = app.add_option("--dt", dt, "Time step (ns for atomic scenarios, ms for oscillator)");
    auto* wf_opt = app.add_option("--window-factor", window_factor, "Half-window in units of 1/sqrt(a)");
    auto* tol_opt = app.add_option("--tolerance-scale", tolerance_scale, "Multiply check thresholds (check only)");
    app.add_flag("--approx", approx, "Drop Re C from the counterdiabatic term (rap-cd)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty())
            cfg = load_config(config_path);
        cfg.scenario = parse_scenario(scenario);
        if (!out_path.empty())
            cfg.output = out_path;
        if (*dt_opt)
            cfg.dt = dt;
        if (*wf_opt)
            cfg.window_factor = window_factor;
        if (*tol_opt)
            cfg.tolerance_scale = tolerance_scale;
        if (approx)
            cfg.approx = true;
        return run(cfg, std::cout, std::cerr);
    } catch (const sta::ConfigError& e) {
        std::cerr << "sta: " << e.what() << '\n';
        return kExitConfig;
    }
}
