// Command line front end: parses a system description, dispatches the
// requested computation and emits CSV (stdout or --out).  Values are in
// nats unless --bits is given, which rescales pressure/entropy-like
// columns by 1/ln 2 at render time.  Exit codes: 0 success, 2 config
// error, 3 empty level set (alpha out of domain), 4 solver failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "birkhoff/birkhoff.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::optional<int> grid;
    std::optional<double> alpha;
    std::optional<double> delta;
    std::optional<double> gamma;
    std::optional<long> n;
    std::optional<double> tolerance;
    bool bits = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("config", opt.config_path, "system description file")->required();
    cmd->add_option("--out", opt.out_path, "write CSV here instead of stdout");
    cmd->add_option("--grid", opt.grid, "grid size for curve commands");
    cmd->add_option("--alpha", opt.alpha, "level of the Birkhoff average");
    cmd->add_option("--delta", opt.delta, "level window half-width");
    cmd->add_option("--gamma", opt.gamma, "excluded measure for the covering estimate");
    cmd->add_option("--n", opt.n, "word length (resolution for `oracle`)");
    cmd->add_option("--tolerance", opt.tolerance, "solver relative tolerance");
    cmd->add_flag("--bits", opt.bits, "report log-scaled values in bits");
}

birkhoff::SystemConfig load_config(const CommonOptions& opt) {
    std::ifstream in(opt.config_path);
    if (!in) throw birkhoff::ConfigValidationError("cannot open config file " + opt.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    birkhoff::SystemConfig cfg = birkhoff::parse_config(buf.str());
    if (opt.grid) cfg.params.grid = opt.grid;
    if (opt.alpha) cfg.params.alpha = opt.alpha;
    if (opt.delta) cfg.params.delta = opt.delta;
    if (opt.gamma) cfg.params.gamma = opt.gamma;
    if (opt.n) cfg.params.n = opt.n;
    if (opt.tolerance) cfg.params.tolerance = opt.tolerance;
    return cfg;
}

void write_output(const CommonOptions& opt, const std::string& csv) {
    if (opt.out_path.empty()) {
        std::cout << csv;
        return;
    }
    std::ofstream out(opt.out_path);
    if (!out) throw birkhoff::Error("cannot open output file " + opt.out_path);
    out << csv;
}

birkhoff::PressureOptions pressure_options(const birkhoff::SystemConfig& cfg) {
    birkhoff::PressureOptions po;
    if (cfg.params.tolerance) po.relative_tolerance = std::max(*cfg.params.tolerance, 1e-15);
    return po;
}

const birkhoff::Potential& require_potential(const birkhoff::SystemConfig& cfg, const char* name) {
    const birkhoff::Potential* p = cfg.find_potential(name);
    if (!p) throw birkhoff::ConfigValidationError(std::string("config lacks potential '") + name + "'");
    return *p;
}

birkhoff::Potential potential_or_zero(const birkhoff::SystemConfig& cfg, const birkhoff::SftSystem& sys,
                                      const char* name) {
    const birkhoff::Potential* p = cfg.find_potential(name);
    return p ? *p : birkhoff::Potential::zero(sys);
}

double log_scale(const CommonOptions& opt) { return opt.bits ? 1.0 / std::log(2.0) : 1.0; }

int run_pressure(const CommonOptions& opt) {
    const birkhoff::SystemConfig cfg = load_config(opt);
    const birkhoff::SftSystem sys = cfg.symbolic_system();
    const birkhoff::Potential psi = potential_or_zero(cfg, sys, "psi");
    const birkhoff::PressureResult res = birkhoff::classical_pressure(sys, psi, pressure_options(cfg));
    std::string csv = "value,residual,iterations\n";
    csv += birkhoff::format_csv_number(res.value * log_scale(opt)) + "," +
           birkhoff::format_csv_number(res.residual) + "," + std::to_string(res.iterations) + "\n";
    write_output(opt, csv);
    return 0;
}

int run_spectrum(const CommonOptions& opt) {
    const birkhoff::SystemConfig cfg = load_config(opt);
    const birkhoff::SftSystem sys = cfg.symbolic_system();
    const birkhoff::Potential& phi = require_potential(cfg, "phi");
    const birkhoff::Potential psi = potential_or_zero(cfg, sys, "psi");
    const int grid = cfg.params.grid.value_or(11);
    const birkhoff::SpectrumCurve curve =
        birkhoff::spectrum_curve(sys, phi, psi, grid, pressure_options(cfg));
    std::string csv = "alpha,value,q_opt,boundary\n";
    for (const birkhoff::ConstrainedPressure& p : curve.points)
        csv += birkhoff::format_csv_number(p.alpha) + "," +
               birkhoff::format_csv_number(p.value * log_scale(opt)) + "," +
               birkhoff::format_csv_number(p.q_opt) + "," + (p.boundary ? "1" : "0") + "\n";
    write_output(opt, csv);
    return 0;
}

int run_flow_spectrum(const CommonOptions& opt) {
    const birkhoff::SystemConfig cfg = load_config(opt);
    if (!cfg.sft) throw birkhoff::ConfigValidationError("flow-spectrum needs a matrix system");
    const birkhoff::SuspensionSystem sys(*cfg.sft, require_potential(cfg, "rho"),
                                         require_potential(cfg, "phi"));
    const birkhoff::PressureOptions po = pressure_options(cfg);
    std::string csv = "alpha,entropy\n";
    if (cfg.params.alpha) {
        const double h = birkhoff::flow_entropy_spectrum(sys, *cfg.params.alpha, po);
        csv += birkhoff::format_csv_number(*cfg.params.alpha) + "," +
               birkhoff::format_csv_number(h * log_scale(opt)) + "\n";
    } else {
        const int grid = cfg.params.grid.value_or(11);
        const auto [lo, hi] = birkhoff::ratio_domain(sys);
        for (int i = 0; i < grid; ++i) {
            const double alpha =
                lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
            const double h = birkhoff::flow_entropy_spectrum(sys, alpha, po);
            csv += birkhoff::format_csv_number(alpha) + "," +
                   birkhoff::format_csv_number(h * log_scale(opt)) + "\n";
        }
    }
    write_output(opt, csv);
    return 0;
}

int run_dimension(const CommonOptions& opt) {
    const birkhoff::SystemConfig cfg = load_config(opt);
    if (!cfg.map) throw birkhoff::ConfigValidationError("dimension needs an interval-map system");
    const birkhoff::Potential& phi = require_potential(cfg, "phi");
    const birkhoff::PressureOptions po = pressure_options(cfg);
    std::vector<birkhoff::DimensionResult> results;
    if (cfg.params.alpha) {
        results.push_back(birkhoff::level_set_dimension(*cfg.map, phi, *cfg.params.alpha, po));
    } else {
        results = birkhoff::dimension_spectrum(*cfg.map, phi, cfg.params.grid.value_or(11), po);
    }
    std::string csv = "alpha,dim,residual,unique_zero\n";
    for (const birkhoff::DimensionResult& r : results)
        csv += birkhoff::format_csv_number(r.alpha) + "," + birkhoff::format_csv_number(r.dim) + "," +
               birkhoff::format_csv_number(r.residual) + "," + (r.unique_zero ? "1" : "0") + "\n";
    write_output(opt, csv);
    return 0;
}

int run_estimate(const CommonOptions& opt) {
    const birkhoff::SystemConfig cfg = load_config(opt);
    const birkhoff::SftSystem sys = cfg.symbolic_system();
    const birkhoff::Potential psi = potential_or_zero(cfg, sys, "psi");
    const int n = static_cast<int>(cfg.params.n.value_or(10));
    std::string kind;
    birkhoff::EstimateReport rep;
    if (cfg.params.gamma) {
        // Covering estimate for the equilibrium measure of `mu` (falling
        // back to the psi equilibrium, i.e. the maximal-entropy measure
        // when psi is absent).
        const birkhoff::Potential* mu_pot = cfg.find_potential("mu");
        const birkhoff::Potential base = mu_pot ? *mu_pot : psi;
        const birkhoff::RecodedSystem rec = birkhoff::higher_block_recode(sys, {base, psi});
        const birkhoff::MarkovMeasure mu = birkhoff::equilibrium_measure(rec.sft, rec.potentials[0]);
        kind = "katok";
        rep = birkhoff::katok_entropy_estimate(rec.sft, mu, rec.potentials[1], *cfg.params.gamma, n);
    } else if (cfg.params.alpha) {
        kind = "level";
        rep = birkhoff::level_set_pressure_estimate(sys, require_potential(cfg, "phi"), psi,
                                                    *cfg.params.alpha, cfg.params.delta.value_or(0.0),
                                                    n);
    } else {
        kind = "separated";
        rep = birkhoff::separated_pressure_estimate(sys, psi, n);
    }
    std::string csv = "kind,n,delta,gamma,value,word_count,exact\n";
    csv += kind + "," + std::to_string(rep.n) + ",";
    csv += std::isnan(rep.delta) ? "" : birkhoff::format_csv_number(rep.delta);
    csv += ",";
    csv += std::isnan(rep.gamma) ? "" : birkhoff::format_csv_number(rep.gamma);
    csv += ",";
    csv += rep.empty ? "" : birkhoff::format_csv_number(rep.value * log_scale(opt));
    csv += "," + std::to_string(rep.word_count) + "," + (rep.exact ? std::string("1") : std::string("0")) +
           "\n";
    write_output(opt, csv);
    return 0;
}

int run_oracle(const CommonOptions& opt) {
    const birkhoff::SystemConfig cfg = load_config(opt);
    const birkhoff::SftSystem sys = cfg.symbolic_system();
    if (!cfg.params.alpha) throw birkhoff::ConfigValidationError("oracle needs --alpha");
    const birkhoff::Potential& phi = require_potential(cfg, "phi");
    const birkhoff::Potential psi = potential_or_zero(cfg, sys, "psi");
    const int resolution = cfg.params.resolution.value_or(
        cfg.params.n ? static_cast<int>(*cfg.params.n) : 200);
    const double value = birkhoff::brute_force_constrained(sys, phi, psi, *cfg.params.alpha, resolution);
    std::string csv = "alpha,value\n";
    csv += birkhoff::format_csv_number(*cfg.params.alpha) + "," +
           birkhoff::format_csv_number(value * log_scale(opt)) + "\n";
    write_output(opt, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pressure spectra of Birkhoff level sets on shifts of finite type"};
    app.require_subcommand(1);

    CommonOptions opt;
    CLI::App* pressure = app.add_subcommand("pressure", "classical pressure of psi");
    CLI::App* spectrum = app.add_subcommand("spectrum", "level-set pressure curve for phi");
    CLI::App* flow = app.add_subcommand("flow-spectrum", "entropy spectrum of the suspension flow");
    CLI::App* dimension = app.add_subcommand("dimension", "Hausdorff dimension of level sets");
    CLI::App* estimate = app.add_subcommand("estimate", "definition-level cylinder estimates");
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force constrained optimisation");
    for (CLI::App* cmd : {pressure, spectrum, flow, dimension, estimate, oracle}) add_common(cmd, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (pressure->parsed()) return run_pressure(opt);
        if (spectrum->parsed()) return run_spectrum(opt);
        if (flow->parsed()) return run_flow_spectrum(opt);
        if (dimension->parsed()) return run_dimension(opt);
        if (estimate->parsed()) return run_estimate(opt);
        if (oracle->parsed()) return run_oracle(opt);
    } catch (const birkhoff::AlphaOutOfDomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const birkhoff::ConvergenceFailureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const birkhoff::BracketFailureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const birkhoff::NoSignChangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const birkhoff::ConfigParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const birkhoff::ConfigValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const birkhoff::InvalidModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const birkhoff::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const birkhoff::ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const birkhoff::OracleScaleExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const birkhoff::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
