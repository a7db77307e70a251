// nmrelax — command-line front end: FID curves, omega1 sweeps of the
// non-Markovianity measure, analytic-vs-brute-force verification, and
// measure evaluation on external CSV data.

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nmrelax/config.hpp"
#include "nmrelax/csv.hpp"
#include "nmrelax/gkls.hpp"
#include "nmrelax/measure.hpp"
#include "nmrelax/propagator.hpp"

namespace {

using namespace nmrelax;

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_input_error = 2;
constexpr int exit_io_error = 3;

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

std::vector<std::pair<std::string, std::string>> params_metadata(
    const ModelParams& p) {
    return {{"gamma_I_radps", fmt(p.gamma_I)},
            {"gamma_II_radps", fmt(p.gamma_II)},
            {"J_radps", fmt(p.J)},
            {"omega1_radps", fmt(p.omega1)},
            {"n", std::to_string(p.n)}};
}

// Writes through a temporary ostringstream when the target is a file so a
// failed open is reported before any compute-side errors.
class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) : path_(path) {
        if (!path_.empty() && path_ != "-") {
            file_.open(path_);
            if (!file_) throw std::ios_base::failure("cannot open output file: " + path_);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::string path_;
    std::ofstream file_;
};

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::optional<double> omega1_hz;
    std::optional<int> n;
    std::optional<int> samples;
    std::vector<double> window;
};

RunConfig resolve_config(const CommonOpts& o) {
    RunConfig cfg = load_config(o.config_path);
    if (o.omega1_hz) cfg.params.omega1 = two_pi * *o.omega1_hz;
    if (o.n) cfg.params.n = *o.n;
    validate_params(cfg.params);
    double t0 = cfg.grid.t_start, t1 = cfg.grid.t_end;
    int samples = cfg.grid.samples;
    if (!o.window.empty()) {
        t0 = o.window[0];
        t1 = o.window[1];
    }
    if (o.samples) samples = *o.samples;
    cfg.grid = TimeGrid(t0, t1, samples);
    return cfg;
}

int run_fid(const CommonOpts& o, double ensemble_spread, int quad_points) {
    const RunConfig cfg = resolve_config(o);
    OutputTarget out(o.out_path);
    const Trajectory traj =
        ensemble_spread > 0.0
            ? ensemble_beta(cfg.params, cfg.grid, ensemble_spread, quad_points)
            : beta_trajectory(cfg.params, cfg.grid);
    auto meta = params_metadata(cfg.params);
    meta.push_back({"t_start_s", fmt(cfg.grid.t_start)});
    meta.push_back({"t_end_s", fmt(cfg.grid.t_end)});
    meta.push_back({"samples", std::to_string(cfg.grid.samples)});
    meta.push_back({"ensemble_spread", fmt(ensemble_spread)});
    meta.push_back({"quad_points", std::to_string(quad_points)});
    io::write_trajectory_csv(out.stream(), traj, meta, "re_beta", "im_beta");
    return exit_ok;
}

int run_sweep(const CommonOpts& o, const std::vector<double>& omega1_list_hz,
              double omega1_min_hz, double omega1_max_hz, int omega1_count,
              int jobs) {
    const RunConfig base = resolve_config(o);
    std::vector<double> omega1_values;  // rad/s
    if (!omega1_list_hz.empty()) {
        for (double hz : omega1_list_hz) omega1_values.push_back(two_pi * hz);
    } else if (omega1_count > 0) {
        if (omega1_count == 1) {
            omega1_values.push_back(two_pi * omega1_min_hz);
        } else {
            const double step = (omega1_max_hz - omega1_min_hz) / (omega1_count - 1);
            for (int i = 0; i < omega1_count; ++i) {
                omega1_values.push_back(two_pi * (omega1_min_hz + i * step));
            }
        }
    } else {
        throw CLI::ValidationError(
            "sweep", "give --omega1-hz values or --omega1-min-hz/--omega1-max-hz/--omega1-count");
    }
    for (double w : omega1_values) {
        if (w < 0.0) throw CLI::ValidationError("sweep", "omega1 values must be >= 0");
    }

    const std::pair<double, double> window{base.grid.t_start, base.grid.t_end};
    const int samples = base.grid.samples;

    struct Row {
        double omega1;
        double N;
        int n_intervals;
    };
    std::vector<Row> rows(omega1_values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= omega1_values.size()) break;
            ModelParams p = base.params;
            p.omega1 = omega1_values[i];
            const MeasureResult res = blp_measure_analytic(p, window, samples);
            rows[i] = {p.omega1, res.N,
                       static_cast<int>(res.omega_plus.intervals.size())};
        }
    };
    const int workers = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    OutputTarget out(o.out_path);
    std::ostringstream ss;
    ss.precision(17);
    for (const auto& [key, value] : params_metadata(base.params)) {
        if (key != "omega1_radps") ss << "# " << key << " = " << value << "\n";
    }
    ss << "# window_s = [" << fmt(window.first) << ", " << fmt(window.second) << "]\n"
       << "# samples = " << samples << "\n"
       << "# jobs = " << workers << "\n"
       << "omega1_radps,N,n_intervals\n";
    for (const Row& r : rows) {
        ss << r.omega1 << ',' << r.N << ',' << r.n_intervals << "\n";
    }
    out.stream() << ss.str();
    return exit_ok;
}

int run_verify(const CommonOpts& o, double t_end, double tol, int samples,
               const std::string& dump_path) {
    RunConfig cfg = load_config(o.config_path);
    if (o.omega1_hz) cfg.params.omega1 = two_pi * *o.omega1_hz;
    if (o.n) cfg.params.n = *o.n;
    validate_params(cfg.params);
    if (cfg.params.n > 3) {
        throw CLI::ValidationError("verify", "n must be <= 3 (brute-force cost)");
    }
    const TimeGrid grid(0.0, t_end, samples);

    const auto gen = gkls::build_star_generator(cfg.params);
    const auto rho0 = gkls::initial_state(cfg.params.n, 0.0);
    const double ode_tol = std::min(1e-4, std::max(1e-12, tol * 1e-2));
    const auto states = gkls::evolve(gen, rho0, grid, ode_tol);

    const SpectralData sd = cubic_spectrum(cfg.params);
    double max_dev = 0.0, max_trace = 0.0, min_eig = 1.0;
    for (int i = 0; i < grid.samples; ++i) {
        const auto& rho = states[static_cast<std::size_t>(i)];
        const auto reduced = gkls::partial_trace_env(rho, cfg.params.n);
        const Complex beta_oracle = gkls::extract_beta(reduced, 0.0);
        const Complex beta_analytic = beta_n(cfg.params, sd, grid.at(i));
        max_dev = std::max(max_dev, std::abs(beta_oracle - beta_analytic));
        max_trace = std::max(max_trace, std::abs(rho.trace() - Complex{1.0}));
        if (i % std::max(1, grid.samples / 10) == 0) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
                0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
            min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        }
    }

    if (!dump_path.empty()) {
        std::ofstream dump(dump_path);
        if (!dump) throw std::ios_base::failure("cannot open output file: " + dump_path);
        gkls::dump_diagnostics(gen, rho0, grid, ode_tol, 0.0, dump);
    }

    std::cout << "max |beta_analytic - beta_oracle| = " << max_dev << "\n"
              << "max trace drift                   = " << max_trace << "\n"
              << "min eigenvalue                    = " << min_eig << "\n";
    const bool pass = max_dev <= tol && max_trace <= 1e-9 && min_eig >= -1e-8;
    std::cout << (pass ? "VERIFY PASS" : "VERIFY FAIL") << " (tol " << tol << ")\n";
    return pass ? exit_ok : exit_verify_failed;
}

int run_measure(const std::string& csv_path, const std::vector<double>& window,
                double smooth, const std::string& out_path) {
    Trajectory traj = io::read_trajectory_csv_file(csv_path);
    if (smooth > 0.0) traj = moving_average(traj, smooth);
    const std::pair<double, double> win =
        window.empty() ? std::pair<double, double>{0.0, 0.2}
                       : std::pair<double, double>{window[0], window[1]};
    const MeasureResult res = blp_measure(traj, win);

    std::cout.precision(12);
    std::cout << "N = " << res.N << "\n"
              << "window = [" << win.first << ", " << win.second << "] s\n"
              << "backflow intervals (" << res.omega_plus.intervals.size() << "):\n";
    for (const auto& [a, b] : res.omega_plus.intervals) {
        std::cout << "  [" << a << ", " << b << "]\n";
    }
    if (!out_path.empty()) {
        OutputTarget out(out_path);
        io::write_trajectory_csv(
            out.stream(), traj,
            {{"source", csv_path}, {"smooth_window_s", fmt(smooth)},
             {"N", fmt(res.N)}},
            "re", "im");
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Star-model open-system simulator: analytic FID curves, "
                 "brute-force verification, and the trace-distance "
                 "non-Markovianity measure"};
    app.require_subcommand(1);

    CommonOpts opts;
    double ensemble_spread = 0.0;
    int quad_points = 21;
    std::vector<double> sweep_list_hz;
    double sweep_min_hz = 0.0, sweep_max_hz = 0.0;
    int sweep_count = 0;
    int jobs = 1;
    double verify_t_end = 1.0, verify_tol = 1e-6;
    int verify_samples = 101;
    std::string dump_path;
    std::string measure_csv;
    double smooth = 0.0;

    auto add_common = [&](CLI::App* sub, bool with_grid) {
        sub->add_option("--config", opts.config_path, "parameter config file")
            ->required();
        sub->add_option("--out", opts.out_path, "output path ('-' for stdout)");
        sub->add_option("--omega1-hz", opts.omega1_hz,
                        "override drive amplitude, in Hz");
        sub->add_option("--n", opts.n, "override satellite count");
        if (with_grid) {
            sub->add_option("--samples", opts.samples, "override grid samples");
            sub->add_option("--window", opts.window, "time window T0 T1 (s)")
                ->expected(2);
        }
    };

    auto* fid = app.add_subcommand("fid", "emit beta_n(t) as CSV");
    add_common(fid, true);
    fid->add_option("--ensemble-spread", ensemble_spread,
                    "relative Gaussian spread of omega1");
    fid->add_option("--quad-points", quad_points,
                    "Gauss-Hermite points for the ensemble average");

    auto* sweep = app.add_subcommand(
        "sweep", "compute the measure N over a list of omega1 values");
    sweep->add_option("--config", opts.config_path, "parameter config file")
        ->required();
    sweep->add_option("--out", opts.out_path, "output path ('-' for stdout)");
    sweep->add_option("--n", opts.n, "override satellite count");
    sweep->add_option("--samples", opts.samples,
                      "grid samples per measure evaluation (default 100000)");
    sweep->add_option("--window", opts.window, "integration window T0 T1 (s)")
        ->expected(2);
    sweep->add_option("--omega1-hz", sweep_list_hz, "explicit omega1 list, Hz");
    sweep->add_option("--omega1-min-hz", sweep_min_hz, "sweep start, Hz");
    sweep->add_option("--omega1-max-hz", sweep_max_hz, "sweep end, Hz");
    sweep->add_option("--omega1-count", sweep_count, "number of sweep points");
    sweep->add_option("--jobs", jobs, "worker threads");

    auto* verify = app.add_subcommand(
        "verify", "compare the analytic propagator against brute-force GKLS");
    add_common(verify, false);
    verify->add_option("--t-end", verify_t_end, "integration end time, s");
    verify->add_option("--tol", verify_tol, "maximum allowed deviation");
    verify->add_option("--samples", verify_samples, "comparison grid samples");
    verify->add_option("--dump", dump_path, "write diagnostics CSV here");

    auto* measure = app.add_subcommand(
        "measure", "compute the measure N from an ingested trajectory CSV");
    measure->add_option("csv", measure_csv, "input CSV (t_s,re[,im])")
        ->required();
    measure->add_option("--window", opts.window, "integration window T0 T1 (s)")
        ->expected(2);
    measure->add_option("--smooth", smooth, "moving-average window, s");
    measure->add_option("--out", opts.out_path, "write the (smoothed) trajectory CSV");

    try {
        app.parse(argc, argv);
        if (fid->parsed()) return run_fid(opts, ensemble_spread, quad_points);
        if (sweep->parsed()) {
            if (!opts.window.empty()) {
                // window via resolve_config
            } else {
                opts.window = {0.0, 50.0};
            }
            if (!opts.samples) opts.samples = 100000;
            return run_sweep(opts, sweep_list_hz, sweep_min_hz, sweep_max_hz,
                             sweep_count, jobs);
        }
        if (verify->parsed()) {
            return run_verify(opts, verify_t_end, verify_tol, verify_samples,
                              dump_path);
        }
        return run_measure(measure_csv, opts.window, smooth, opts.out_path);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return exit_input_error;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io_error;
    }
}
