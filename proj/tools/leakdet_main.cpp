// Command-line front end: run scenarios end to end, execute calibration
// sweeps, dump chain frequency responses. All outputs are CSV with fixed
// headers and are byte-identical for identical seeds and flags.
//
// Exit codes: 0 clean run, 1 usage error, 2 scenario/config error,
// 3 training never stabilized.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "leakdet/leakdet.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTraining = 3;

// A run gives training this many sessions before giving up; the hardware
// would loop forever.
constexpr int kTrainingSessionCap = 20;

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

struct RunOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration_s;
    int n = 20;
    int tau_s = 2;
    std::optional<int> t_alarm;
    int train_size = 30;
    std::string out_dir = ".";
};

int command_run(const RunOptions& opt) {
    leakdet::Scenario scenario;
    try {
        scenario = leakdet::load_scenario(opt.scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (opt.seed) scenario.seed = *opt.seed;
    if (opt.duration_s) scenario.duration_s = *opt.duration_s;

    leakdet::MonitorConfig monitor;
    monitor.n = opt.n;
    monitor.tau_s = opt.tau_s;
    monitor.t_alarm = opt.t_alarm ? *opt.t_alarm : (opt.n * 17 + 10) / 20; // default 85% of N
    leakdet::TrainingConfig training;
    training.set_size = opt.train_size;
    try {
        monitor.validate();
        if (training.set_size < 10 || training.set_size > 255)
            throw std::invalid_argument("training set size must be in [10, 255]");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    const leakdet::FrontEnd fe = leakdet::default_front_end();
    const leakdet::ScenarioAcquirer acquirer{fe, scenario};

    const leakdet::TrainingResult trained =
        leakdet::run_training(training, acquirer, 0.0, kTrainingSessionCap);
    if (!trained.success) {
        std::cerr << "error: background never stabilized after " << trained.sessions
                  << " training sessions\n";
        return kExitTraining;
    }

    const double monitor_start = trained.end_time_s;
    const double monitor_duration = scenario.duration_s - monitor_start;
    if (monitor_duration < monitor.tau_s) {
        std::cerr << "error: scenario duration leaves no time to monitor after training\n";
        return kExitConfig;
    }

    const leakdet::Timeline timeline =
        leakdet::run_monitor(trained.baseline, monitor, acquirer, monitor_start, monitor_duration);
    const leakdet::PowerReport power = leakdet::simulate_energy(timeline, leakdet::PowerParams{});

    try {
        auto timeline_csv = open_output(opt.out_dir, "timeline.csv");
        leakdet::write_timeline_csv(timeline_csv, timeline);
        auto power_csv = open_output(opt.out_dir, "power.csv");
        leakdet::write_power_report_csv(power_csv, timeline, power);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    char verdict[96];
    if (timeline.any_alarm()) {
        std::snprintf(verdict, sizeof verdict, "ALARM first_alarm_s=%.0f", timeline.first_alarm_s());
    } else if (timeline.first_noise_s() >= 0.0) {
        std::snprintf(verdict, sizeof verdict, "NOISE first_noise_s=%.0f", timeline.first_noise_s());
    } else {
        std::snprintf(verdict, sizeof verdict, "QUIET");
    }
    std::cout << verdict << "\n";
    return kExitOk;
}

int command_sweep(const std::string& kind, const std::string& source_name, int seeds,
                  const std::string& out_dir) {
    const leakdet::FrontEnd fe = leakdet::default_front_end();
    leakdet::SweepSettings settings;
    settings.seeds = seeds;

    if (kind == "power") {
        const auto rows = leakdet::power_sweep(leakdet::PowerParams{});
        auto csv = open_output(out_dir, "power_sweep.csv");
        leakdet::write_power_sweep_csv(csv, rows);
        std::cout << "wrote power_sweep.csv (tau 1..30)\n";
        return kExitOk;
    }
    if (kind == "material") {
        const auto results = leakdet::material_sweep(fe, settings);
        auto csv = open_output(out_dir, "material.csv");
        leakdet::write_material_csv(csv, results);
        for (const auto& r : results) {
            std::cout << r.material.name << " loss_db=" << r.insertion_loss_db
                      << " detection_m=" << r.detection_distance_m << "\n";
        }
        return kExitOk;
    }
    if (kind == "standoff") {
        const leakdet::AcousticSource source =
            source_name == "jet" ? leakdet::jet_source() : leakdet::spray_source();
        const auto result = leakdet::standoff_sweep(fe, source, settings);
        auto csv = open_output(out_dir, std::string("standoff_") + source_name + ".csv");
        leakdet::write_standoff_csv(csv, result);
        std::cout << "source=" << source_name << " range_m=" << result.range_m << "\n";
        return kExitOk;
    }
    std::cerr << "error: unknown sweep kind '" << kind << "'\n";
    return kExitConfig;
}

int command_freq_response(const std::string& chain, const std::string& out_path) {
    const leakdet::FrontEnd fe = leakdet::default_front_end();
    leakdet::ChainSelect select = leakdet::ChainSelect::Full;
    if (chain == "analog") select = leakdet::ChainSelect::Analog;
    else if (chain == "resonator") select = leakdet::ChainSelect::Resonator;
    else if (chain != "full") {
        std::cerr << "error: unknown chain '" << chain << "'\n";
        return kExitConfig;
    }

    if (out_path.empty()) {
        leakdet::write_freq_response_csv(std::cout, fe, select);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return kExitConfig;
        }
        leakdet::write_freq_response_csv(out, fe, select);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Standoff acoustic leak detector simulator"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Train and monitor a scenario file");
    run->add_option("scenario", run_opt.scenario_path, "Scenario file (.scn)")->required();
    std::uint64_t seed_value = 0;
    auto* seed_opt = run->add_option("--seed", seed_value, "Override the scenario seed");
    double duration_value = 0.0;
    auto* duration_opt = run->add_option("--duration", duration_value, "Override the scenario duration, seconds");
    run->add_option("--n", run_opt.n, "Event window size (10..255)");
    run->add_option("--tau", run_opt.tau_s, "Polling period, seconds (1..30)");
    int t_alarm_value = 0;
    auto* t_opt = run->add_option("--t-alarm", t_alarm_value, "Alarm threshold (default 85% of N)");
    run->add_option("--train-size", run_opt.train_size, "Training set size (10..255)");
    run->add_option("--out", run_opt.out_dir, "Output directory for CSV files");

    std::string sweep_kind;
    std::string sweep_source = "spray";
    int sweep_seeds = 3;
    std::string sweep_out = ".";
    auto* sweep = app.add_subcommand("sweep", "Detection-range and power sweeps");
    sweep->add_option("kind", sweep_kind, "standoff|material|power")->required();
    sweep->add_option("--source", sweep_source, "spray|jet (standoff sweeps)");
    sweep->add_option("--seeds", sweep_seeds, "Seeds per distance point");
    sweep->add_option("--out", sweep_out, "Output directory for CSV files");

    std::string chain = "full";
    std::string freq_out;
    auto* freq = app.add_subcommand("freq-response", "Dump chain magnitude response as CSV");
    freq->add_option("--chain", chain, "full|analog|resonator");
    freq->add_option("--out", freq_out, "Output file (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (*seed_opt) run_opt.seed = seed_value;
            if (*duration_opt) run_opt.duration_s = duration_value;
            if (*t_opt) run_opt.t_alarm = t_alarm_value;
            return command_run(run_opt);
        }
        if (sweep->parsed()) return command_sweep(sweep_kind, sweep_source, sweep_seeds, sweep_out);
        if (freq->parsed()) return command_freq_response(chain, freq_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
