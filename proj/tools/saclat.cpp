// saclat: command-line front end for the saccade latency model.
//
// Machine-readable output goes to --out (or stdout), the human summary to
// stderr. Exit codes: 0 success, 2 usage/schema error, 3 numerical failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "saclat/ddm_sim.hpp"
#include "saclat/dual_task.hpp"
#include "saclat/fairness.hpp"
#include "saclat/gaze.hpp"
#include "saclat/io/csv.hpp"
#include "saclat/io/dataset_csv.hpp"
#include "saclat/io/gaze_csv.hpp"
#include "saclat/io/model_json.hpp"
#include "saclat/io/targets_json.hpp"
#include "saclat/latency_model.hpp"
#include "saclat/rbf.hpp"
#include "saclat/stats.hpp"
#include "saclat/wald.hpp"

namespace {

using nlohmann::json;
using saclat::io::format_double;
using saclat::io::SchemaError;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

/// Raised for numerical failures that are not exceptions of the library
/// (e.g. an optimizer that stopped at its iteration cap).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 0;
    bool quiet = false;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    cmd->add_flag("--quiet", c.quiet, "Suppress the human-readable summary");
    cmd->add_option("--out", c.out, "Output path (default: stdout)");
}

/// Writes to a file opened only after all computation succeeded.
void emit(const Common& c, const std::string& text) {
    if (c.out.empty() || c.out == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
        throw SchemaError("cannot write '" + c.out + "'");
    }
    f << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw SchemaError("cannot write '" + path + "'");
    }
    f << text;
}

std::ostream& summary(const Common& c) {
    static std::ostringstream sink;
    if (c.quiet) {
        sink.str({});
        return sink;
    }
    return std::cerr;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json ks_json(const saclat::stats::KSResult& r) { return {{"D", r.statistic}, {"p", r.p_value}}; }

// --------------------------------------------------------------------------
// fit-rate

struct FitRateArgs {
    Common common;
    std::string trials;
    std::string pedestal;
    std::string normalized_out;
    saclat::TrainConfig train;
};

int cmd_fit_rate(const FitRateArgs& a) {
    const auto raw = saclat::io::dataset_from_table(saclat::io::read_csv_file(a.trials));
    if (raw.records.empty()) {
        throw SchemaError("'" + a.trials + "' has no trials");
    }
    saclat::LatencyDataset normalized;
    try {
        normalized = saclat::latency::normalize_dataset(raw, a.pedestal);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    const auto labels = saclat::latency::condition_labels(normalized);
    saclat::TrainConfig cfg = a.train;
    cfg.seed = a.common.seed;
    const auto result = saclat::rbf::train(labels, cfg);

    saclat::RateModel model{result.network, std::nullopt};
    json j = saclat::io::to_json(model);
    j["training"] = {{"seed", cfg.seed},
                     {"epochs", cfg.epochs},
                     {"learning_rate", cfg.learning_rate},
                     {"n_centers", cfg.n_centers},
                     {"pedestal", a.pedestal},
                     {"conditions", labels.size()},
                     {"trials", raw.records.size()},
                     {"initial_mse", result.initial_loss},
                     {"final_mse", result.final_loss}};
    emit(a.common, dump(j));
    if (!a.normalized_out.empty()) {
        std::ostringstream os;
        saclat::io::write_normalized_csv(os, raw, normalized);
        write_file(a.normalized_out, os.str());
    }
    summary(a.common) << "fit-rate: " << raw.records.size() << " trials, " << labels.size()
                      << " conditions, MSE " << result.initial_loss << " -> " << result.final_loss
                      << " after " << cfg.epochs << " epochs (seed " << cfg.seed << ")\n";
    return 0;
}

// --------------------------------------------------------------------------
// predict

struct PredictArgs {
    Common common;
    std::string model;
    saclat::StimulusFeatures x;
    std::optional<double> alpha;
    std::string calibrate;
    std::string calibrate_column = "latency";
    std::optional<double> calib_contrast;
    std::optional<double> calib_frequency;
    std::optional<double> calib_eccentricity;
    std::vector<double> quantiles{0.05, 0.25, 0.5, 0.75, 0.95};
    std::string format = "json";
};

int cmd_predict(const PredictArgs& a) {
    auto model = saclat::io::read_model_file(a.model);
    try {
        a.x.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    for (double q : a.quantiles) {
        if (!(q > 0.0 && q < 1.0)) {
            throw SchemaError("quantile levels must lie in (0, 1)");
        }
    }
    std::string source = "model";
    if (a.alpha) {
        if (!(*a.alpha > 0.0)) {
            throw SchemaError("--alpha must be positive");
        }
        model.calibration = saclat::latency::Calibration{{"cli", *a.alpha}, 1.0};
        source = "alpha";
    } else if (!a.calibrate.empty()) {
        const auto table = saclat::io::read_csv_file(a.calibrate);
        const std::size_t col = table.column(a.calibrate_column);
        std::vector<double> sample;
        for (const auto& row : table.rows) {
            sample.push_back(saclat::io::parse_double(row[col], a.calibrate_column));
        }
        if (sample.size() < 2) {
            throw SchemaError("calibration sample needs at least two latencies");
        }
        const saclat::StimulusFeatures cond{a.calib_contrast.value_or(a.x.contrast),
                                            a.calib_frequency.value_or(a.x.frequency),
                                            a.calib_eccentricity.value_or(a.x.eccentricity)};
        model.calibration = saclat::latency::calibrate(sample, cond, model.network, "calibrated");
        source = "calibration";
    }
    const auto p = model.params(a.x);
    auto levels = a.quantiles;
    std::sort(levels.begin(), levels.end());

    std::ostringstream os;
    if (a.format == "table") {
        saclat::io::write_row(os, {"quantity", "value"});
        saclat::io::write_row(os, {"alpha", format_double(p.alpha())});
        saclat::io::write_row(os, {"nu", format_double(p.nu())});
        saclat::io::write_row(os, {"mean", format_double(saclat::wald::mean(p))});
        saclat::io::write_row(os, {"variance", format_double(saclat::wald::variance(p))});
        for (double q : levels) {
            saclat::io::write_row(os, {"q" + format_double(q),
                                       format_double(saclat::wald::quantile(q, p))});
        }
    } else {
        json j = {{"features",
                   {{"contrast", a.x.contrast},
                    {"frequency", a.x.frequency},
                    {"eccentricity", a.x.eccentricity}}},
                  {"alpha", p.alpha()},
                  {"nu", p.nu()},
                  {"mean", saclat::wald::mean(p)},
                  {"variance", saclat::wald::variance(p)},
                  {"threshold_source", source},
                  {"quantiles", json::array()}};
        if (model.calibration) {
            j["nu_rescale"] = model.calibration->nu_rescale;
        }
        for (double q : levels) {
            j["quantiles"].push_back({{"level", q}, {"value", saclat::wald::quantile(q, p)}});
        }
        os << dump(j);
    }
    emit(a.common, os.str());
    summary(a.common) << "predict: alpha " << p.alpha() << ", nu " << p.nu() << ", mean latency "
                      << saclat::wald::mean(p) << " (" << source << ")\n";
    return 0;
}

// --------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    Common common;
    double alpha = 1.0;
    double nu = 1.0;
    std::size_t n = 10000;
    double dt = 1e-4;
    std::optional<double> max_time;
    bool analytic = false;
    unsigned threads = 1;
    std::string summary_path;
};

int cmd_simulate(const SimulateArgs& a) {
    std::optional<saclat::IGParams> p;
    saclat::SimConfig cfg;
    try {
        p.emplace(a.alpha, a.nu);
        cfg.dt = a.dt;
        cfg.max_time = a.max_time.value_or(std::max(10.0, 50.0 * saclat::wald::mean(*p)));
        cfg.seed = a.common.seed;
        cfg.validate();
    } catch (const std::logic_error& e) {
        throw SchemaError(e.what());
    }
    const auto ens = saclat::simulate_ensemble(*p, cfg, a.n, a.threads);

    std::vector<double> analytic;
    if (a.analytic) {
        // Separate stream from the simulated paths.
        std::mt19937_64 rng(saclat::path_stream(cfg.seed, ~std::uint64_t{0}));
        analytic.reserve(a.n);
        for (std::size_t i = 0; i < a.n; ++i) {
            analytic.push_back(saclat::wald::sample(*p, rng));
        }
    }

    std::ostringstream os;
    saclat::io::write_row(os, {"source", "index", "time"});
    for (std::size_t i = 0; i < ens.times.size(); ++i) {
        saclat::io::write_row(os, {"simulated", std::to_string(i), format_double(ens.times[i])});
    }
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        saclat::io::write_row(os, {"analytic", std::to_string(i), format_double(analytic[i])});
    }
    emit(a.common, os.str());

    json s = {{"alpha", a.alpha},   {"nu", a.nu},          {"n", a.n},
              {"dt", cfg.dt},       {"max_time", cfg.max_time},
              {"seed", cfg.seed},   {"censored", ens.censored},
              {"analytic_mean", saclat::wald::mean(*p)}};
    auto& err = summary(a.common);
    err << "simulate: " << ens.times.size() << " passages, " << ens.censored << " censored";
    if (!ens.times.empty()) {
        double m = 0.0;
        for (double t : ens.times) {
            m += t;
        }
        m /= static_cast<double>(ens.times.size());
        s["mean"] = m;
        const auto ks = saclat::stats::ks_one_sample(
            ens.times, [&](double t) { return saclat::wald::cdf(t, *p); });
        s["ks_vs_cdf"] = ks_json(ks);
        err << ", mean " << m << " (analytic " << saclat::wald::mean(*p) << "), K.S. vs cdf D="
            << ks.statistic << " p=" << ks.p_value;
        if (!analytic.empty()) {
            const auto ks2 = saclat::stats::ks_two_sample(ens.times, analytic);
            s["ks_vs_analytic"] = ks_json(ks2);
            err << ", K.S. vs analytic samples D=" << ks2.statistic << " p=" << ks2.p_value;
        }
    }
    err << "\n";
    if (!a.summary_path.empty()) {
        write_file(a.summary_path, dump(s));
    }
    return 0;
}

// --------------------------------------------------------------------------
// detect

struct DetectArgs {
    Common common;
    std::string gaze;
    std::string trials;
    saclat::gaze::DetectionParams params;
    double tolerance = 3.0;
};

int cmd_detect(const DetectArgs& a) {
    if (!(a.params.lambda > 0.0) || a.params.min_duration < 1 || !(a.tolerance > 0.0)) {
        throw SchemaError("--lambda, --min-duration and --tolerance must be positive");
    }
    const auto traces = saclat::io::traces_from_table(saclat::io::read_csv_file(a.gaze));
    const auto trials = saclat::io::trials_from_table(saclat::io::read_csv_file(a.trials));
    std::vector<saclat::io::LatencyRow> rows;
    std::map<std::string, std::size_t> counts;
    for (const auto& [id, trial] : trials) {
        saclat::gaze::LatencyResult r;
        if (const auto it = traces.find(id); it != traces.end()) {
            r = saclat::gaze::primary_saccade_latency(it->second, trial, a.tolerance, a.params);
        }
        ++counts[saclat::gaze::to_string(r.status)];
        rows.push_back({id, r});
    }
    std::ostringstream os;
    saclat::io::write_latency_csv(os, rows);
    emit(a.common, os.str());
    auto& err = summary(a.common);
    err << "detect: " << rows.size() << " trials";
    for (const auto& [status, n] : counts) {
        err << ", " << status << " " << n;
    }
    err << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// dual-fit

struct DualFitArgs {
    Common common;
    std::string trials;
    std::string model;
    double frequency = 2.0;
    double foveal_eccentricity = 0.0;
    double peripheral_eccentricity = 10.0;
    std::size_t restarts = 3;
};

std::vector<saclat::dual::Trial> read_dual_trials(const DualFitArgs& a) {
    const auto t = saclat::io::read_csv_file(a.trials);
    const std::size_t tc = t.column("t_norm");
    std::vector<saclat::dual::Trial> out;
    if (t.has("nu_f") && t.has("nu_p")) {
        const std::size_t f = t.column("nu_f");
        const std::size_t p = t.column("nu_p");
        for (const auto& row : t.rows) {
            out.push_back({saclat::io::parse_double(row[tc], "t_norm"),
                           saclat::io::parse_double(row[f], "nu_f"),
                           saclat::io::parse_double(row[p], "nu_p")});
        }
    } else if (t.has("c_f") && t.has("c_p")) {
        if (a.model.empty()) {
            throw SchemaError("contrast columns c_f, c_p need --model to resolve rates");
        }
        const auto model = saclat::io::read_model_file(a.model);
        const std::size_t f = t.column("c_f");
        const std::size_t p = t.column("c_p");
        for (const auto& row : t.rows) {
            const saclat::StimulusFeatures xf{saclat::io::parse_double(row[f], "c_f"), a.frequency,
                                              a.foveal_eccentricity};
            const saclat::StimulusFeatures xp{saclat::io::parse_double(row[p], "c_p"), a.frequency,
                                              a.peripheral_eccentricity};
            out.push_back({saclat::io::parse_double(row[tc], "t_norm"), model.params(xf).nu(),
                           model.params(xp).nu()});
        }
    } else {
        throw SchemaError("dual trials need columns nu_f, nu_p or c_f, c_p");
    }
    try {
        saclat::dual::detail::check_trials(out);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    return out;
}

int cmd_dual_fit(const DualFitArgs& a) {
    using saclat::dual::Component;
    const auto trials = read_dual_trials(a);
    saclat::dual::FitOptions opt;
    opt.seed = a.common.seed;
    opt.restarts = a.restarts;
    const auto fit = saclat::dual::fit_thresholds(trials, opt);
    const auto ks = saclat::dual::ks_dual(trials, fit.alpha_f, fit.alpha_p);

    std::size_t conditions = 0;
    {
        std::vector<std::pair<double, double>> keys;
        for (const auto& t : trials) {
            keys.emplace_back(t.nu_f, t.nu_p);
        }
        std::sort(keys.begin(), keys.end());
        conditions = static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
    }
    json j = {{"trials", trials.size()},
              {"conditions", conditions},
              {"seed", opt.seed},
              {"alpha_f", fit.alpha_f},
              {"alpha_p", fit.alpha_p},
              {"log_likelihood", fit.log_likelihood},
              {"iterations", fit.iterations},
              {"converged", fit.converged},
              {"ks_dual", ks_json(ks)},
              {"baselines", json::object()}};
    auto& err = summary(a.common);
    err << "dual-fit: " << trials.size() << " trials, " << conditions << " conditions\n"
        << "  dual: alpha_f " << fit.alpha_f << ", alpha_p " << fit.alpha_p << ", logL "
        << fit.log_likelihood << ", K.S. D=" << ks.statistic << " p=" << ks.p_value << "\n";
    for (const auto& [name, which] :
         {std::pair{"foveal_only", Component::foveal}, std::pair{"peripheral_only", Component::peripheral}}) {
        const auto s = saclat::dual::fit_single_threshold(trials, which);
        const auto sks = saclat::dual::ks_single(trials, s.alpha, which);
        j["baselines"][name] = {{"alpha", s.alpha},
                                {"log_likelihood", s.log_likelihood},
                                {"converged", s.converged},
                                {"ks", ks_json(sks)}};
        err << "  " << name << ": alpha " << s.alpha << ", logL " << s.log_likelihood
            << ", K.S. D=" << sks.statistic << " p=" << sks.p_value << "\n";
    }
    emit(a.common, dump(j));
    if (!fit.converged) {
        throw NumericalFailure("dual-fit: simplex search hit its iteration cap (best-so-far reported)");
    }
    return 0;
}

// --------------------------------------------------------------------------
// fairness / fov-sweep

struct TargetsArgs {
    Common common;
    std::string targets;
    std::string model;
    std::string display;
    double anchor_ms = 282.0;
    std::vector<std::string> teams;
    saclat::fairness::SweepOptions sweep;
    std::string table;
};

struct LoadedTargets {
    saclat::RateModel model;
    std::optional<saclat::DisplayConfig> display;
    saclat::io::TargetSet set;
};

LoadedTargets load_targets(const TargetsArgs& a) {
    LoadedTargets l{saclat::io::read_model_file(a.model), std::nullopt, {}};
    l.display = saclat::io::display_from_json(saclat::io::read_json_file(a.display));
    const auto base = std::filesystem::path(a.targets).parent_path();
    l.set = saclat::io::targets_from_json(saclat::io::read_json_file(a.targets), *l.display, base);
    if (l.set.targets.empty()) {
        throw SchemaError("'" + a.targets + "' contains no targets");
    }
    return l;
}

int cmd_fairness(const TargetsArgs& a) {
    const auto l = load_targets(a);
    saclat::fairness::FairnessOptions opt;
    opt.anchor_ms = a.anchor_ms;
    opt.teams = a.teams;
    opt.skipped_frames = l.set.empty_frames;
    saclat::fairness::FairnessReport r;
    try {
        r = saclat::fairness::analyze(l.set.targets, l.model, *l.display, opt);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    json j = {{"anchor_ms", r.anchor_ms},
              {"display", saclat::io::to_json(*l.display)},
              {"teams", json::array()},
              {"frames", json::array()},
              {"percent_gap", r.percent_gap},
              {"fastest", r.fastest},
              {"slowest", r.slowest},
              {"skipped_frames", r.skipped_frames}};
    for (const auto& t : r.teams) {
        j["teams"].push_back({{"team", t.team},
                              {"targets", t.targets},
                              {"frames", t.frames},
                              {"mean", t.mean},
                              {"se", t.se},
                              {"mean_ms", t.mean_ms},
                              {"se_ms", t.se_ms}});
    }
    for (const auto& f : r.frames) {
        j["frames"].push_back({{"frame_id", f.frame_id},
                               {"team", f.team},
                               {"targets", f.targets},
                               {"mean", f.mean},
                               {"mean_ms", f.mean_ms}});
    }
    if (r.anova) {
        j["anova"] = {{"F", r.anova->f},
                      {"p", r.anova->p_value},
                      {"df_between", r.anova->df_between},
                      {"df_within", r.anova->df_within}};
    } else {
        j["anova"] = nullptr;
        j["anova_note"] = r.anova_note;
    }
    emit(a.common, dump(j));
    auto& err = summary(a.common);
    err << "fairness: " << l.set.targets.size() << " targets, " << r.skipped_frames
        << " frames without targets skipped\n";
    for (const auto& t : r.teams) {
        err << "  " << t.team << ": " << t.mean_ms << " +/- " << t.se_ms << " ms (normalized "
            << t.mean << ")\n";
    }
    err << "  gap " << r.percent_gap << "% (" << r.slowest << " slower than " << r.fastest << ")";
    if (r.anova) {
        err << ", ANOVA F=" << r.anova->f << " p=" << r.anova->p_value;
    } else {
        err << ", ANOVA skipped: " << r.anova_note;
    }
    err << "\n";
    return 0;
}

int cmd_fov_sweep(const TargetsArgs& a) {
    const auto l = load_targets(a);
    saclat::fairness::SweepResult r;
    try {
        r = saclat::fairness::fov_sweep(l.set.targets, l.model, *l.display, a.sweep);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    json j = {{"anchor_ms", a.anchor_ms},
              {"teams", r.teams},
              {"rows", json::array()},
              {"optima", json::array()},
              {"degenerate", r.degenerate},
              {"crossing", nullptr}};
    for (const auto& row : r.rows) {
        json means = json::object();
        json ms = json::object();
        for (std::size_t k = 0; k < r.teams.size(); ++k) {
            means[r.teams[k]] = row.team_means[k];
            ms[r.teams[k]] = row.team_means[k] * a.anchor_ms;
        }
        j["rows"].push_back({{"fov_deg", row.fov_deg},
                             {"distance_cm", row.distance_cm},
                             {"diopters", row.diopters},
                             {"mean", means},
                             {"mean_ms", ms}});
    }
    for (const auto& o : r.optima) {
        j["optima"].push_back({{"team", o.team},
                               {"fov_deg", o.fov_deg},
                               {"diopters", o.diopters},
                               {"mean", o.mean},
                               {"mean_ms", o.mean * a.anchor_ms}});
    }
    if (r.crossing) {
        j["crossing"] = {{"fov_deg", r.crossing->fov_deg},
                         {"diopters", r.crossing->diopters},
                         {"mean", r.crossing->mean},
                         {"mean_ms", r.crossing->mean * a.anchor_ms}};
    }
    emit(a.common, dump(j));
    if (!a.table.empty()) {
        std::ostringstream os;
        std::vector<std::string> header{"fov_deg", "distance_cm", "diopters"};
        for (const auto& t : r.teams) {
            header.push_back(t + "_mean");
        }
        saclat::io::write_row(os, header);
        for (const auto& row : r.rows) {
            std::vector<std::string> fields{format_double(row.fov_deg), format_double(row.distance_cm),
                                            format_double(row.diopters)};
            for (double m : row.team_means) {
                fields.push_back(format_double(m));
            }
            saclat::io::write_row(os, fields);
        }
        write_file(a.table, os.str());
    }
    auto& err = summary(a.common);
    err << "fov-sweep: " << r.rows.size() << " fields of view from " << a.sweep.fov_min << " to "
        << a.sweep.fov_max << " deg\n";
    for (const auto& o : r.optima) {
        err << "  " << o.team << ": minimum " << o.mean * a.anchor_ms << " ms at " << o.fov_deg
            << " deg (" << o.diopters << " D)\n";
    }
    if (r.degenerate) {
        err << "  curves coincide: crossing degenerate\n";
    } else if (r.crossing) {
        err << "  curves cross at " << r.crossing->fov_deg << " deg (" << r.crossing->diopters
            << " D)\n";
    } else {
        err << "  curves do not cross in range\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Saccade latency model: fitting, prediction, simulation and analysis"};
    app.require_subcommand(1);

    FitRateArgs fit;
    auto* c_fit = app.add_subcommand("fit-rate", "Normalize latencies, label conditions, train the rate network");
    add_common(c_fit, fit.common);
    c_fit->add_option("trials", fit.trials, "Latency CSV")->required();
    c_fit->add_option("--pedestal", fit.pedestal, "Pedestal condition_id")->required();
    c_fit->add_option("--epochs", fit.train.epochs)->capture_default_str();
    c_fit->add_option("--learning-rate", fit.train.learning_rate)->capture_default_str();
    c_fit->add_option("--centers", fit.train.n_centers)->capture_default_str();
    c_fit->add_option("--normalized-out", fit.normalized_out, "Also write the normalized CSV");

    PredictArgs pred;
    auto* c_pred = app.add_subcommand("predict", "Latency distribution for one stimulus");
    add_common(c_pred, pred.common);
    c_pred->add_option("model", pred.model, "model.json")->required();
    c_pred->add_option("--contrast", pred.x.contrast)->required();
    c_pred->add_option("--frequency", pred.x.frequency, "cycles/degree")->required();
    c_pred->add_option("--eccentricity", pred.x.eccentricity, "degrees")->required();
    auto* o_alpha = c_pred->add_option("--alpha", pred.alpha, "Evidence threshold");
    auto* o_cal = c_pred->add_option("--calibrate", pred.calibrate, "CSV with a task latency sample");
    o_alpha->excludes(o_cal);
    c_pred->add_option("--calibrate-column", pred.calibrate_column)->capture_default_str();
    c_pred->add_option("--calib-contrast", pred.calib_contrast);
    c_pred->add_option("--calib-frequency", pred.calib_frequency);
    c_pred->add_option("--calib-eccentricity", pred.calib_eccentricity);
    c_pred->add_option("--quantiles", pred.quantiles)->delimiter(',');
    c_pred->add_option("--format", pred.format)->check(CLI::IsMember({"json", "table"}));

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Euler-Maruyama first-passage times");
    add_common(c_sim, sim.common);
    c_sim->add_option("--alpha", sim.alpha)->capture_default_str();
    c_sim->add_option("--nu", sim.nu)->capture_default_str();
    c_sim->add_option("--n", sim.n)->capture_default_str();
    c_sim->add_option("--dt", sim.dt)->capture_default_str();
    c_sim->add_option("--max-time", sim.max_time);
    c_sim->add_flag("--analytic", sim.analytic, "Also draw exact samples and compare");
    c_sim->add_option("--threads", sim.threads)->capture_default_str();
    c_sim->add_option("--summary", sim.summary_path, "Write a JSON summary here");

    DetectArgs det;
    auto* c_det = app.add_subcommand("detect", "Primary-saccade latencies from gaze traces");
    add_common(c_det, det.common);
    c_det->add_option("gaze", det.gaze, "Gaze CSV")->required();
    c_det->add_option("trials", det.trials, "Trials CSV")->required();
    c_det->add_option("--lambda", det.params.lambda)->capture_default_str();
    c_det->add_option("--min-duration", det.params.min_duration)->capture_default_str();
    c_det->add_option("--merge-gap", det.params.merge_gap)->capture_default_str();
    c_det->add_option("--tolerance", det.tolerance, "degrees")->capture_default_str();

    DualFitArgs dual;
    auto* c_dual = app.add_subcommand("dual-fit", "Maximum-likelihood dual-task thresholds");
    add_common(c_dual, dual.common);
    c_dual->add_option("trials", dual.trials, "Dual-task trials CSV")->required();
    c_dual->add_option("--model", dual.model, "model.json (for c_f, c_p columns)");
    c_dual->add_option("--frequency", dual.frequency)->capture_default_str();
    c_dual->add_option("--foveal-eccentricity", dual.foveal_eccentricity)->capture_default_str();
    c_dual->add_option("--peripheral-eccentricity", dual.peripheral_eccentricity)->capture_default_str();
    c_dual->add_option("--restarts", dual.restarts)->capture_default_str();

    TargetsArgs fair;
    auto* c_fair = app.add_subcommand("fairness", "Per-team predicted latency of on-screen targets");
    add_common(c_fair, fair.common);
    c_fair->add_option("targets", fair.targets, "targets.json")->required();
    c_fair->add_option("--model", fair.model)->required();
    c_fair->add_option("--display", fair.display, "display.json")->required();
    c_fair->add_option("--mean-latency-ms", fair.anchor_ms)->capture_default_str();
    c_fair->add_option("--teams", fair.teams, "Allowed team labels")->delimiter(',');

    TargetsArgs sweep;
    auto* c_sweep = app.add_subcommand("fov-sweep", "Per-team latency across fields of view");
    add_common(c_sweep, sweep.common);
    c_sweep->add_option("targets", sweep.targets, "targets.json")->required();
    c_sweep->add_option("--model", sweep.model)->required();
    c_sweep->add_option("--display", sweep.display, "display.json")->required();
    c_sweep->add_option("--mean-latency-ms", sweep.anchor_ms)->capture_default_str();
    c_sweep->add_option("--fov-min", sweep.sweep.fov_min)->capture_default_str();
    c_sweep->add_option("--fov-max", sweep.sweep.fov_max)->capture_default_str();
    c_sweep->add_option("--steps", sweep.sweep.steps)->capture_default_str();
    c_sweep->add_option("--table", sweep.table, "Also write the sweep table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*c_fit) return cmd_fit_rate(fit);
        if (*c_pred) return cmd_predict(pred);
        if (*c_sim) return cmd_simulate(sim);
        if (*c_det) return cmd_detect(det);
        if (*c_dual) return cmd_dual_fit(dual);
        if (*c_fair) return cmd_fairness(fair);
        if (*c_sweep) return cmd_fov_sweep(sweep);
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
