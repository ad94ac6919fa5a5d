#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "saclat/io/csv.hpp"
#include "saclat/io/dataset_csv.hpp"
#include "saclat/io/model_json.hpp"
#include "saclat/io/targets_json.hpp"
#include "support/cli_runner.hpp"
#include "support/synthetic_dual.hpp"
#include "support/synthetic_gaze.hpp"
#include "support/synthetic_pilot.hpp"

namespace {

using nlohmann::json;
using testsupport::CliResult;
using testsupport::ScratchDir;

class Cli : public ::testing::Test {
protected:
    Cli() : dir_(::testing::UnitTest::GetInstance()->current_test_info()->name()) {}

    CliResult run(const std::string& args) const { return testsupport::run_cli(SACLAT_CLI, args, dir_); }
    std::string at(const std::string& name) const { return dir_ / name; }
    void write(const std::string& name, const std::string& text) const { testsupport::spit(at(name), text); }
    std::string read(const std::string& name) const { return testsupport::slurp(at(name)); }

    /// Network whose rate is exactly 1 at `x` (single center on it).
    void write_unit_model(const std::string& name, const saclat::StimulusFeatures& x) const {
        saclat::RateModel m;
        const auto s = m.network.scale(x);
        m.network.centers = {s};
        m.network.widths = {0.7};
        m.network.weights = {1.0};
        write(name, saclat::io::to_json(m).dump(2));
    }

    ScratchDir dir_;
};

std::string pilot_csv(std::uint64_t seed) {
    std::ostringstream os;
    saclat::io::write_dataset_csv(os, testsupport::make_pilot({5, 100, seed}));
    return os.str();
}

TEST_F(Cli, UnknownSubcommandIsUsageError) {
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, FitRateRecoversGeneratorSurface) {
    write("pilot.csv", pilot_csv(3));
    const auto r = run("fit-rate " + at("pilot.csv") + " --pedestal " + testsupport::kPedestalId +
                       " --seed 7 --out " + at("model.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(read("model.json"));
    EXPECT_EQ(j["training"]["seed"], 7);
    EXPECT_EQ(j["training"]["conditions"], 45);
    EXPECT_LT(j["training"]["final_mse"].get<double>(), 1e-3);
    const auto model = saclat::io::model_from_json(j);
    double se = 0.0;
    const auto grid = testsupport::pilot_grid();
    for (const auto& g : grid) {
        const double truth = 1.0 / testsupport::true_normalized_mean(g.x);
        const double got = saclat::rbf::eval(model.network, g.x);
        se += (got - truth) * (got - truth);
    }
    EXPECT_LT(se / grid.size(), 1e-3);
    EXPECT_NE(r.err.find("fit-rate:"), std::string::npos);
}

TEST_F(Cli, FitRateIsByteIdenticalPerSeed) {
    write("pilot.csv", pilot_csv(4));
    const std::string base = "fit-rate " + at("pilot.csv") + " --pedestal " + testsupport::kPedestalId +
                             " --epochs 300 --quiet --seed ";
    ASSERT_EQ(run(base + "11 --out " + at("a.json")).code, 0);
    ASSERT_EQ(run(base + "11 --out " + at("b.json")).code, 0);
    ASSERT_EQ(run(base + "12 --out " + at("c.json")).code, 0);
    EXPECT_EQ(read("a.json"), read("b.json"));
    EXPECT_NE(read("a.json"), read("c.json"));
}

TEST_F(Cli, FitRateRejectsBadInput) {
    write("empty.csv", "");
    EXPECT_EQ(run("fit-rate " + at("empty.csv") + " --pedestal x").code, 2);
    write("header.csv",
          "subject_id,block_id,condition_id,contrast,frequency_cpd,eccentricity_deg,latency_ms\n");
    EXPECT_EQ(run("fit-rate " + at("header.csv") + " --pedestal x").code, 2);
    write("pilot.csv", pilot_csv(5));
    EXPECT_EQ(run("fit-rate " + at("pilot.csv") + " --pedestal no_such_condition").code, 2);
    EXPECT_EQ(run("fit-rate " + at("pilot.csv")).code, 2);
    EXPECT_EQ(run("fit-rate " + at("missing.csv") + " --pedestal x").code, 2);
    write("bad.csv",
          "subject_id,block_id,condition_id,contrast,frequency_cpd,eccentricity_deg,latency_ms\n"
          "s1,b1,c,0.5,abc,0,250\n");
    EXPECT_EQ(run("fit-rate " + at("bad.csv") + " --pedestal c").code, 2);
}

TEST_F(Cli, PredictUnitRateAndThreshold) {
    write_unit_model("unit.json", {0.5, 2.0, 10.0});
    const auto r = run("predict " + at("unit.json") +
                       " --contrast 0.5 --frequency 2 --eccentricity 10 --alpha 1");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["nu"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j["mean"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j["variance"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(j["threshold_source"], "alpha");
}

TEST_F(Cli, PredictQuantilesAreMonotone) {
    write_unit_model("unit.json", {0.5, 2.0, 10.0});
    const auto r = run("predict " + at("unit.json") +
                       " --contrast 0.3 --frequency 1 --eccentricity 5 --alpha 2 --quantiles 0.9,0.1,0.5,0.99,0.01");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto q = json::parse(r.out)["quantiles"];
    ASSERT_EQ(q.size(), 5u);
    for (std::size_t i = 1; i < q.size(); ++i) {
        EXPECT_GT(q[i]["level"].get<double>(), q[i - 1]["level"].get<double>());
        EXPECT_GT(q[i]["value"].get<double>(), q[i - 1]["value"].get<double>());
    }
    EXPECT_EQ(run("predict " + at("unit.json") +
                  " --contrast 0.3 --frequency 1 --eccentricity 5 --quantiles 1.5")
                  .code,
              2);
}

TEST_F(Cli, PredictTableFormat) {
    write_unit_model("unit.json", {0.5, 2.0, 10.0});
    const auto r = run("predict " + at("unit.json") +
                       " --contrast 0.5 --frequency 2 --eccentricity 10 --alpha 1 --format table --quantiles 0.5");
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    const auto t = saclat::io::read_csv(in);
    EXPECT_EQ(t.rows.size(), 5u);
    EXPECT_EQ(t.rows[2][0], "mean");
    EXPECT_NEAR(saclat::io::parse_double(t.rows[2][1]), 1.0, 1e-12);
}

TEST_F(Cli, PredictCalibrationRoundTrip) {
    write_unit_model("unit.json", {0.5, 2.0, 10.0});
    std::mt19937_64 rng(2);
    const saclat::IGParams truth{3.0, 12.0};
    std::string csv = "latency\n";
    double mean = 0.0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
        const double t = saclat::wald::sample(truth, rng);
        mean += t / n;
        csv += saclat::io::format_double(t) + "\n";
    }
    write("calib.csv", csv);
    const auto r = run("predict " + at("unit.json") + " --contrast 0.5 --frequency 2 --eccentricity 10 --calibrate " +
                       at("calib.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["mean"].get<double>() / mean, 1.0, 0.02);
    EXPECT_NEAR(j["alpha"].get<double>(), 3.0, 0.3);
    EXPECT_EQ(j["threshold_source"], "calibration");

    write("short.csv", "latency\n0.3\n");
    EXPECT_EQ(run("predict " + at("unit.json") + " --contrast 0.5 --frequency 2 --eccentricity 10 --calibrate " +
                  at("short.csv"))
                  .code,
              2);
}

TEST_F(Cli, PredictRejectsBadInputs) {
    write_unit_model("unit.json", {0.5, 2.0, 10.0});
    EXPECT_EQ(run("predict " + at("unit.json") + " --contrast -1 --frequency 2 --eccentricity 10").code, 2);
    EXPECT_EQ(run("predict " + at("unit.json") + " --contrast 0.5 --frequency 2").code, 2);
    EXPECT_EQ(run("predict " + at("unit.json") + " --contrast 0.5 --frequency 2 --eccentricity 1 --alpha 0").code, 2);
    write("broken.json", "{\"centers\": 3}");
    EXPECT_EQ(run("predict " + at("broken.json") + " --contrast 0.5 --frequency 2 --eccentricity 10").code, 2);
}

TEST_F(Cli, SimulateZeroPathsIsHeaderOnly) {
    const auto r = run("simulate --n 0");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "source,index,time\n");
}

TEST_F(Cli, SimulateAgreesWithAnalyticAndIsDeterministic) {
    const auto a = run("simulate --analytic --threads 4 --seed 9 --summary " + at("s1.json"));
    ASSERT_EQ(a.code, 0) << a.err;
    const auto b = run("simulate --analytic --threads 2 --seed 9 --summary " + at("s2.json"));
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(read("s1.json"), read("s2.json"));
    const auto s = json::parse(read("s1.json"));
    EXPECT_EQ(s["n"], 10000);
    EXPECT_GT(s["ks_vs_analytic"]["p"].get<double>(), 0.01);
    EXPECT_GT(s["ks_vs_cdf"]["p"].get<double>(), 0.01);
    EXPECT_NE(a.err.find("p="), std::string::npos);
    std::istringstream in(a.out);
    EXPECT_EQ(saclat::io::read_csv(in).rows.size(), 20000u);
}

TEST_F(Cli, SimulateRejectsBadParameters) {
    EXPECT_EQ(run("simulate --alpha -1").code, 2);
    EXPECT_EQ(run("simulate --dt 0").code, 2);
}

std::string gaze_csv(const std::vector<testsupport::LabeledTrial>& corpus) {
    std::string s = "trial_id,t_ms,x_deg,y_deg\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (const auto& p : corpus[i].trace.samples) {
            s += "t" + std::to_string(i) + "," + saclat::io::format_double(p.t * 1000.0) + "," +
                 saclat::io::format_double(p.x) + "," + saclat::io::format_double(p.y) + "\n";
        }
    }
    return s;
}

std::string trials_csv(const std::vector<testsupport::LabeledTrial>& corpus) {
    std::string s = "trial_id,onset_ms,origin_x,origin_y,target1_x,target1_y\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& t = corpus[i].trial;
        s += "t" + std::to_string(i) + "," + saclat::io::format_double(t.stimulus_onset * 1000.0) + "," +
             saclat::io::format_double(t.origin.x) + "," + saclat::io::format_double(t.origin.y) + "," +
             saclat::io::format_double(t.targets[0].x) + "," + saclat::io::format_double(t.targets[0].y) + "\n";
    }
    return s;
}

TEST_F(Cli, DetectRecoversCorpusLatencies) {
    const auto corpus = testsupport::make_corpus(200, 77);
    write("gaze.csv", gaze_csv(corpus));
    write("trials.csv", trials_csv(corpus));
    const auto r = run("detect " + at("gaze.csv") + " " + at("trials.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    const auto t = saclat::io::read_csv(in);
    ASSERT_EQ(t.rows.size(), corpus.size());
    const std::size_t id = t.column("trial_id");
    const std::size_t lat = t.column("latency_ms");
    const std::size_t st = t.column("status");
    std::size_t hits = 0;
    for (const auto& row : t.rows) {
        const auto& lt = corpus[std::stoul(row[id].substr(1))];
        if (row[st] == "ok") {
            const double err_ms =
                saclat::io::parse_double(row[lat]) - (lt.true_onset - lt.trial.stimulus_onset) * 1000.0;
            hits += std::abs(err_ms) <= 1000.0 / 120.0 + 1e-6 ? 1 : 0;
        }
    }
    EXPECT_GE(static_cast<double>(hits) / corpus.size(), 0.98);
}

TEST_F(Cli, DetectReportsTrialsWithoutGazeAsNoSaccade) {
    const auto corpus = testsupport::make_corpus(2, 1);
    write("gaze.csv", gaze_csv({corpus[0]}));
    write("trials.csv", trials_csv(corpus));
    const auto r = run("detect " + at("gaze.csv") + " " + at("trials.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    const auto t = saclat::io::read_csv(in);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][t.column("status")], "ok");
    EXPECT_EQ(t.rows[1][t.column("status")], "no_saccade");
    EXPECT_EQ(t.rows[1][t.column("latency_ms")], "");
}

TEST_F(Cli, DetectToleranceFlagIsHonoured) {
    // The saccade lands 4 degrees off target: a miss at 3 degrees, a hit at 5.
    std::mt19937_64 rng(3);
    testsupport::LabeledTrial lt;
    lt.trace = testsupport::make_trace(0.0, 0.8, 120.0, {{0.3, 0.04, {0.0, 0.0}, {10.0, 4.0}}}, 0.05, rng);
    lt.trial = {0.1, {0.0, 0.0}, {{10.0, 0.0}}};
    write("gaze.csv", gaze_csv({lt}));
    write("trials.csv", trials_csv({lt}));
    const auto narrow = run("detect " + at("gaze.csv") + " " + at("trials.csv"));
    const auto wide = run("detect " + at("gaze.csv") + " " + at("trials.csv") + " --tolerance 5");
    ASSERT_EQ(narrow.code, 0);
    ASSERT_EQ(wide.code, 0);
    EXPECT_NE(narrow.out.find("no_saccade"), std::string::npos);
    EXPECT_NE(wide.out.find(",ok"), std::string::npos);
}

TEST_F(Cli, DetectRejectsMalformedInput) {
    write("gaze.csv", "trial_id,t_ms,x_deg,y_deg\nt0,10,0,0\nt0,5,0,0\n");
    write("trials.csv", "trial_id,onset_ms,origin_x,origin_y,target1_x,target1_y\nt0,0,0,0,10,0\n");
    EXPECT_EQ(run("detect " + at("gaze.csv") + " " + at("trials.csv")).code, 2);
    write("gaze2.csv", "trial_id,t_ms,x_deg\nt0,10,0\n");
    EXPECT_EQ(run("detect " + at("gaze2.csv") + " " + at("trials.csv")).code, 2);
    write("gaze3.csv", "trial_id,t_ms,x_deg,y_deg\nt0,10,0,0\n");
    EXPECT_EQ(run("detect " + at("gaze3.csv") + " " + at("trials.csv") + " --lambda 0").code, 2);
}

std::string dual_csv(const std::vector<saclat::dual::Trial>& trials) {
    std::string s = "t_norm,nu_f,nu_p\n";
    for (const auto& t : trials) {
        s += saclat::io::format_double(t.t) + "," + saclat::io::format_double(t.nu_f) + "," +
             saclat::io::format_double(t.nu_p) + "\n";
    }
    return s;
}

TEST_F(Cli, DualFitRecoversThresholdsAndRejectsSingles) {
    write("dual.csv", dual_csv(testsupport::make_dual_trials(10000, 21)));
    const auto r = run("dual-fit " + at("dual.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["conditions"], 16);
    EXPECT_NEAR(j["alpha_f"].get<double>(), testsupport::kDualAlphaF, 0.05 * testsupport::kDualAlphaF);
    EXPECT_NEAR(j["alpha_p"].get<double>(), testsupport::kDualAlphaP, 0.05 * testsupport::kDualAlphaP);
    EXPECT_GT(j["ks_dual"]["p"].get<double>(), 0.01);
    for (const auto* name : {"foveal_only", "peripheral_only"}) {
        EXPECT_LT(j["baselines"][name]["ks"]["p"].get<double>(), 0.01) << name;
        EXPECT_LT(j["baselines"][name]["log_likelihood"].get<double>(), j["log_likelihood"].get<double>());
    }
}

TEST_F(Cli, DualFitResolvesContrastColumnsThroughModel) {
    write_unit_model("unit.json", {0.5, 2.0, 10.0});
    write("dual.csv", "t_norm,c_f,c_p\n0.9,0.5,0.2\n1.3,0.5,0.5\n1.1,0.2,0.5\n2.0,0.2,0.2\n");
    EXPECT_EQ(run("dual-fit " + at("dual.csv") + " --model " + at("unit.json")).code, 0);
    EXPECT_EQ(run("dual-fit " + at("dual.csv")).code, 2);
}

TEST_F(Cli, DualFitRejectsMalformedCsv) {
    write("a.csv", "t_norm,nu_f\n1.0,2.0\n");
    EXPECT_EQ(run("dual-fit " + at("a.csv")).code, 2);
    write("b.csv", "t_norm,nu_f,nu_p\n1.0,2.0,x\n1.2,2.0,3.0\n");
    EXPECT_EQ(run("dual-fit " + at("b.csv")).code, 2);
    write("c.csv", "t_norm,nu_f,nu_p\n-1.0,2.0,3.0\n1.2,2.0,3.0\n");
    EXPECT_EQ(run("dual-fit " + at("c.csv")).code, 2);
    write("d.csv", "t_norm,nu_f,nu_p\n1.0,2.0,3.0,4.0\n");
    EXPECT_EQ(run("dual-fit " + at("d.csv")).code, 2);
}

json two_team_targets(std::uint64_t seed, double tr_frequency_gain) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> x(30.0, 1850.0);
    std::uniform_real_distribution<double> y(30.0, 1010.0);
    std::uniform_real_distribution<double> f(0.2, 1.2);
    json arr = json::array();
    for (int frame = 0; frame < 12; ++frame) {
        for (const char* team : {"CT", "TR"}) {
            const double gain = std::string(team) == "TR" ? tr_frequency_gain : 1.0;
            arr.push_back({{"frame_id", "f" + std::to_string(frame)},
                           {"team", team},
                           {"bbox", {x(rng), y(rng), 40, 40}},
                           {"target_luminance", 0.6},
                           {"background_luminance", 0.3},
                           {"frequency_cpcm", f(rng) * gain}});
        }
    }
    arr.push_back({{"frame_id", "empty_frame"}});
    return arr;
}

void write_display(const Cli&, const std::string& path) {
    testsupport::spit(path, R"({"width_cm": 60, "width_px": 1920, "height_px": 1080, "fov_deg": 50})");
}

TEST_F(Cli, FairnessReportShape) {
    write_unit_model("model.json", {1.0, 0.5, 10.0});
    write_display(*this, at("display.json"));
    write("targets.json", two_team_targets(1, 2.0).dump());
    const auto r = run("fairness " + at("targets.json") + " --model " + at("model.json") + " --display " +
                       at("display.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    ASSERT_EQ(j["teams"].size(), 2u);
    EXPECT_EQ(j["slowest"], "TR");
    EXPECT_EQ(j["skipped_frames"], 1);
    EXPECT_EQ(j["frames"].size(), 24u);
    EXPECT_TRUE(j["anova"].is_object());
    for (const auto& t : j["teams"]) {
        EXPECT_DOUBLE_EQ(t["mean_ms"].get<double>(), 282.0 * t["mean"].get<double>());
    }
}

TEST_F(Cli, FairnessIsInvariantToInputOrder) {
    write_unit_model("model.json", {1.0, 0.5, 10.0});
    write_display(*this, at("display.json"));
    auto targets = two_team_targets(2, 1.5);
    write("a.json", targets.dump());
    std::vector<json> items(targets.begin(), targets.end());
    std::mt19937_64 rng(1);
    std::shuffle(items.begin(), items.end(), rng);
    write("b.json", json(items).dump());
    const std::string tail = " --model " + at("model.json") + " --display " + at("display.json") + " --quiet";
    const auto a = run("fairness " + at("a.json") + tail);
    const auto b = run("fairness " + at("b.json") + tail);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto sa = run("fov-sweep " + at("a.json") + tail + " --steps 21");
    const auto sb = run("fov-sweep " + at("b.json") + tail + " --steps 21");
    ASSERT_EQ(sa.code, 0) << sa.err;
    EXPECT_EQ(sa.out, sb.out);
}

TEST_F(Cli, FairnessAcceptsPatchAndRetinalFrequencies) {
    write_unit_model("model.json", {1.0, 0.5, 10.0});
    write_display(*this, at("display.json"));
    saclat::Image patch(64, 64);
    for (std::size_t y = 0; y < 64; ++y) {
        for (std::size_t x = 0; x < 64; ++x) {
            patch.at(x, y) = 0.5 + 0.4 * std::sin(2.0 * M_PI * static_cast<double>(x) / 8.0);
        }
    }
    std::ostringstream pgm;
    saclat::io::write_pgm(pgm, patch);
    write("patch.pgm", pgm.str());
    json arr = json::array();
    arr.push_back({{"frame_id", "a"}, {"team", "CT"}, {"bbox", {100, 100, 64, 64}},
                   {"target_luminance", 0.6}, {"background_luminance", 0.3}, {"patch", "patch.pgm"}});
    arr.push_back({{"frame_id", "a"}, {"team", "TR"}, {"bbox", {1500, 700, 64, 64}},
                   {"target_luminance", 0.6}, {"background_luminance", 0.3}, {"frequency_cpd", 2.0}});
    write("targets.json", arr.dump());
    const auto r = run("fairness " + at("targets.json") + " --model " + at("model.json") + " --display " +
                       at("display.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(json::parse(r.out)["anova"].is_null());
}

TEST_F(Cli, FairnessRejectsBadInputs) {
    write_unit_model("model.json", {1.0, 0.5, 10.0});
    write_display(*this, at("display.json"));
    write("targets.json", two_team_targets(3, 1.0).dump());
    const std::string tail = " --model " + at("model.json") + " --display " + at("display.json");
    EXPECT_EQ(run("fairness " + at("targets.json") + tail + " --teams CT,T").code, 2);
    EXPECT_EQ(run("fairness " + at("targets.json") + tail + " --teams CT,TR").code, 0);
    EXPECT_EQ(run("fairness " + at("targets.json") + " --model " + at("model.json")).code, 2);
    write("display2.json", R"({"width_cm": 60, "width_px": 1920, "height_px": 1080, "fov_deg": 50, "distance_cm": 40})");
    EXPECT_EQ(run("fairness " + at("targets.json") + " --model " + at("model.json") + " --display " +
                  at("display2.json"))
                  .code,
              2);
    write("none.json", R"([{"frame_id": "x"}])");
    EXPECT_EQ(run("fairness " + at("none.json") + tail).code, 2);
    write("twobox.json", R"([{"frame_id": "x", "team": "CT", "bbox": [1, 2, 3], "target_luminance": 0.5,
                             "background_luminance": 0.2, "frequency_cpcm": 1}])");
    EXPECT_EQ(run("fairness " + at("twobox.json") + tail).code, 2);
}

TEST_F(Cli, FovSweepTableAndDegenerateCurves) {
    write_unit_model("model.json", {1.0, 0.5, 10.0});
    write_display(*this, at("display.json"));
    // Two teams with the same targets: curves coincide.
    json arr = json::array();
    for (const char* team : {"CT", "TR"}) {
        arr.push_back({{"frame_id", "a"}, {"team", team}, {"bbox", {400, 300, 40, 40}},
                       {"target_luminance", 0.6}, {"background_luminance", 0.3}, {"frequency_cpcm", 0.8}});
    }
    write("targets.json", arr.dump());
    const auto r = run("fov-sweep " + at("targets.json") + " --model " + at("model.json") + " --display " +
                       at("display.json") + " --fov-min 30 --fov-max 90 --steps 13 --table " + at("sweep.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["degenerate"].get<bool>());
    EXPECT_TRUE(j["crossing"].is_null());
    EXPECT_EQ(j["rows"].size(), 13u);
    std::istringstream in(read("sweep.csv"));
    const auto t = saclat::io::read_csv(in);
    EXPECT_EQ(t.rows.size(), 13u);
    EXPECT_TRUE(t.has("CT_mean"));
    EXPECT_EQ(run("fov-sweep " + at("targets.json") + " --model " + at("model.json") + " --display " +
                  at("display.json") + " --fov-min 0")
                  .code,
              2);
}

}  // namespace
