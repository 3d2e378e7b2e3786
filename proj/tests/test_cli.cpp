// SPDX-License-Identifier: Apache-2.0
//
// ris-lab: mutual coupling models for RIS-aided links
// Copyright (C) 2026 The ris-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rislab/beamforming.hpp"
#include "rislab/cli.hpp"
#include "rislab/fitting.hpp"
#include "rislab/io.hpp"

#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <random>
#include <sstream>

using namespace rislab;
namespace fs = std::filesystem;

namespace
{
struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "ris-lab");
    std::vector<const char *> argv;
    for (const std::string &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch()
{
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / ("rislab-cli-" + std::to_string(std::random_device{}()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path(const std::string &name) { return (scratch() / name).string(); }

std::string slurp(const std::string &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string &p, const std::string &text) { std::ofstream(p, std::ios::binary) << text; }

std::string preset(const std::string &name) { return test::preset_path(name).string(); }

PatternTrace read_trace(const std::string &p)
{
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    std::vector<double> el;
    std::vector<Complex<double>> field;
    while (std::getline(in, line))
    {
        std::istringstream row(line);
        std::string a, re, im;
        std::getline(row, a, ',');
        std::getline(row, re, ',');
        std::getline(row, im, ',');
        el.push_back(std::stod(a));
        field.emplace_back(std::stod(re), std::stod(im));
    }
    return make_trace(PatternGrid(el), Eigen::Map<VectorXcd>(field.data(), Index(field.size())));
}

std::vector<std::vector<std::string>> read_rows(const std::string &p)
{
    std::istringstream in(slurp(p));
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line))
    {
        std::vector<std::string> f;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ','))
            f.push_back(cell);
        rows.push_back(f);
    }
    return rows;
}

nlohmann::json load_preset_json(const std::string &name) { return nlohmann::json::parse(slurp(preset(name))); }

std::string write_config(const std::string &name, const nlohmann::json &j)
{
    const std::string p = path(name);
    spit(p, j.dump());
    return p;
}
} // namespace

TEST_CASE("usage and configuration errors")
{
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"bogus"}).code == kExitUsage);
    CHECK(run({"pattern", "--config", preset("p1")}).code == kExitUsage);

    nlohmann::json j = load_preset_json("p1");
    j["feed"]["typo"] = 1;
    Run r = run({"pattern", "--config", write_config("typo.json", j), "--out", path("x.csv")});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("feed.typo") != std::string::npos);

    j = load_preset_json("p1");
    j["coupling"].erase("h_m");
    const std::string no_h = write_config("no_h.json", j);
    r = run({"pattern", "--config", no_h, "--with-mc", "--out", path("x.csv")});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("coupling.h_m") != std::string::npos);
    CHECK(run({"pattern", "--config", no_h, "--no-mc", "--out", path("x.csv")}).code == kExitOk);

    j = load_preset_json("p1");
    j["array"]["spacing_m"] = -1;
    r = run({"pattern", "--config", write_config("neg.json", j), "--out", path("x.csv")});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("array.spacing_m") != std::string::npos);

    j = load_preset_json("p1");
    j.erase("frequency_hz");
    r = run({"pattern", "--config", write_config("nofreq.json", j), "--out", path("x.csv")});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("frequency_hz") != std::string::npos);

    r = run({"pattern", "--config", path("missing.json"), "--out", path("x.csv")});
    CHECK(r.code == kExitUsage);
    spit(path("broken.json"), "{\"array\": ");
    CHECK(run({"pattern", "--config", path("broken.json"), "--out", path("x.csv")}).code == kExitUsage);
}

TEST_CASE("pattern command")
{
    const std::string a = path("p3_mc.csv"), b = path("p3_conv.csv"), c = path("p3_mc_again.csv");
    REQUIRE(run({"pattern", "--config", preset("p3"), "--design", "quantized", "--with-mc", "--out", a}).code == 0);
    REQUIRE(run({"pattern", "--config", preset("p3"), "--design", "quantized", "--no-mc", "--out", b}).code == 0);
    REQUIRE(run({"pattern", "--config", preset("p3"), "--design", "quantized", "--with-mc", "--out", c}).code == 0);
    CHECK(slurp(a) == slurp(c));
    CHECK(slurp(a) != slurp(b));
    const double mc = *side_lobe_level(read_trace(a));
    const double conv = *side_lobe_level(read_trace(b));
    CHECK(mc >= conv);
    CHECK(read_rows(a).size() == 362);

    CHECK(run({"pattern", "--config", preset("p1"), "--design", "continuous", "--target-el", "15", "--out",
               path("steer.csv")})
              .code == 0);
    const PatternTrace steered = read_trace(path("steer.csv"));
    Index peak;
    steered.normalized_db.maxCoeff(&peak);
    CHECK(std::abs(steered.grid.elevations_deg()[peak] - 15) <= 0.5);
    CHECK(run({"pattern", "--config", preset("p1"), "--target-el", "95", "--out", path("x.csv")}).code == kExitUsage);
    CHECK(run({"pattern", "--config", preset("p1"), "--design", "analog", "--out", path("x.csv")}).code == kExitUsage);
}

TEST_CASE("fit command")
{
    // synthetic references at the shipped parameters
    std::vector<std::string> refs;
    for (const char *name : {"p1", "p2"})
    {
        const ScenarioConfig cfg = test::preset(name);
        const ReflectionState<double> theta =
            quantize_one_bit(continuous_phase_design(cfg.scenario, {90, 0}), cfg.unit_cells());
        const PatternGrid grid = PatternGrid::uniform(-90, 90, 1);
        const VectorXd samples = stack_samples(cfg.scenario, theta, cfg.coupling_model(), grid, SampleScale::db);
        const std::string p = path(std::string(name) + "_ref.csv");
        write_file_atomic(p, [&](std::ostream &os) { write_reference_csv(os, grid, samples); });
        refs.push_back(p);
    }
    const std::string out = path("fit.json");
    const Run r = run({"fit", "--config", preset("p1"), "--reference", refs[0], "--reference-config", preset("p1"),
                       "--reference", refs[1], "--reference-config", preset("p2"), "--scale", "field-db",
                       "--fit-scale", "db", "--steps-h", "11", "--steps-d", "11", "--h-min", "0.003", "--h-max",
                       "0.005", "--d-min", "0.009", "--d-max", "0.011", "--out", out});
    REQUIRE(r.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(slurp(out));
    CHECK(std::abs(doc["h_hat_m"].get<double>() - 0.0038) <= doc["grid"]["resolution_h_m"].get<double>());
    CHECK(std::abs(doc["d_hat_m"].get<double>() - 0.0102) <= doc["grid"]["resolution_d_m"].get<double>());
    CHECK(doc["residual"].get<double>() >= 0);
    CHECK(doc["references"].size() == 2);
    const std::string surface = doc["surface_csv_path"].get<std::string>();
    CHECK(read_rows(surface).size() == 12);

    CHECK(run({"fit", "--config", preset("p1"), "--out", path("empty.json")}).code == kExitUsage);

    spit(path("bad_ref.csv"), "theta_el_deg,value\n0,1\n1,0.5\n2,oops\n");
    const Run bad = run({"fit", "--config", preset("p1"), "--reference", path("bad_ref.csv"), "--out", path("b.json")});
    CHECK(bad.code == kExitData);
    CHECK(bad.err.find("bad_ref.csv:4") != std::string::npos);
    CHECK(run({"fit", "--config", preset("p1"), "--reference", path("nope.csv"), "--out", path("b.json")}).code ==
          kExitData);
    CHECK(run({"fit", "--config", preset("p1"), "--reference", refs[0], "--reference-config", preset("p1"),
               "--reference-config", preset("p2"), "--out", path("b.json")})
              .code == kExitUsage);
}

TEST_CASE("validate command")
{
    const ScenarioConfig cfg = test::preset("p3");
    const ReflectionState<double> theta =
        quantize_one_bit(continuous_phase_design(cfg.scenario, {90, 0}), cfg.unit_cells());
    const PatternGrid grid = PatternGrid::uniform(-80, 80, 0.5);
    const MatrixXcd s_ii = scattering_matrix(cfg.scenario.array, cfg.coupling_model(), cfg.scenario.frequency_hz);
    const VectorXd coupled = pattern_coupled(cfg.scenario, theta, s_ii, grid).normalized_magnitude();
    const VectorXd conventional = pattern_conventional(cfg.scenario, theta, grid).normalized_magnitude();

    auto report = [&](const VectorXd &ref, const std::string &name) {
        const std::string p = path(name + ".csv");
        write_file_atomic(p, [&](std::ostream &os) { write_reference_csv(os, grid, ref); });
        const std::string out = path(name + ".json");
        REQUIRE(run({"validate", "--config", preset("p3"), "--reference", p, "--scale", "linear", "--out", out}).code ==
                0);
        return nlohmann::json::parse(slurp(out));
    };

    const nlohmann::json self = report(coupled, "val_mc");
    CHECK(self["rms_db"]["coupled"].get<double>() <= 1e-9);
    CHECK(self["rms_db"]["conventional"].get<double>() > 0.1);
    CHECK(self["side_lobe_gap_db"]["coupled"].get<double>() == doctest::Approx(0).epsilon(1e-9));

    const nlohmann::json conv = report(conventional, "val_conv");
    CHECK(conv["rms_db"]["conventional"].get<double>() <= 1e-9);

    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0, 0.01);
    VectorXd noisy = coupled;
    for (Index i = 0; i < noisy.size(); ++i)
        noisy(i) = std::max(0.0, noisy(i) * (1 + noise(rng)));
    const nlohmann::json measured = report(noisy, "val_noisy");
    CHECK(measured["rms_db"]["coupled"].get<double>() < measured["rms_db"]["conventional"].get<double>());
}

TEST_CASE("rate-sweep command")
{
    const std::string a = path("amp.csv");
    REQUIRE(run({"rate-sweep", "--config", preset("p1"), "--mode", "amplification", "--out", a}).code == 0);
    const auto rows = read_rows(a);
    REQUIRE(rows.size() == 101);
    CHECK(rows[0] == std::vector<std::string>{"design", "frequency_hz", "p", "rate_no_mc_bpshz", "rate_mc_bpshz",
                                              "gap_bpshz"});
    double previous = 0;
    for (std::size_t i = 1; i <= 50; ++i)
    {
        CHECK(rows[i][0] == "quantized");
        const double gap = std::stod(rows[i][5]);
        CHECK(gap >= previous);
        previous = gap;
    }
    const std::string again = path("amp_again.csv");
    REQUIRE(run({"rate-sweep", "--config", preset("p1"), "--out", again}).code == 0);
    CHECK(slurp(a) == slurp(again));

    const std::string f = path("freq.csv");
    REQUIRE(run({"rate-sweep", "--config", preset("p1"), "--mode", "frequency", "--scenario", preset("p1"),
                 "--scenario", preset("p2"), "--scenario", preset("p3"), "--out", f})
                .code == 0);
    CHECK(read_rows(f).size() == 7);
    REQUIRE(run({"rate-sweep", "--config", preset("p1"), "--mode", "frequency", "--out", path("freq2.csv")}).code ==
            0);
    CHECK(slurp(f) == slurp(path("freq2.csv")));

    CHECK(run({"rate-sweep", "--config", preset("p1"), "--p", "1,0.5", "--out", path("x.csv")}).code == kExitUsage);
    CHECK(run({"rate-sweep", "--config", preset("p1"), "--mode", "time", "--out", path("x.csv")}).code == kExitUsage);
    const Run listed = run({"rate-sweep", "--config", preset("p1"), "--p", "1,2,4", "--out", path("list.csv")});
    CHECK(listed.code == 0);
    CHECK(read_rows(path("list.csv")).size() == 7);
}

TEST_CASE("convert command")
{
    spit(path("z.csv"), "row,col,re,im\n0,0,50,0\n1,1,50,0\n");
    REQUIRE(run({"convert", "--matrix", path("z.csv"), "--direction", "z2s", "--z0", "50", "--out", path("s.csv")})
                .code == 0);
    std::ifstream s_in(path("s.csv"));
    const MatrixXcd s = read_complex_matrix_csv(s_in, "s.csv");
    CHECK(s.rows() == 2);
    CHECK(s.isZero(1e-14));

    spit(path("s13.csv"), "row,col,re,im\n0,0,0.33333333333333331,0\n");
    REQUIRE(run({"convert", "--matrix", path("s13.csv"), "--direction", "s2z", "--out", path("z13.csv")}).code == 0);
    std::ifstream z_in(path("z13.csv"));
    CHECK(read_complex_matrix_csv(z_in, "z13.csv")(0, 0).real() == doctest::Approx(100).epsilon(1e-14));

    // round trip
    std::mt19937_64 rng(8);
    MatrixXcd z = test::random_matrix(rng, 6, 6, 4);
    z = (z + z.transpose()).eval() / 2.0;
    z.diagonal().array() += 50.0;
    write_file_atomic(path("zr.csv"), [&](std::ostream &os) { write_complex_matrix_csv(os, z); });
    REQUIRE(run({"convert", "--matrix", path("zr.csv"), "--direction", "z2s", "--out", path("sr.csv")}).code == 0);
    REQUIRE(run({"convert", "--matrix", path("sr.csv"), "--direction", "s2z", "--out", path("zr2.csv")}).code == 0);
    std::ifstream back(path("zr2.csv"));
    CHECK(test::rel_frobenius(read_complex_matrix_csv(back, "zr2.csv"), z) <= 1e-10);

    spit(path("sing.csv"), "row,col,re,im\n0,0,1,0\n1,1,1,0\n");
    CHECK(run({"convert", "--matrix", path("sing.csv"), "--direction", "s2z", "--out", path("never.csv")}).code ==
          kExitNumerical);
    spit(path("junk.csv"), "row,col,re,im\n0,0,abc,0\n");
    const Run junk = run({"convert", "--matrix", path("junk.csv"), "--direction", "z2s", "--out", path("never.csv")});
    CHECK(junk.code == kExitData);
    CHECK(junk.err.find("junk.csv:2") != std::string::npos);
    CHECK(run({"convert", "--matrix", path("z.csv"), "--direction", "sideways", "--out", path("never.csv")}).code ==
          kExitUsage);
    CHECK_FALSE(fs::exists(path("never.csv")));
}
