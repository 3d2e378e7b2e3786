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

#include "rislab/cli.hpp"

#include "rislab/config.hpp"
#include "rislab/errors.hpp"
#include "rislab/fitting.hpp"
#include "rislab/io.hpp"
#include "rislab/rate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <sstream>

namespace rislab
{
namespace
{
using nlohmann::json;

enum class Design
{
    continuous,
    quantized
};

struct Steering
{
    double az = 90;
    double el = 0;

    Direction<double> direction() const
    {
        try
        {
            return {az, el};
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError("--target-el", e.what());
        }
    }
};

void add_steering(CLI::App &cmd, Steering &s)
{
    cmd.add_option("--target-az", s.az, "Beam azimuth in degrees")->capture_default_str();
    cmd.add_option("--target-el", s.el, "Beam elevation in degrees")->capture_default_str();
}

void add_design(CLI::App &cmd, Design &d)
{
    const std::map<std::string, Design> names{{"continuous", Design::continuous}, {"quantized", Design::quantized}};
    cmd.add_option("--design", d, "Phase design")->transform(CLI::CheckedTransformer(names, CLI::ignore_case));
}

ReflectionState<double> make_design(const ScenarioConfig &cfg, Design design, const Direction<double> &target)
{
    ReflectionState<double> state = continuous_phase_design(cfg.scenario, target);
    if (design == Design::quantized)
        state = quantize_one_bit(state, cfg.unit_cells());
    return state;
}

PatternTrace model_trace(const ScenarioConfig &cfg, const ReflectionState<double> &state, const PatternGrid &grid,
                         bool with_mc)
{
    if (!with_mc)
        return pattern_conventional(cfg.scenario, state, grid);
    const MatrixXcd s_ii = scattering_matrix(cfg.scenario.array, cfg.coupling_model(), cfg.scenario.frequency_hz);
    return pattern_coupled(cfg.scenario, state, s_ii, grid);
}

// ---- pattern ---------------------------------------------------------------

struct PatternArgs
{
    std::string config;
    std::string out;
    Design design = Design::quantized;
    bool with_mc = false;
    Steering target;
};

int cmd_pattern(const PatternArgs &a, std::ostream &out)
{
    const ScenarioConfig cfg = load_config(a.config);
    const ReflectionState<double> state = make_design(cfg, a.design, a.target.direction());
    const PatternTrace trace = model_trace(cfg, state, cfg.grid, a.with_mc);
    write_file_atomic(a.out, [&](std::ostream &os) { write_trace_csv(os, trace); });
    out << "wrote " << a.out << '\n';
    return kExitOk;
}

// ---- fit -------------------------------------------------------------------

struct FitArgs
{
    std::string config;
    std::string out;
    std::string surface;
    std::vector<std::string> references;
    std::vector<std::string> reference_configs;
    std::vector<std::string> scales;
    std::string fit_scale = "linear";
    Design design = Design::quantized;
    Steering target;
    Index steps_h = 100;
    Index steps_d = 100;
    std::optional<double> h_min, h_max, d_min, d_max;
    double search_frequency = 25e9;
    bool no_refine = false;
};

FileScale pick_scale(const std::vector<std::string> &scales, std::size_t i, std::size_t count)
{
    if (scales.empty())
        return FileScale::linear;
    if (scales.size() != 1 && scales.size() != count)
        throw ConfigError("--scale", "give one scale or one per reference");
    return parse_file_scale(scales.size() == 1 ? scales.front() : scales[i]);
}

std::string default_surface_path(const std::string &out)
{
    std::filesystem::path p(out);
    p.replace_extension();
    return p.string() + ".surface.csv";
}

int cmd_fit(const FitArgs &a, std::ostream &out)
{
    if (a.references.empty())
        throw ConfigError("--reference", "at least one reference pattern is required");
    if (!a.reference_configs.empty() && a.reference_configs.size() != a.references.size())
        throw ConfigError("--reference-config", "give one scenario per reference");
    if (a.config.empty() && a.reference_configs.empty())
        throw ConfigError("--config", "a scenario configuration is required");

    const SampleScale fit_scale = parse_sample_scale(a.fit_scale);
    std::optional<ScenarioConfig> main_cfg;
    if (!a.config.empty())
        main_cfg = load_config(a.config);

    std::vector<ReferencePattern> refs;
    for (std::size_t i = 0; i < a.references.size(); ++i)
    {
        const ScenarioConfig cfg = a.reference_configs.empty() ? *main_cfg : load_config(a.reference_configs[i]);
        const ReflectionState<double> theta = make_design(cfg, a.design, a.target.direction());
        refs.push_back(ingest_reference(a.references[i], pick_scale(a.scales, i, a.references.size()), fit_scale,
                                        cfg.scenario, theta));
    }

    SearchBox box = SearchBox::wavelength_span(a.search_frequency, 100);
    box.h_min = a.h_min.value_or(box.h_min);
    box.h_max = a.h_max.value_or(box.h_max);
    box.d_min = a.d_min.value_or(box.d_min);
    box.d_max = a.d_max.value_or(box.d_max);
    box.steps_h = a.steps_h;
    box.steps_d = a.steps_d;

    FitOptions options;
    options.scale = fit_scale;
    options.refine = !a.no_refine;
    options.model = main_cfg ? main_cfg->coupling_base() : load_config(a.reference_configs.front()).coupling_base();

    const FitResult r = fit_grid_search(refs, box, options);
    const std::string surface = a.surface.empty() ? default_surface_path(a.out) : a.surface;
    write_file_atomic(surface, [&](std::ostream &os) { write_surface_csv(os, r); });

    json doc;
    doc["h_hat_m"] = r.h_hat;
    doc["d_hat_m"] = r.d_hat;
    doc["residual"] = r.residual;
    doc["scale"] = std::string(to_string(fit_scale));
    doc["grid"] = {{"h_min_m", box.h_min},       {"h_max_m", box.h_max},       {"d_min_m", box.d_min},
                   {"d_max_m", box.d_max},       {"steps_h", box.steps_h},     {"steps_d", box.steps_d},
                   {"resolution_h_m", r.resolution_h}, {"resolution_d_m", r.resolution_d},
                   {"refined", r.refined},       {"excluded_points", r.excluded_points}};
    doc["surface_csv_path"] = surface;
    json list = json::array();
    for (std::size_t i = 0; i < a.references.size(); ++i)
        list.push_back({{"path", a.references[i]}, {"frequency_hz", refs[i].scenario.frequency_hz}});
    doc["references"] = list;
    write_file_atomic(a.out, [&](std::ostream &os) { os << doc.dump(2) << '\n'; });
    out << "wrote " << a.out << " and " << surface << '\n';
    return kExitOk;
}

// ---- validate --------------------------------------------------------------

struct ValidateArgs
{
    std::string config;
    std::string out;
    std::string reference;
    std::string scale = "linear";
    Design design = Design::quantized;
    Steering target;
};

double rms_db(const VectorXd &a, const VectorXd &b) { return std::sqrt((a - b).squaredNorm() / double(a.size())); }

json optional_db(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

int cmd_validate(const ValidateArgs &a, std::ostream &out)
{
    const ScenarioConfig cfg = load_config(a.config);
    const CouplingModel<double> model = cfg.coupling_model();
    const ReflectionState<double> theta = make_design(cfg, a.design, a.target.direction());
    const ReferencePattern ref =
        ingest_reference(a.reference, parse_file_scale(a.scale), SampleScale::db, cfg.scenario, theta);

    PatternTrace measured = make_trace(ref.grid, VectorXd(ref.samples.unaryExpr([](double db) {
                                                      return std::pow(10.0, db / 20.0);
                                                  })).cast<Complex<double>>());
    const MatrixXcd s_ii = scattering_matrix(cfg.scenario.array, model, cfg.scenario.frequency_hz);
    const PatternTrace coupled = pattern_coupled(cfg.scenario, theta, s_ii, ref.grid);
    const PatternTrace conventional = pattern_conventional(cfg.scenario, theta, ref.grid);

    const VectorXd coupled_db = to_scale(coupled.normalized_magnitude(), SampleScale::db);
    const VectorXd conventional_db = to_scale(conventional.normalized_magnitude(), SampleScale::db);
    const auto sll_ref = side_lobe_level(measured);
    const auto sll_mc = side_lobe_level(coupled);
    const auto sll_conv = side_lobe_level(conventional);
    auto gap = [&](const std::optional<double> &model_sll) {
        return model_sll && sll_ref ? json(*model_sll - *sll_ref) : json(nullptr);
    };

    json doc;
    doc["samples"] = ref.grid.size();
    doc["rms_db"] = {{"coupled", rms_db(coupled_db, ref.samples)},
                     {"conventional", rms_db(conventional_db, ref.samples)}};
    doc["side_lobe_db"] = {
        {"reference", optional_db(sll_ref)}, {"coupled", optional_db(sll_mc)}, {"conventional", optional_db(sll_conv)}};
    doc["side_lobe_gap_db"] = {{"coupled", gap(sll_mc)}, {"conventional", gap(sll_conv)}};
    doc["coupling"] = {{"h_m", model.h}, {"d_m", model.d}};
    write_file_atomic(a.out, [&](std::ostream &os) { os << doc.dump(2) << '\n'; });
    out << "wrote " << a.out << '\n';
    return kExitOk;
}

// ---- rate-sweep ------------------------------------------------------------

struct RateArgs
{
    std::string config;
    std::string out;
    std::string mode = "amplification";
    double p_min = 1;
    double p_max = 10;
    std::size_t p_count = 50;
    std::vector<double> p_list;
    std::vector<std::string> scenarios;
};

std::vector<std::string> bundled_presets()
{
    const std::filesystem::path dir = data_directory() / "presets";
    return {(dir / "p1.json").string(), (dir / "p2.json").string(), (dir / "p3.json").string()};
}

int cmd_rate_sweep(const RateArgs &a, std::ostream &out)
{
    const ScenarioConfig cfg = load_config(a.config);
    const CouplingModel<double> model = cfg.coupling_model();
    std::vector<RateRow> rows;
    if (a.mode == "amplification")
    {
        std::vector<double> ps = a.p_list;
        if (ps.empty())
        {
            if (!(a.p_min >= 1) || !(a.p_max >= a.p_min) || a.p_count < 1)
                throw ConfigError("--p-min", "need 1 <= p-min <= p-max and a positive count");
            ps = log_spaced(a.p_min, a.p_max, a.p_count);
        }
        for (double p : ps)
            if (!(p >= 1) || !std::isfinite(p))
                throw ConfigError("--p", "amplification values must be >= 1");
        const auto designs = prototype_designs(cfg.scenario, cfg.unit_cells(), cfg.budget.rx_direction());
        rows = sweep_amplification(cfg.scenario, designs, model, cfg.budget, ps);
    }
    else if (a.mode == "frequency")
    {
        const std::vector<std::string> paths = a.scenarios.empty() ? bundled_presets() : a.scenarios;
        std::vector<FrequencyCase> cases;
        for (const std::string &p : paths)
        {
            const ScenarioConfig c = load_config(p);
            cases.push_back({c.scenario, c.unit_cells()});
        }
        rows = sweep_frequency(cases, model, cfg.budget);
    }
    else
        throw ConfigError("--mode", "expected amplification or frequency");
    write_file_atomic(a.out, [&](std::ostream &os) { write_rate_csv(os, rows); });
    out << "wrote " << a.out << " (" << rows.size() << " rows)\n";
    return kExitOk;
}

// ---- convert ---------------------------------------------------------------

struct ConvertArgs
{
    std::string config;
    std::string out;
    std::string matrix;
    std::string direction;
    std::optional<double> z0;
};

int cmd_convert(const ConvertArgs &a, std::ostream &out)
{
    double z0 = 50;
    if (!a.config.empty())
        z0 = load_config(a.config).coupling.z0_ohm;
    if (a.z0)
        z0 = *a.z0;
    if (!(z0 > 0) || !std::isfinite(z0))
        throw ConfigError("--z0", "reference impedance must be positive");

    std::ifstream in(a.matrix);
    if (!in)
        throw DataError(a.matrix + ": cannot open matrix file");
    const MatrixXcd m = read_complex_matrix_csv(in, a.matrix);
    MatrixXcd result;
    if (a.direction == "z2s")
        result = z_to_s(m, z0);
    else if (a.direction == "s2z")
        result = s_to_z(m, z0);
    else
        throw ConfigError("--direction", "expected z2s or s2z");
    write_file_atomic(a.out, [&](std::ostream &os) { write_complex_matrix_csv(os, result); });
    out << "wrote " << a.out << '\n';
    return kExitOk;
}
} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Mutual coupling models for RIS-aided links", "ris-lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ris-lab 1.0.0");

    PatternArgs pattern;
    CLI::App *pat = app.add_subcommand("pattern", "Radiation pattern of a phase design");
    pat->add_option("--config", pattern.config, "Scenario JSON")->required();
    pat->add_option("--out", pattern.out, "Output CSV")->required();
    add_design(*pat, pattern.design);
    pat->add_flag("--with-mc,!--no-mc", pattern.with_mc, "Include mutual coupling");
    add_steering(*pat, pattern.target);

    FitArgs fit;
    CLI::App *fi = app.add_subcommand("fit", "Fit dipole parameters to reference patterns");
    fi->add_option("--config", fit.config, "Scenario JSON (also supplies z0 and quadrature)");
    fi->add_option("--out", fit.out, "Output JSON")->required();
    fi->add_option("--surface", fit.surface, "Residual surface CSV (default: <out>.surface.csv)");
    fi->add_option("--reference", fit.references, "Reference pattern CSV (repeatable)");
    fi->add_option("--reference-config", fit.reference_configs, "Scenario JSON per reference (repeatable)");
    fi->add_option("--scale", fit.scales, "linear|field-db|power-db, once or per reference");
    fi->add_option("--fit-scale", fit.fit_scale, "Comparison scale: linear|db")->capture_default_str();
    add_design(*fi, fit.design);
    add_steering(*fi, fit.target);
    fi->add_option("--steps-h", fit.steps_h)->capture_default_str();
    fi->add_option("--steps-d", fit.steps_d)->capture_default_str();
    fi->add_option("--h-min", fit.h_min);
    fi->add_option("--h-max", fit.h_max);
    fi->add_option("--d-min", fit.d_min);
    fi->add_option("--d-max", fit.d_max);
    fi->add_option("--search-frequency", fit.search_frequency, "Default bounds are [lambda/100, lambda] here")
        ->capture_default_str();
    fi->add_flag("--no-refine", fit.no_refine, "Skip the fine search");

    ValidateArgs validate;
    CLI::App *va = app.add_subcommand("validate", "Compare both models against a reference pattern");
    va->add_option("--config", validate.config, "Scenario JSON")->required();
    va->add_option("--out", validate.out, "Output JSON")->required();
    va->add_option("--reference", validate.reference, "Reference pattern CSV")->required();
    va->add_option("--scale", validate.scale, "linear|field-db|power-db")->capture_default_str();
    add_design(*va, validate.design);
    add_steering(*va, validate.target);

    RateArgs rate;
    CLI::App *ra = app.add_subcommand("rate-sweep", "Achievable rate with and without coupling");
    ra->add_option("--config", rate.config, "Scenario JSON")->required();
    ra->add_option("--out", rate.out, "Output CSV")->required();
    ra->add_option("--mode", rate.mode, "amplification|frequency")->capture_default_str();
    ra->add_option("--p-min", rate.p_min)->capture_default_str();
    ra->add_option("--p-max", rate.p_max)->capture_default_str();
    ra->add_option("--p-count", rate.p_count)->capture_default_str();
    ra->add_option("--p", rate.p_list, "Explicit amplification values")->delimiter(',');
    ra->add_option("--scenario", rate.scenarios, "Scenario JSON per frequency (default: bundled presets)");

    ConvertArgs convert;
    CLI::App *co = app.add_subcommand("convert", "Convert between impedance and scattering matrices");
    co->add_option("--config", convert.config, "Scenario JSON supplying z0");
    co->add_option("--out", convert.out, "Output CSV")->required();
    co->add_option("--matrix", convert.matrix, "Matrix CSV (row,col,re,im)")->required();
    co->add_option("--direction", convert.direction, "z2s|s2z")->required();
    co->add_option("--z0", convert.z0, "Reference impedance in ohm");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try
    {
        if (*pat)
            return cmd_pattern(pattern, out);
        if (*fi)
            return cmd_fit(fit, out);
        if (*va)
            return cmd_validate(validate, out);
        if (*ra)
            return cmd_rate_sweep(rate, out);
        return cmd_convert(convert, out);
    }
    catch (const ConfigError &e)
    {
        err << "ris-lab " << name << ": configuration error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const InvalidArgument &e)
    {
        err << "ris-lab " << name << ": invalid argument: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const NumericalError &e)
    {
        err << "ris-lab " << name << ": numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    catch (const DataError &e)
    {
        err << "ris-lab " << name << ": data error: " << e.what() << '\n';
        return kExitData;
    }
}

} // namespace rislab
