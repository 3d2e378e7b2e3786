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

#include "rislab/config.hpp"

#include "rislab/errors.hpp"
#include "rislab/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <initializer_list>
#include <set>

#ifndef RISLAB_DATA_DIR
#define RISLAB_DATA_DIR "data"
#endif

namespace rislab
{
namespace
{
using nlohmann::json;

std::string join(const std::string &prefix, const std::string &key) { return prefix.empty() ? key : prefix + "." + key; }

void reject_unknown(const json &obj, const std::string &prefix, std::initializer_list<const char *> allowed)
{
    const std::set<std::string> names(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!names.count(it.key()))
            throw ConfigError(join(prefix, it.key()), "unknown key");
}

const json &object(const json &parent, const std::string &prefix, const char *key)
{
    const std::string name = join(prefix, key);
    if (!parent.contains(key))
        throw ConfigError(name, "missing required key");
    const json &v = parent.at(key);
    if (!v.is_object())
        throw ConfigError(name, "expected an object");
    return v;
}

double number(const json &v, const std::string &name)
{
    if (!v.is_number())
        throw ConfigError(name, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(name, "expected a finite number");
    return x;
}

double required(const json &obj, const std::string &prefix, const char *key)
{
    if (!obj.contains(key))
        throw ConfigError(join(prefix, key), "missing required key");
    return number(obj.at(key), join(prefix, key));
}

std::optional<double> optional_number(const json &obj, const std::string &prefix, const char *key)
{
    if (!obj.contains(key))
        return std::nullopt;
    return number(obj.at(key), join(prefix, key));
}

Index integer(const json &obj, const std::string &prefix, const char *key, std::optional<Index> fallback = {})
{
    const std::string name = join(prefix, key);
    if (!obj.contains(key))
    {
        if (fallback)
            return *fallback;
        throw ConfigError(name, "missing required key");
    }
    const json &v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(name, "expected an integer");
    return v.get<Index>();
}

double positive(double v, const std::string &name)
{
    if (!(v > 0))
        throw ConfigError(name, "must be positive");
    return v;
}

// Re-labels validation failures from the owning types with the config section.
template <typename F>
auto checked(const std::string &section, F &&f)
{
    try
    {
        return f();
    }
    catch (const InvalidArgument &e)
    {
        throw ConfigError(section, e.what());
    }
}
} // namespace

CouplingModel<double> ScenarioConfig::coupling_base() const
{
    CouplingModel<double> m;
    m.z0 = coupling.z0_ohm;
    m.quadrature_points = coupling.quadrature_points;
    m.self_impedance = coupling.self_impedance_ohm;
    return m;
}

CouplingModel<double> ScenarioConfig::coupling_model() const
{
    if (!coupling.h_m)
        throw ConfigError("coupling.h_m", "required for the coupling-aware model");
    if (!coupling.d_m)
        throw ConfigError("coupling.d_m", "required for the coupling-aware model");
    CouplingModel<double> m = coupling_base();
    m.h = *coupling.h_m;
    m.d = *coupling.d_m;
    checked("coupling", [&] {
        m.validate();
        return 0;
    });
    return m;
}

const UnitCellStates &ScenarioConfig::unit_cells() const
{
    if (!cells)
        throw ConfigError("cells", "required for the quantized design");
    return *cells;
}

ScenarioConfig parse_config(std::string_view json_text, const std::string &source)
{
    json root;
    try
    {
        root = json::parse(json_text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(source, std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ConfigError(source, "expected a JSON object");
    reject_unknown(root, "",
                   {"array", "frequency_hz", "feed", "q_e", "q_f", "cells", "coupling", "budget", "grid"});

    const json &arr = object(root, "", "array");
    reject_unknown(arr, "array", {"rows", "cols", "spacing_m"});
    const Index rows = integer(arr, "array", "rows");
    const Index cols = integer(arr, "array", "cols");
    const double spacing = required(arr, "array", "spacing_m");
    if (rows < 1)
        throw ConfigError("array.rows", "must be at least 1");
    if (cols < 1)
        throw ConfigError("array.cols", "must be at least 1");
    positive(spacing, "array.spacing_m");
    const RisArray<double> array = checked("array", [&] { return build_array(rows, cols, spacing); });

    const double frequency = positive(required(root, "", "frequency_hz"), "frequency_hz");

    const json &feed = object(root, "", "feed");
    reject_unknown(feed, "feed", {"incident_az_deg", "incident_el_deg", "distance_m"});
    const double az = required(feed, "feed", "incident_az_deg");
    const double el = required(feed, "feed", "incident_el_deg");
    const double dist = positive(required(feed, "feed", "distance_m"), "feed.distance_m");
    const FeedPlacement<double> placement = checked("feed", [&] { return place_feed(Direction<double>(az, el), dist); });

    const double q_e = optional_number(root, "", "q_e").value_or(1.0);
    const double q_f = optional_number(root, "", "q_f").value_or(25.0);
    if (q_e < 0)
        throw ConfigError("q_e", "must be non-negative");
    if (q_f < 0)
        throw ConfigError("q_f", "must be non-negative");

    ScenarioConfig cfg{source, Scenario{frequency, placement, q_e, q_f, array}, std::nullopt, {}, LinkBudget(),
                       PatternGrid::standard()};
    checked("scenario", [&] {
        cfg.scenario.validate();
        return 0;
    });

    if (root.contains("cells"))
    {
        const json &c = object(root, "", "cells");
        reject_unknown(c, "cells", {"phase_on_deg", "phase_off_deg", "mag_on", "mag_off"});
        const double on = required(c, "cells", "phase_on_deg");
        const double off = required(c, "cells", "phase_off_deg");
        const double mon = required(c, "cells", "mag_on");
        const double moff = required(c, "cells", "mag_off");
        if (!(mon > 0 && mon <= 1))
            throw ConfigError("cells.mag_on", "must lie in (0, 1]");
        if (!(moff > 0 && moff <= 1))
            throw ConfigError("cells.mag_off", "must lie in (0, 1]");
        cfg.cells = checked("cells", [&] { return UnitCellStates(on, off, mon, moff); });
    }

    if (root.contains("coupling"))
    {
        const json &c = object(root, "", "coupling");
        reject_unknown(c, "coupling", {"h_m", "d_m", "z0_ohm", "quadrature_points", "self_impedance_ohm"});
        cfg.coupling.h_m = optional_number(c, "coupling", "h_m");
        cfg.coupling.d_m = optional_number(c, "coupling", "d_m");
        if (cfg.coupling.h_m)
            positive(*cfg.coupling.h_m, "coupling.h_m");
        if (cfg.coupling.d_m)
            positive(*cfg.coupling.d_m, "coupling.d_m");
        cfg.coupling.z0_ohm = positive(optional_number(c, "coupling", "z0_ohm").value_or(50.0), "coupling.z0_ohm");
        cfg.coupling.quadrature_points = integer(c, "coupling", "quadrature_points", Index(512));
        if (cfg.coupling.quadrature_points < 64)
            throw ConfigError("coupling.quadrature_points", "must be at least 64");
        if (c.contains("self_impedance_ohm"))
        {
            const json &z = c.at("self_impedance_ohm");
            if (!z.is_array() || z.size() != 2)
                throw ConfigError("coupling.self_impedance_ohm", "expected [re, im]");
            cfg.coupling.self_impedance_ohm = Complex<double>(number(z[0], "coupling.self_impedance_ohm[0]"),
                                                              number(z[1], "coupling.self_impedance_ohm[1]"));
        }
    }

    if (root.contains("budget"))
    {
        const json &b = object(root, "", "budget");
        reject_unknown(b, "budget", {"p_t_dbm", "nf_db", "n0_dbm_per_hz", "rx_distance_m", "calibration"});
        const double p_t = optional_number(b, "budget", "p_t_dbm").value_or(0.0);
        const double nf = optional_number(b, "budget", "nf_db").value_or(10.0);
        const double n0 = optional_number(b, "budget", "n0_dbm_per_hz").value_or(-174.0);
        const double rx = positive(optional_number(b, "budget", "rx_distance_m").value_or(100.0), "budget.rx_distance_m");
        const double cal = positive(optional_number(b, "budget", "calibration").value_or(1.0), "budget.calibration");
        cfg.budget = checked("budget", [&] { return LinkBudget(p_t, nf, n0, Vector3d(0, 0, rx), cal); });
    }

    if (root.contains("grid"))
    {
        const json &g = object(root, "", "grid");
        reject_unknown(g, "grid", {"el_min_deg", "el_max_deg", "step_deg"});
        const double lo = optional_number(g, "grid", "el_min_deg").value_or(-90.0);
        const double hi = optional_number(g, "grid", "el_max_deg").value_or(90.0);
        const double step = positive(optional_number(g, "grid", "step_deg").value_or(0.5), "grid.step_deg");
        cfg.grid = checked("grid", [&] { return PatternGrid::uniform(lo, hi, step); });
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path &path)
{
    std::string text;
    try
    {
        text = read_file(path);
    }
    catch (const DataError &e)
    {
        throw ConfigError(path.string(), e.what());
    }
    return parse_config(text, path.string());
}

std::filesystem::path data_directory()
{
    if (const char *env = std::getenv("RIS_LAB_DATA"))
        return env;
    return RISLAB_DATA_DIR;
}

} // namespace rislab
