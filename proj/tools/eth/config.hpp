#pragma once

#include <string>

#include <json.hpp>

#include "eth/pipeline.hpp"

namespace eth::cli {

/// INI-style configuration:
///
///   [truncation]   eps_window, lambda_window, lambda_inner_window,
///                  Lambda_window, N_max, D, D_y, x_degree_cap, M_max, R
///   [initial_data] u, v: comma-separated terms c[:k[:e[:h]]] meaning
///                  c x^k eps^e Q^{h/2}; Q = symbolic | unit
///   [run]          pipeline, fixture, report, jobs
///
/// Throws PreconditionError on malformed input.
struct LoadedConfig
{
    RunConfig run;
    std::string report_path;
};
LoadedConfig load_config(const std::string &path);
LoadedConfig parse_config(const std::string &text);

/// Parses the coefficient table of u or v.
XPoly parse_xpoly(const std::string &table);

nlohmann::ordered_json config_json(const RunConfig &cfg);
nlohmann::ordered_json report_json(const RunConfig &cfg, const RunReport &rep);

} // namespace eth::cli
