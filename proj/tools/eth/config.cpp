#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace eth::cli {

namespace pt = boost::property_tree;

namespace {

const char *const kTruncationKeys[] = {"eps_window", "lambda_window", "lambda_inner_window", "Lambda_window", "N_max",
                                       "D",          "D_y",           "x_degree_cap",        "M_max",         "R"};
const char *const kDataKeys[] = {"u", "v", "Q"};
const char *const kRunKeys[] = {"pipeline", "fixture", "report", "jobs"};

template <std::size_t N>
void check_keys(const pt::ptree &section, const std::string &name, const char *const (&keys)[N])
{
    for (const auto &[k, v] : section) {
        bool ok = false;
        for (const char *key : keys) ok = ok || k == key;
        if (!ok) throw PreconditionError("config: unknown key '" + k + "' in [" + name + "]");
    }
}

int get_int(const pt::ptree &s, const char *key, int fallback)
{
    const auto v = s.get_optional<std::string>(key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const int n = std::stoi(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing");
        return n;
    } catch (const std::exception &) {
        throw PreconditionError(std::string("config: ") + key + " must be an integer, got '" + *v + "'");
    }
}

Rational parse_rational(const std::string &s)
{
    try {
        Rational r(s);
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
        r.canonicalize();
        return r;
    } catch (const std::exception &) {
        throw PreconditionError("config: bad rational '" + s + "'");
    }
}

// drops "; ..." and "# ..." after whitespace, which read_ini keeps in the value
std::string strip_inline_comments(const std::string &text)
{
    std::istringstream in(text);
    std::ostringstream out;
    for (std::string line; std::getline(in, line);) {
        for (std::size_t i = 1; i < line.size(); ++i)
            if ((line[i] == ';' || line[i] == '#') && std::isspace(static_cast<unsigned char>(line[i - 1]))) {
                line.erase(i);
                break;
            }
        out << line << "\n";
    }
    return out.str();
}

} // namespace

XPoly parse_xpoly(const std::string &table)
{
    XPoly p;
    std::vector<std::string> terms;
    const std::string t = boost::trim_copy(table);
    if (t.empty() || t == "0") return p;
    boost::split(terms, t, boost::is_any_of(","));
    for (std::string term : terms) {
        boost::trim(term);
        std::vector<std::string> f;
        boost::split(f, term, boost::is_any_of(":"));
        if (f.empty() || f.size() > 4) throw PreconditionError("config: bad coefficient term '" + term + "'");
        int e[3] = {0, 0, 0};
        for (std::size_t i = 1; i < f.size(); ++i) {
            try {
                e[i - 1] = std::stoi(boost::trim_copy(f[i]));
            } catch (const std::exception &) {
                throw PreconditionError("config: bad exponent in '" + term + "'");
            }
        }
        if (e[0] < 0) throw PreconditionError("config: negative x-degree in '" + term + "'");
        p += XPoly::monomial(Scalar::monomial(parse_rational(boost::trim_copy(f[0])), ScalarKey{e[1], e[2], 0}), e[0]);
    }
    return p;
}

LoadedConfig parse_config(const std::string &text)
{
    pt::ptree tree;
    std::istringstream in(strip_inline_comments(text));
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw PreconditionError(std::string("config: ") + e.what());
    }
    LoadedConfig out;
    RunConfig &c = out.run;
    for (const auto &[name, section] : tree) {
        if (name == "truncation") check_keys(section, name, kTruncationKeys);
        else if (name == "initial_data") check_keys(section, name, kDataKeys);
        else if (name == "run") check_keys(section, name, kRunKeys);
        else throw PreconditionError("config: unknown section [" + name + "]");
    }

    const pt::ptree empty;
    const pt::ptree &tr = tree.get_child("truncation", empty);
    const int eps = get_int(tr, "eps_window", c.trunc.eps_max);
    c.trunc.eps_min = -eps;
    c.trunc.eps_max = eps;
    c.trunc.lambda_window = get_int(tr, "lambda_window", c.trunc.lambda_window);
    c.trunc.lambda_inner = get_int(tr, "lambda_inner_window", c.trunc.lambda_inner);
    c.trunc.Lambda_window = get_int(tr, "Lambda_window", c.trunc.Lambda_window);
    c.trunc.x_degree_cap = get_int(tr, "x_degree_cap", c.trunc.x_degree_cap);
    c.n_max = get_int(tr, "N_max", c.n_max);
    c.degree = get_int(tr, "D", c.degree);
    c.y_degree = get_int(tr, "D_y", c.y_degree);
    c.m_max = get_int(tr, "M_max", c.m_max);
    c.r_max = get_int(tr, "R", c.r_max);

    const pt::ptree &data = tree.get_child("initial_data", empty);
    c.data.u = parse_xpoly(data.get<std::string>("u", "0"));
    c.data.v = parse_xpoly(data.get<std::string>("v", "0"));
    const std::string q = data.get<std::string>("Q", "symbolic");
    if (q != "symbolic" && q != "unit") throw PreconditionError("config: Q must be symbolic or unit");
    c.trunc.unit_q = q == "unit";

    const pt::ptree &run = tree.get_child("run", empty);
    c.pipeline = run.get<std::string>("pipeline", c.pipeline);
    c.fixture = run.get<std::string>("fixture", "");
    c.jobs = get_int(run, "jobs", c.jobs);
    out.report_path = run.get<std::string>("report", "");
    return out;
}

LoadedConfig load_config(const std::string &path)
{
    std::ifstream f(path);
    if (!f) throw PreconditionError("config: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

nlohmann::ordered_json config_json(const RunConfig &cfg)
{
    nlohmann::ordered_json j;
    j["truncation"] = {{"eps_window", cfg.trunc.eps_max},
                       {"lambda_window", cfg.trunc.lambda_window},
                       {"lambda_inner_window", cfg.trunc.lambda_inner},
                       {"Lambda_window", cfg.trunc.Lambda_window},
                       {"N_max", cfg.n_max},
                       {"D", cfg.degree},
                       {"D_y", cfg.y_degree},
                       {"x_degree_cap", cfg.trunc.x_degree_cap},
                       {"M_max", cfg.m_max},
                       {"R", cfg.r_max}};
    j["initial_data"] = {{"u", cfg.data.u.str()}, {"v", cfg.data.v.str()}, {"Q", cfg.trunc.unit_q ? "unit" : "symbolic"}};
    j["pipeline"] = cfg.pipeline;
    j["fixture"] = cfg.fixture;
    return j;
}

nlohmann::ordered_json report_json(const RunConfig &cfg, const RunReport &rep)
{
    nlohmann::ordered_json j;
    j["config"] = config_json(cfg);
    auto checks = nlohmann::ordered_json::array();
    for (const CheckRecord &c : rep.checks) {
        const CheckResult &r = c.result;
        nlohmann::ordered_json e;
        e["id"] = r.id;
        e["params"] = r.params;
        e["verdict"] = verdict_str(r.verdict());
        e["certified_cells"] = r.certified;
        e["uncertified_cells"] = r.uncertified;
        e["nonzero_cells"] = r.failed;
        if (r.nonzero.empty()) e["witness"] = nullptr;
        else e["witness"] = {{"cell", r.nonzero.front().where}, {"value", r.nonzero.front().value}};
        auto ws = nlohmann::ordered_json::array();
        for (const Witness &w : r.nonzero) ws.push_back({{"cell", w.where}, {"value", w.value}});
        e["witnesses"] = ws;
        e["window"] = c.window;
        e["notes"] = r.notes;
        e["seconds"] = c.seconds;
        checks.push_back(e);
    }
    j["checks"] = checks;
    j["global_verdict"] = verdict_str(rep.global);
    j["timing"] = {{"seconds", rep.seconds}};
    return j;
}

} // namespace eth::cli
