#include "noma/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace noma {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> keys) {
    if (!obj.is_object()) bad(where, "expected an object");
    const std::set<std::string_view> known(keys);
    for (const auto& [key, value] : obj.items())
        if (!known.count(key)) bad(where, "unknown key '" + key + "'");
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    return v.get<double>();
}

std::uint64_t count(const json& v, const std::string& where) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) bad(where, "expected a nonnegative integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) bad(where, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

template <typename T>
void set_number(const json& obj, const char* key, const std::string& where, T& field) {
    if (!obj.contains(key)) return;
    const std::string at = where + "." + key;
    if constexpr (std::is_floating_point_v<T>)
        field = number(obj[key], at);
    else if constexpr (std::is_signed_v<T>) {
        if (!obj[key].is_number_integer()) bad(at, "expected an integer");
        field = obj[key].template get<T>();
    } else
        field = static_cast<T>(count(obj[key], at));
}

// Scalar or per-user list; a scalar is stored as a one-element list and
// broadcast once the user count is known.
std::vector<double> per_user(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) bad(where, "expected a number or a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

void read_system(const json& obj, SystemConfig& cfg) {
    const std::string w = "system";
    reject_unknown(obj, w,
                   {"num_users", "num_subcarriers", "bandwidth_hz", "noise_psd_dbm_per_hz",
                    "decoder_efficiency_j_per_mbit", "rate_demand_mbps", "cluster_cap", "penalty_exponent",
                    "tau_factor", "epsilon_factor", "channel"});
    set_number(obj, "num_users", w, cfg.num_users);
    set_number(obj, "num_subcarriers", w, cfg.num_subcarriers);
    set_number(obj, "bandwidth_hz", w, cfg.bandwidth_hz);
    if (obj.contains("noise_psd_dbm_per_hz"))
        cfg.noise_psd_w_per_hz = dbm_to_w(number(obj["noise_psd_dbm_per_hz"], w + ".noise_psd_dbm_per_hz"));
    set_number(obj, "cluster_cap", w, cfg.cluster_cap);
    set_number(obj, "penalty_exponent", w, cfg.penalty_exponent);
    set_number(obj, "tau_factor", w, cfg.tau_factor);
    set_number(obj, "epsilon_factor", w, cfg.epsilon_factor);

    auto fit = [&](std::vector<double>& field, const char* key) {
        if (obj.contains(key)) field = per_user(obj[key], w + "." + key);
        // A scalar, or a uniform default sized for another user count, spreads to every user.
        const bool uniform = !field.empty() && std::all_of(field.begin(), field.end(),
                                                           [&](double v) { return v == field.front(); });
        if (field.size() == 1 || (uniform && !obj.contains(key))) field.assign(cfg.num_users, field.front());
    };
    fit(cfg.rate_demand, "rate_demand_mbps");
    fit(cfg.decoder_efficiency, "decoder_efficiency_j_per_mbit");

    if (obj.contains("channel")) {
        const json& ch = obj["channel"];
        const std::string cw = w + ".channel";
        reject_unknown(ch, cw, {"area_side_m", "shadowing_std_db", "rayleigh_fading"});
        set_number(ch, "area_side_m", cw, cfg.channel.area_side_m);
        set_number(ch, "shadowing_std_db", cw, cfg.channel.shadowing_std_db);
        if (ch.contains("rayleigh_fading")) {
            if (!ch["rayleigh_fading"].is_boolean()) bad(cw + ".rayleigh_fading", "expected true or false");
            cfg.channel.rayleigh_fading = ch["rayleigh_fading"].get<bool>();
        }
    }
}

void read_solver(const json& obj, SolverOptions& o) {
    const std::string w = "solver";
    reject_unknown(obj, w,
                   {"outer_tol", "outer_max_iters", "newton_tol", "newton_max_iters", "barrier_mu0", "barrier_shrink",
                    "ls_alpha", "ls_beta", "tau_schedule", "tau_decay", "tau_floor_factor", "repair_tolerance",
                    "enumeration_budget"});
    set_number(obj, "outer_tol", w, o.outer_tol);
    set_number(obj, "outer_max_iters", w, o.outer_max_iters);
    set_number(obj, "newton_tol", w, o.newton_tol);
    set_number(obj, "newton_max_iters", w, o.newton_max_iters);
    set_number(obj, "barrier_mu0", w, o.barrier_mu0);
    set_number(obj, "barrier_shrink", w, o.barrier_shrink);
    set_number(obj, "ls_alpha", w, o.ls_alpha);
    set_number(obj, "ls_beta", w, o.ls_beta);
    set_number(obj, "tau_decay", w, o.tau_decay);
    set_number(obj, "tau_floor_factor", w, o.tau_floor_factor);
    set_number(obj, "repair_tolerance", w, o.repair_tolerance);
    set_number(obj, "enumeration_budget", w, o.enumeration_budget);
    if (obj.contains("tau_schedule")) {
        const json& v = obj["tau_schedule"];
        if (v == "fixed")
            o.tau_schedule = TauSchedule::Fixed;
        else if (v == "geometric_decay")
            o.tau_schedule = TauSchedule::GeometricDecay;
        else
            bad(w + ".tau_schedule", "expected \"fixed\" or \"geometric_decay\"");
    }
}

json system_json(const SystemConfig& cfg) {
    return {{"num_users", cfg.num_users},
            {"num_subcarriers", cfg.num_subcarriers},
            {"bandwidth_hz", cfg.bandwidth_hz},
            {"noise_psd_dbm_per_hz", w_to_dbm(cfg.noise_psd_w_per_hz)},
            {"decoder_efficiency_j_per_mbit", cfg.decoder_efficiency},
            {"rate_demand_mbps", cfg.rate_demand},
            {"cluster_cap", cfg.cluster_cap},
            {"penalty_exponent", cfg.penalty_exponent},
            {"tau_factor", cfg.tau_factor},
            {"epsilon_factor", cfg.epsilon_factor},
            {"channel",
             {{"area_side_m", cfg.channel.area_side_m},
              {"shadowing_std_db", cfg.channel.shadowing_std_db},
              {"rayleigh_fading", cfg.channel.rayleigh_fading}}}};
}

json solver_json(const SolverOptions& o) {
    return {{"outer_tol", o.outer_tol},
            {"outer_max_iters", o.outer_max_iters},
            {"newton_tol", o.newton_tol},
            {"newton_max_iters", o.newton_max_iters},
            {"barrier_mu0", o.barrier_mu0},
            {"barrier_shrink", o.barrier_shrink},
            {"ls_alpha", o.ls_alpha},
            {"ls_beta", o.ls_beta},
            {"tau_schedule", o.tau_schedule == TauSchedule::Fixed ? "fixed" : "geometric_decay"},
            {"tau_decay", o.tau_decay},
            {"tau_floor_factor", o.tau_floor_factor},
            {"repair_tolerance", o.repair_tolerance},
            {"enumeration_budget", o.enumeration_budget}};
}

}  // namespace

ExperimentSpec parse_experiment(std::string_view json_text, const ExperimentSpec& defaults) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    reject_unknown(root, "config",
                   {"system", "solver", "sweep", "num_drops", "base_seed", "solvers", "output_dir", "threads"});
    ExperimentSpec spec = defaults;
    if (root.contains("system")) read_system(root["system"], spec.base);
    if (root.contains("solver")) read_solver(root["solver"], spec.options);
    if (root.contains("sweep")) {
        const json& sw = root["sweep"];
        reject_unknown(sw, "sweep", {"axis", "values"});
        if (sw.contains("axis")) {
            if (!sw["axis"].is_string()) bad("sweep.axis", "expected a string");
            spec.axis = parse_sweep_axis(sw["axis"].get<std::string>());
        }
        if (sw.contains("values")) {
            if (!sw["values"].is_array()) bad("sweep.values", "expected a list of numbers");
            spec.values.clear();
            for (std::size_t i = 0; i < sw["values"].size(); ++i)
                spec.values.push_back(number(sw["values"][i], "sweep.values[" + std::to_string(i) + "]"));
        }
    }
    set_number(root, "num_drops", "config", spec.num_drops);
    set_number(root, "base_seed", "config", spec.base_seed);
    set_number(root, "threads", "config", spec.threads);
    if (root.contains("solvers")) {
        const json& s = root["solvers"];
        if (!s.is_array()) bad("config.solvers", "expected a list of solver names");
        spec.solvers.clear();
        for (const auto& name : s) {
            if (!name.is_string()) bad("config.solvers", "expected solver names as strings");
            spec.solvers.push_back(parse_solver_kind(name.get<std::string>()));
        }
    }
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) bad("config.output_dir", "expected a string");
        spec.output_dir = root["output_dir"].get<std::string>();
    }
    return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path, const ExperimentSpec& defaults) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment(ss.str(), defaults);
}

std::string dump_experiment(const ExperimentSpec& spec) {
    json solvers = json::array();
    for (SolverKind k : spec.solvers) solvers.push_back(std::string(to_string(k)));
    const json root = {{"system", system_json(spec.base)},
                       {"solver", solver_json(spec.options)},
                       {"sweep", {{"axis", std::string(to_string(spec.axis))}, {"values", spec.values}}},
                       {"num_drops", spec.num_drops},
                       {"base_seed", spec.base_seed},
                       {"solvers", solvers},
                       {"output_dir", spec.output_dir.string()},
                       {"threads", spec.threads}};
    return root.dump(2) + "\n";
}

std::string report_to_json(const SolveReport& report, const ChannelSet& ch) {
    const std::size_t m = ch.gains().rows();
    const std::size_t n_sc = ch.gains().cols();
    auto by_user = [&](const Matrix& ranked) {
        json rows = json::array();
        for (std::size_t u = 0; u < m; ++u) {
            json row = json::array();
            for (std::size_t n = 0; n < n_sc; ++n)
                row.push_back(ranked.rows() == m ? ranked(ch.rank_of(n, u), n) : 0.0);
            rows.push_back(row);
        }
        return rows;
    };
    json supports = json::array();
    for (std::size_t n = 0; n < report.support_per_subcarrier.size(); ++n) {
        json users = json::array();
        for (std::size_t j : report.support_per_subcarrier[n]) users.push_back(ch.user_at(n, j));
        supports.push_back(users);
    }
    json trace = json::array();
    for (const auto& t : report.trace)
        trace.push_back({{"smoothed_objective", t.smoothed_objective},
                         {"surrogate_value", t.surrogate_value},
                         {"max_constraint_violation", t.max_constraint_violation}});
    // JSON has no infinity; an infeasible report carries null powers.
    auto finite = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    const json root = {{"method", report.method},
                       {"feasible", report.feasible},
                       {"converged", report.converged},
                       {"mm_converged", report.mm_converged},
                       {"cap_satisfied", report.cap_satisfied},
                       {"outer_iters", report.outer_iters},
                       {"repair_shift", report.repair_shift},
                       {"power_total_w", finite(report.objective.total_w)},
                       {"power_transmission_w", finite(report.objective.transmission_w)},
                       {"power_decoding_w", finite(report.objective.decoding_w)},
                       {"penalty", finite(report.objective.penalty)},
                       {"rates_mbps", by_user(report.rates.values)},
                       {"powers_w", by_user(report.powers.values)},
                       {"active_users_per_subcarrier", supports},
                       {"warnings", report.warnings},
                       {"trace", trace}};
    return root.dump(2) + "\n";
}

}  // namespace noma
