#include "noma/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "noma/channel.hpp"
#include "noma/oracle.hpp"

namespace noma {

std::string_view to_string(SweepAxis axis) {
    return axis == SweepAxis::RateDemand ? "rate_demand" : "cluster_cap";
}

std::string_view to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::Jpcuc: return "jpcuc";
        case SolverKind::Oracle: return "oracle";
        case SolverKind::Oma: return "oma";
    }
    return "?";
}

SweepAxis parse_sweep_axis(std::string_view name) {
    if (name == "rate_demand" || name == "rate_demand_mbps") return SweepAxis::RateDemand;
    if (name == "cluster_cap") return SweepAxis::ClusterCap;
    throw ConfigError("unknown sweep axis '" + std::string(name) + "' (expected rate_demand or cluster_cap)");
}

SolverKind parse_solver_kind(std::string_view name) {
    if (name == "jpcuc") return SolverKind::Jpcuc;
    if (name == "oracle") return SolverKind::Oracle;
    if (name == "oma") return SolverKind::Oma;
    throw ConfigError("unknown solver '" + std::string(name) + "' (expected jpcuc, oracle or oma)");
}

std::string_view sweep_column(SweepAxis axis) {
    return axis == SweepAxis::RateDemand ? "rate_demand_mbps" : "cluster_cap";
}

std::string_view to_string(RowStatus status) {
    switch (status) {
        case RowStatus::Ok: return "ok";
        case RowStatus::NotConverged: return "not_converged";
        case RowStatus::Infeasible: return "infeasible";
        case RowStatus::Error: return "error";
    }
    return "?";
}

RowStatus parse_row_status(std::string_view name) {
    if (name == "ok") return RowStatus::Ok;
    if (name == "not_converged") return RowStatus::NotConverged;
    if (name == "infeasible") return RowStatus::Infeasible;
    if (name == "error") return RowStatus::Error;
    throw std::invalid_argument("unknown row status '" + std::string(name) + "'");
}

SystemConfig config_at(const ExperimentSpec& spec, double sweep_value) {
    SystemConfig cfg = spec.base;
    if (spec.axis == SweepAxis::RateDemand)
        cfg.rate_demand.assign(cfg.num_users, sweep_value);
    else
        cfg.cluster_cap = static_cast<std::size_t>(sweep_value);
    return cfg;
}

ExperimentSpec validate_experiment(const ExperimentSpec& spec) {
    if (spec.values.empty()) throw ConfigError("sweep values are empty");
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (!(spec.values[i - 1] < spec.values[i])) throw ConfigError("sweep values are not strictly ascending");
    if (spec.num_drops < 1) throw ConfigError("number of drops below 1");
    if (spec.solvers.empty()) throw ConfigError("no solvers requested");
    std::set<SolverKind> seen(spec.solvers.begin(), spec.solvers.end());
    if (seen.size() != spec.solvers.size()) throw ConfigError("solver listed twice");
    for (double v : spec.values) {
        if (!std::isfinite(v)) throw ConfigError("non-finite sweep value");
        if (spec.axis == SweepAxis::ClusterCap && (v != std::floor(v) || v < 1.0))
            throw ConfigError("cluster-cap sweep values must be integers of at least 1");
        validate_config(config_at(spec, v));
    }
    validate_options(spec.options);
    return spec;
}

ExperimentSpec desk_preset() {
    ExperimentSpec spec;
    spec.base = make_config(4, 4, 4.0, 2);
    spec.axis = SweepAxis::RateDemand;
    spec.values = {4.0, 8.0, 12.0, 16.0, 20.0};
    spec.num_drops = 50;
    spec.base_seed = 1;
    spec.solvers = {SolverKind::Jpcuc, SolverKind::Oracle, SolverKind::Oma};
    spec.output_dir = "results/desk";
    return spec;
}

ExperimentSpec paper_preset() {
    ExperimentSpec spec;
    spec.base = make_config(10, 10, 4.0, 2);
    spec.axis = SweepAxis::RateDemand;
    spec.values = {4.0, 8.0, 12.0, 16.0, 20.0};
    spec.num_drops = 50;
    spec.base_seed = 1;
    spec.solvers = {SolverKind::Jpcuc, SolverKind::Oma};
    spec.output_dir = "results/paper";
    return spec;
}

namespace {

ResultRow run_one(SolverKind kind, const SystemConfig& cfg, const ChannelSet& ch, const SolverOptions& opts) {
    ResultRow row;
    row.solver = std::string(to_string(kind));
    const auto start = std::chrono::steady_clock::now();
    try {
        SolveReport report;
        switch (kind) {
            case SolverKind::Jpcuc: report = jpcuc(cfg, ch, opts); break;
            case SolverKind::Oracle: report = oracle_optimum(cfg, ch, opts); break;
            case SolverKind::Oma: report = oma_baseline(cfg, ch, opts); break;
        }
        row.method = report.method;
        row.total_w = report.objective.total_w;
        row.transmission_w = report.objective.transmission_w;
        row.decoding_w = report.objective.decoding_w;
        row.outer_iters = report.outer_iters;
        row.cap_satisfied = report.cap_satisfied;
        if (!report.feasible)
            row.status = RowStatus::Infeasible;
        else if (!report.converged)
            row.status = RowStatus::NotConverged;
        if (!report.warnings.empty()) row.message = report.warnings.front();
    } catch (const std::exception& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.total_w = row.transmission_w = row.decoding_w = nan;
        row.status = RowStatus::Error;
        row.message = e.what();
    }
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

template <typename Task>
void parallel_for(std::size_t count, std::size_t threads, const Task& task) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) task(i);
        });
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& raw) {
    const ExperimentSpec spec = validate_experiment(raw);

    // Channels depend on the drop only, never on the sweep value.
    std::vector<ChannelSet> channels;
    channels.reserve(spec.num_drops);
    for (std::size_t d = 0; d < spec.num_drops; ++d) {
        const std::uint64_t seed = spec.base_seed + d;
        channels.push_back(generate_channels(spec.base, generate_geometry(spec.base, seed), seed));
    }

    ResultTable table;
    table.axis = spec.axis;
    for (double value : spec.values) {
        const SystemConfig cfg = config_at(spec, value);
        std::vector<std::vector<ResultRow>> per_drop(spec.num_drops);
        parallel_for(spec.num_drops, spec.threads, [&](std::size_t d) {
            for (SolverKind kind : spec.solvers) {
                ResultRow row = run_one(kind, cfg, channels[d], spec.options);
                row.sweep_value = value;
                row.drop = d;
                row.seed = spec.base_seed + d;
                per_drop[d].push_back(std::move(row));
            }
        });
        for (auto& rows : per_drop)
            for (auto& row : rows) table.rows.push_back(std::move(row));
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
        if (a.drop != b.drop) return a.drop < b.drop;
        return a.solver < b.solver;
    });
    return table;
}

// ---- CSV -------------------------------------------------------------------

namespace {

constexpr std::string_view kColumnsAfterSweep =
    "drop,seed,solver,method,power_total_w,power_transmission_w,power_decoding_w,outer_iters,cap_satisfied,status,"
    "message";

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Splits one record, honoring quoted fields; `pos` advances past the record.
std::vector<std::string> read_record(std::string_view text, std::size_t& pos) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    fields.back() += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
    return fields;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad number '" + s + "' in CSV");
    return v;
}

std::uint64_t parse_unsigned(const std::string& s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad integer '" + s + "' in CSV");
    return v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_csv(const ResultTable& table) {
    std::ostringstream os;
    os << sweep_column(table.axis) << ',' << kColumnsAfterSweep << '\n';
    for (const auto& r : table.rows) {
        os << format_number(r.sweep_value) << ',' << r.drop << ',' << r.seed << ',' << quote(r.solver) << ','
           << quote(r.method) << ',' << format_number(r.total_w) << ',' << format_number(r.transmission_w) << ','
           << format_number(r.decoding_w) << ',' << r.outer_iters << ',' << (r.cap_satisfied ? 1 : 0) << ','
           << to_string(r.status) << ',' << quote(r.message) << '\n';
    }
    return os.str();
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
    if (table.rows.empty()) throw std::invalid_argument("refusing to write an empty result table");
    write_file(path, format_csv(table));
}

ResultTable parse_csv_text(std::string_view text) {
    std::size_t pos = 0;
    const auto header = read_record(text, pos);
    ResultTable table;
    if (header.empty() || header[0].empty()) throw std::invalid_argument("CSV has no header");
    table.axis = parse_sweep_axis(header[0]);
    std::string rest;
    for (std::size_t i = 1; i < header.size(); ++i) rest += (i > 1 ? "," : "") + header[i];
    if (rest != kColumnsAfterSweep) throw std::invalid_argument("unexpected CSV header");
    while (pos < text.size()) {
        const auto f = read_record(text, pos);
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != header.size()) throw std::invalid_argument("CSV row has the wrong number of fields");
        ResultRow r;
        r.sweep_value = parse_double(f[0]);
        r.drop = parse_unsigned(f[1]);
        r.seed = parse_unsigned(f[2]);
        r.solver = f[3];
        r.method = f[4];
        r.total_w = parse_double(f[5]);
        r.transmission_w = parse_double(f[6]);
        r.decoding_w = parse_double(f[7]);
        r.outer_iters = parse_unsigned(f[8]);
        r.cap_satisfied = parse_unsigned(f[9]) != 0;
        r.status = parse_row_status(f[10]);
        r.message = f[11];
        table.rows.push_back(std::move(r));
    }
    return table;
}

ResultTable parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv_text(ss.str());
}

void emit_timing_csv(const ResultTable& table, const std::filesystem::path& path) {
    std::ostringstream os;
    os << sweep_column(table.axis) << ",drop,solver,wall_time_s\n";
    for (const auto& r : table.rows)
        os << format_number(r.sweep_value) << ',' << r.drop << ',' << quote(r.solver) << ','
           << format_number(r.wall_time_s) << '\n';
    write_file(path, os.str());
}

// ---- plot data -------------------------------------------------------------

std::map<std::string, std::vector<SeriesPoint>> aggregate_series(const ResultTable& table) {
    std::map<std::string, std::vector<SeriesPoint>> series;
    for (const auto& r : table.rows) {
        auto& points = series[r.solver];
        auto it = std::find_if(points.begin(), points.end(),
                               [&](const SeriesPoint& p) { return p.sweep_value == r.sweep_value; });
        if (it == points.end()) it = points.insert(points.end(), SeriesPoint{r.sweep_value, 0.0, 0, 0});
        auto& p = *it;
        if (r.status == RowStatus::Error) continue;
        p.mean_total_w += r.total_w;
        ++p.samples;
        if (!r.cap_satisfied) ++p.cap_violations;
    }
    for (auto& [name, points] : series) {
        std::sort(points.begin(), points.end(),
                  [](const SeriesPoint& a, const SeriesPoint& b) { return a.sweep_value < b.sweep_value; });
        for (auto& p : points)
            p.mean_total_w = p.samples ? p.mean_total_w / static_cast<double>(p.samples)
                                       : std::numeric_limits<double>::quiet_NaN();
    }
    return series;
}

std::vector<std::filesystem::path> emit_plot_data(const ResultTable& table, const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    for (const auto& [solver, points] : aggregate_series(table)) {
        std::ostringstream os;
        os << "# " << sweep_column(table.axis) << " mean_power_total_w\n";
        for (const auto& p : points) os << format_number(p.sweep_value) << ' ' << format_number(p.mean_total_w) << '\n';
        const auto path = dir / ("series_" + solver + ".dat");
        write_file(path, os.str());
        written.push_back(path);
    }
    return written;
}

}  // namespace noma
