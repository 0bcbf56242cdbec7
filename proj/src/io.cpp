#include "trudlab/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "trudlab/errors.hpp"

namespace trudlab {

namespace {

std::string shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json named(const NamedValues& values) {
    Json out = Json::object();
    for (const auto& [k, v] : values) out[k] = v;
    return out;
}

Json point(const SpaceTimePoint& pt) { return Json{{"r", pt.r}, {"t", pt.t}}; }

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    // Round-trip precision for every double written as text.
    out << std::setprecision(17);
    return out;
}

}  // namespace

std::string exponent_label(const Exponent& p) { return p.is_infinite() ? "inf" : shortest(p.value()); }

Json to_json(const ResidualReport& r) {
    return Json{{"family", r.family},
                {"p", exponent_label(r.p)},
                {"n", r.n},
                {"params", named(r.params)},
                {"derived", named(r.derived)},
                {"min_residual", r.min_residual},
                {"max_residual", r.max_residual},
                {"argmin", point(r.argmin)},
                {"argmax", point(r.argmax)},
                {"samples", r.samples},
                {"tolerance", r.tolerance},
                {"scale", r.scale},
                {"verdict", to_string(r.verdict)},
                {"expected", to_string(r.expected)},
                {"matches_expected", r.matches_expected()},
                {"seed", r.seed},
                {"zero_base_hits", r.zero_base_hits}};
}

Json to_json(const EigenResult& e) {
    const auto& s = e.eigenfunction;
    return Json{{"p", exponent_label(s.p)},
                {"n", s.n},
                {"R", s.grid.R},
                {"intervals", s.grid.intervals},
                {"lambda", e.lambda},
                {"bracket", {e.bracket_low, e.bracket_high}},
                {"bisection_iterations", e.bisection_iterations},
                {"residual_norm", e.residual_norm},
                {"psi0", s.psi.empty() ? 0.0 : s.psi.front()}};
}

Json to_json(const BvpResult& b) {
    const auto& s = b.solution;
    return Json{{"p", exponent_label(s.p)},
                {"n", s.n},
                {"R", s.grid.R},
                {"intervals", s.grid.intervals},
                {"lambda", b.lambda},
                {"delta", b.delta},
                {"M_lambda", b.M_lambda},
                {"residual_norm", flux_residual(s, 0.0)}};
}

Json to_json(const ScalingResult& s) {
    return Json{{"radii", s.radii},
                {"lambdas", s.lambdas},
                {"products", s.products},
                {"median", s.median},
                {"spread", s.spread}};
}

Json to_json(const SolverRun& run) {
    return Json{{"p", exponent_label(run.config.p)},
                {"n", run.config.n},
                {"scheme", to_string(run.config.scheme)},
                {"levels", run.field.levels()},
                {"nodes", run.field.grid.nodes()},
                {"steps", run.steps},
                {"newton_iterations", run.newton_iterations},
                {"step_halvings", run.step_halvings},
                {"epsilon_reg", run.epsilon_reg},
                {"consistency_bound", run.consistency_bound},
                {"space_gap", run.space_gap},
                {"time_gap", run.time_gap},
                {"residual_audit",
                 {{"max_residual", run.audit_residual},
                  {"bound", std::isfinite(run.residual_bound) ? Json(run.residual_bound) : Json("not estimated")},
                  {"r_min", run.audit_r_min},
                  {"t_min", run.audit_t_min},
                  {"pass", run.audit_within_bound()}}}};
}

Json to_json(const ExperimentReport& rep) {
    Json quantities = Json::array();
    for (const auto& q : rep.quantities) {
        quantities.push_back({{"name", q.name},
                              {"measured", q.measured},
                              {"target", q.target},
                              {"tolerance", q.tolerance},
                              {"relation", to_string(q.relation)},
                              {"target_source", q.target_source},
                              {"pass", q.pass}});
    }
    Json flags = Json::object();
    for (const auto& [k, v] : rep.flags) flags[k] = v;
    Json tables = Json::array();
    for (const auto& t : rep.tables) tables.push_back({{"name", t.name}, {"header", t.header}, {"rows", t.rows.size()}});
    return Json{{"experiment", rep.name},
                {"p", exponent_label(rep.p)},
                {"n", rep.n},
                {"inputs", named(rep.inputs)},
                {"quantities", quantities},
                {"flags", flags},
                {"diagnostics", named(rep.diagnostics)},
                {"tables", tables},
                {"runtime_seconds", rep.runtime_seconds},
                {"pass", rep.passed()}};
}

void write_json(const std::filesystem::path& path, const Json& value) {
    auto out = open_for_write(path);
    out << value.dump(2) << '\n';
}

void write_field_csv(const std::filesystem::path& path, const SpaceTimeField& field) {
    auto out = open_for_write(path);
    out << "t,r,u\n";
    for (std::size_t j = 0; j < field.levels(); ++j) {
        for (std::size_t i = 0; i < field.grid.nodes(); ++i) {
            out << field.times[j] << ',' << field.grid.r(i) << ',' << field.values[j][i] << '\n';
        }
    }
}

void write_profile_csv(const std::filesystem::path& path, const RadialSamples& s) {
    auto out = open_for_write(path);
    out << "r,psi,flux\n";
    for (std::size_t i = 0; i < s.psi.size(); ++i) {
        out << s.grid.r(i) << ',' << s.psi[i] << ',' << s.flux[i] << '\n';
    }
}

void write_table_csv(const std::filesystem::path& path, const Table& table) {
    auto out = open_for_write(path);
    for (std::size_t k = 0; k < table.header.size(); ++k) out << (k ? "," : "") << table.header[k];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
        out << '\n';
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y%m%dT%H%M%S") << std::setw(3) << std::setfill('0') << ms << 'Z';
    return out.str();
}

std::string output_stem(const std::string& name, const Exponent& p, int n, const std::string& timestamp) {
    return name + "-" + exponent_label(p) + "-" + std::to_string(n) + "-" + timestamp;
}

}  // namespace trudlab
