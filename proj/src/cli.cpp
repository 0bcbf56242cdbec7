#include "trudlab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "trudlab/barriers.hpp"
#include "trudlab/eigensolver.hpp"
#include "trudlab/errors.hpp"
#include "trudlab/experiments.hpp"
#include "trudlab/pde_solver.hpp"

namespace trudlab::cli {

namespace {

namespace fs = std::filesystem;

enum class Kind { Number, Integer, Text, Boolean, NumberList, TextList };

/// A config key. A null fallback means "derived at run time" and is echoed as null.
struct Key {
    std::string name;
    Kind kind;
    Json fallback;
    std::string help;
};

using Schema = std::vector<Key>;

const Schema& verify_schema() {
    static const Schema s{
        {"family", Kind::Text, nullptr, "barrier family (eigen26, growth27, kernel, ...)"},
        {"p", Kind::Text, "2", "exponent: decimal >= 2 or inf"},
        {"n", Kind::Integer, 2, "dimension"},
        {"R", Kind::Number, 1.0, "ball radius"},
        {"T", Kind::Number, 1.0, "growth barrier horizon"},
        {"alpha", Kind::Number, nullptr, "growth/flattening/boundary exponent"},
        {"b", Kind::Number, nullptr, "growth barrier b (default half the admissible bound)"},
        {"M", Kind::Number, 2.0, "upper barrier level"},
        {"m", Kind::Number, 0.5, "lower barrier level"},
        {"sign", Kind::Integer, 1, "power solution sign"},
        {"coef0", Kind::Number, 1.0, "power solution f(t) = coef0 + coef1 t"},
        {"coef1", Kind::Number, 0.5, "power solution f(t) = coef0 + coef1 t"},
        {"lambda", Kind::Number, nullptr, "time factor or boundary barrier lambda"},
        {"mu", Kind::Number, nullptr, "separated solution rate (default lambda_R)"},
        {"delta", Kind::Number, 1.0, "boundary value delta"},
        {"theta", Kind::Number, 0.5, "boundary barrier theta (n < p)"},
        {"rho", Kind::Number, 0.5, "boundary barrier inner radius (p <= n)"},
        {"intervals", Kind::Integer, 4000, "profile grid for eigen-based families"},
        {"samples", Kind::Integer, 10000, "tensor grid samples"},
        {"random_samples", Kind::Integer, 1000, "random samples"},
        {"tolerance", Kind::Number, 1e-9, "relative sign tolerance"},
        {"seed", Kind::Integer, 0x7d1a5eed, "random sample seed"},
        {"expect", Kind::Text, nullptr, "verdict to require instead of the family's own"},
        {"r_lo", Kind::Number, nullptr, "sample box"},
        {"r_hi", Kind::Number, nullptr, "sample box"},
        {"t_lo", Kind::Number, nullptr, "sample box"},
        {"t_hi", Kind::Number, nullptr, "sample box"},
    };
    return s;
}

const Schema& eigen_schema() {
    static const Schema s{
        {"p", Kind::Text, "2", "exponent: decimal >= 2"},
        {"n", Kind::Integer, 2, "dimension"},
        {"R", Kind::Number, 1.0, "ball radius"},
        {"tol", Kind::Number, 1e-8, "bisection bracket width"},
        {"intervals", Kind::Integer, 10000, "radial grid intervals"},
        {"start_fraction", Kind::Number, 1e-6, "series start as a fraction of R"},
        {"scaling", Kind::NumberList, Json::array(), "radii for the lambda_R R^p check"},
        {"scaling_tolerance", Kind::Number, 1e-5, "largest accepted scaling spread"},
        {"bvp_lambda", Kind::Number, nullptr, "also solve the delta boundary problem at this lambda"},
        {"delta", Kind::Number, 1.0, "boundary value for the delta problem"},
    };
    return s;
}

const Schema& solve_schema() {
    static const Schema s{
        {"p", Kind::Text, "2", "exponent: decimal >= 2 or inf"},
        {"n", Kind::Integer, 2, "dimension"},
        {"R", Kind::Number, 1.0, "ball radius"},
        {"intervals", Kind::Integer, 200, "radial intervals"},
        {"dt", Kind::Number, nullptr, "fixed step (default adaptive)"},
        {"t_end", Kind::Number, 1.0, "final time"},
        {"scheme", Kind::Text, "LogImplicit", "LogImplicit, DirectExplicit or DirectImplicit"},
        {"tolerance", Kind::Number, 1e-10, "Newton tolerance"},
        {"cfl", Kind::Number, 0.4, "explicit step fraction"},
        {"estimate_consistency", Kind::Boolean, true, "run half-resolution companions"},
        {"data", Kind::Text, "constant", "constant, eigen, straddle or paraboloid"},
        {"value", Kind::Number, 1.0, "constant data value"},
        {"amplitude", Kind::Number, 1.0, "eigen or paraboloid amplitude"},
        {"offset", Kind::Number, 1.0, "paraboloid boundary value"},
        {"m", Kind::Number, 0.5, "straddle minimum"},
        {"M", Kind::Number, 2.0, "straddle maximum"},
        {"boundary", Kind::Number, nullptr, "constant boundary value overriding the data default"},
        {"dt_initial", Kind::Number, nullptr, "first adaptive step"},
        {"growth", Kind::Number, 1.1, "adaptive step growth"},
        {"dt_max", Kind::Number, nullptr, "largest adaptive step"},
        {"record_intervals", Kind::Integer, 200, "stored levels for the explicit scheme"},
        {"eigen_intervals", Kind::Integer, 4000, "grid for eigenfunction data"},
    };
    return s;
}

const Schema& experiment_schema(const std::string& name) {
    static const std::map<std::string, Schema> schemas{
        {"decay",
         {{"p", Kind::Text, "2", "exponent"},
          {"n", Kind::Integer, 2, "dimension"},
          {"R", Kind::Number, 1.0, "ball radius"},
          {"intervals", Kind::Integer, 400, "radial intervals"},
          {"steps", Kind::Integer, 2000, "time steps"},
          {"efolds", Kind::Number, 5.0, "horizon in e-folds"},
          {"window_fraction", Kind::Number, 0.5, "fitted fraction of the horizon"},
          {"relative_tolerance", Kind::Number, 0.02, "slope tolerance"},
          {"estimate_consistency", Kind::Boolean, true, "run half-resolution companions"}}},
        {"flatten",
         {{"p", Kind::Text, "3", "exponent"},
          {"n", Kind::Integer, 2, "dimension"},
          {"R", Kind::Number, 1.0, "ball radius"},
          {"m", Kind::Number, 0.5, "data minimum"},
          {"M", Kind::Number, 2.0, "data maximum"},
          {"alpha", Kind::Number, nullptr, "barrier exponent (default min(1, largest admissible))"},
          {"intervals", Kind::Integer, 200, "radial intervals"},
          {"tolerance", Kind::Number, 1e-10, "Newton tolerance"},
          {"horizon_factor", Kind::Number, 10.0, "t_end over max(T0, T1)"},
          {"center_tolerance", Kind::Number, 0.01, "accepted |u - 1| at t_end"},
          {"max_step_fraction", Kind::Number, 1e-3, "largest step over t_end"}}},
        {"pl",
         {{"p", Kind::Text, "2", "exponent"},
          {"n", Kind::Integer, 2, "dimension"},
          {"m", Kind::Number, 0.5, "lower level"},
          {"M", Kind::Number, 2.0, "upper level"},
          {"eps", Kind::NumberList, Json{1e-4, 2e-4, 4e-4, 8e-4}, "growth rates"},
          {"radii", Kind::NumberList, Json{1.0, 2.0, 4.0, 8.0}, "ball radii"},
          {"t_probe", Kind::Number, 1.0, "probe time"}}},
        {"catalog",
         {{"p", Kind::TextList, Json{"2", "2.5", "3", "4", "inf"}, "exponents"},
          {"n", Kind::NumberList, Json{2, 3}, "dimensions"},
          {"samples", Kind::Integer, 10000, "tensor grid samples"},
          {"random_samples", Kind::Integer, 1000, "random samples"},
          {"tolerance", Kind::Number, 1e-9, "relative sign tolerance"},
          {"seed", Kind::Integer, 0x7d1a5eed, "random sample seed"}}},
    };
    const auto it = schemas.find(name);
    if (it == schemas.end()) throw ConfigError("unknown experiment '" + name + "' (decay, flatten, pl, catalog)");
    return it->second;
}

const Schema& schema_for(const std::string& command, const std::string& name) {
    if (command == "verify") return verify_schema();
    if (command == "eigen") return eigen_schema();
    if (command == "solve") return solve_schema();
    if (command == "experiment") return experiment_schema(name);
    throw ConfigError("unknown command '" + command + "'");
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ConfigError("key '" + key + "': not a number: '" + text + "'");
    return v;
}

Json from_flag(const Key& key, const std::string& text) {
    switch (key.kind) {
        case Kind::Number: return parse_number(key.name, text);
        case Kind::Integer: {
            const double v = parse_number(key.name, text);
            if (v != std::floor(v)) throw ConfigError("key '" + key.name + "': not an integer: '" + text + "'");
            return static_cast<long long>(v);
        }
        case Kind::Text: return text;
        case Kind::Boolean:
            if (text == "true" || text == "1") return true;
            if (text == "false" || text == "0") return false;
            throw ConfigError("key '" + key.name + "': not a boolean: '" + text + "'");
        case Kind::NumberList: {
            Json list = Json::array();
            for (const auto& part : split(text)) list.push_back(parse_number(key.name, part));
            return list;
        }
        case Kind::TextList: {
            Json list = Json::array();
            for (const auto& part : split(text)) list.push_back(part);
            return list;
        }
    }
    return nullptr;
}

std::string number_label(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Type-checks a file value. Numbers are accepted where text exponents are expected.
Json from_file(const Key& key, const Json& value) {
    if (value.is_null() && key.fallback.is_null()) return value;
    auto bad = [&key]() { return ConfigError("key '" + key.name + "': wrong value type"); };
    switch (key.kind) {
        case Kind::Number:
            if (!value.is_number()) throw bad();
            return value.get<double>();
        case Kind::Integer:
            if (!value.is_number() || value.get<double>() != std::floor(value.get<double>())) throw bad();
            return value.get<long long>();
        case Kind::Text:
            if (value.is_number()) return number_label(value.get<double>());
            if (!value.is_string()) throw bad();
            return value;
        case Kind::Boolean:
            if (!value.is_boolean()) throw bad();
            return value;
        case Kind::NumberList:
            if (!value.is_array()) throw bad();
            for (const auto& v : value) {
                if (!v.is_number()) throw bad();
            }
            return value;
        case Kind::TextList: {
            if (!value.is_array()) throw bad();
            Json list = Json::array();
            for (const auto& v : value) {
                if (v.is_number()) {
                    list.push_back(number_label(v.get<double>()));
                } else if (v.is_string()) {
                    list.push_back(v);
                } else {
                    throw bad();
                }
            }
            return list;
        }
    }
    return value;
}

const Key* find_key(const Schema& schema, const std::string& name) {
    for (const auto& k : schema) {
        if (k.name == name) return &k;
    }
    return nullptr;
}

double num(const Json& cfg, const std::string& key) { return cfg.at(key).get<double>(); }
int integer(const Json& cfg, const std::string& key) { return cfg.at(key).get<int>(); }
std::size_t count(const Json& cfg, const std::string& key) {
    const long long v = cfg.at(key).get<long long>();
    if (v < 0) throw ConfigError("key '" + key + "' must be nonnegative");
    return static_cast<std::size_t>(v);
}
std::optional<double> opt(const Json& cfg, const std::string& key) {
    const Json& v = cfg.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}
Exponent exponent(const Json& cfg) { return Exponent::parse(cfg.at("p").get<std::string>()); }

/// Everything a command needs besides its config.
struct Context {
    std::ostream& out;
    std::ostream& err;
    fs::path dir;
    unsigned jobs = 1;
    std::string timestamp;
};

Json manifest(const std::string& command, const Json& cfg) {
    return Json{{"command", command}, {"config", cfg}};
}

fs::path written(Context& ctx, const fs::path& path) {
    ctx.out << "wrote " << path.string() << '\n';
    return path;
}

// ---- verify ----

BarrierSpec build_family(const Json& cfg) {
    if (cfg.at("family").is_null()) throw ConfigError("verify needs --family");
    const Family family = parse_family(cfg.at("family").get<std::string>());
    const Exponent p = exponent(cfg);
    const int n = integer(cfg, "n");
    const double R = num(cfg, "R");
    auto eigen = [&]() {
        EigenOptions eo;
        eo.intervals = count(cfg, "intervals");
        return first_eigenvalue(p, n, R, eo);
    };
    switch (family) {
        case Family::EigenBarrier26: return make_eigen_barrier(p, n, R);
        case Family::GrowthBarrier27: {
            const double T = num(cfg, "T");
            const double alpha = opt(cfg, "alpha").value_or(1.0);
            const double b = opt(cfg, "b").value_or(0.5 * growth_barrier_b_bound(p, T, alpha));
            return make_growth_barrier(p, n, T, alpha, b);
        }
        case Family::Kernel29: return make_kernel(p, n);
        case Family::PowerSolution270: {
            const double c0 = num(cfg, "coef0");
            const double c1 = num(cfg, "coef1");
            return make_power_solution(
                p, n, integer(cfg, "sign"), [=](double t) { return c0 + c1 * t; }, [=](double) { return c1; });
        }
        case Family::UpperBound320:
        case Family::InfUpperBound:
            return make_thm161_upper(p, n, R, num(cfg, "M"), opt(cfg, "alpha").value_or(default_flatten_alpha(p)));
        case Family::LowerBound324:
        case Family::InfLowerBound:
            return make_thm161_lower(p, n, R, num(cfg, "m"), opt(cfg, "alpha").value_or(default_flatten_alpha(p)));
        case Family::TimeFactor35: {
            const double lambda = opt(cfg, "lambda").value_or(0.5 * eigen().lambda);
            const BvpResult bvp = solve_delta_bvp(p, n, R, lambda, num(cfg, "delta"), count(cfg, "intervals"));
            // beta(0, T) = 3, as in the catalog.
            const double T = p.degree() * std::log(3.0) / lambda;
            return attach_profile(make_time_factor(lambda, p, 0.0, T), bvp.solution.profile(), n);
        }
        case Family::BoundaryBarrierHighP: {
            BoundaryCaseHigh hi{num(cfg, "theta"), R, num(cfg, "delta"), 0.0};
            hi.lambda = opt(cfg, "lambda").value_or(0.5 * boundary_high_lambda_bound(p, n, hi.theta, R));
            return make_boundary_barrier(p, n, hi);
        }
        case Family::BoundaryBarrierLowP: {
            const double pv = p.value();
            BoundaryCaseLow lo{opt(cfg, "alpha").value_or(std::max(0.0, (n - pv) / (pv - 1.0)) + 0.5),
                               num(cfg, "rho"), R, num(cfg, "delta"), 0.0};
            lo.lambda = opt(cfg, "lambda").value_or(0.5 * boundary_low_lambda_bound(p, n, lo.alpha, lo.rho, R));
            return make_boundary_barrier(p, n, lo);
        }
        case Family::Paraboloid314: return make_paraboloid(p, n, R);
        case Family::Separated25: {
            const EigenResult e = eigen();
            return separated_solution(e.eigenfunction.profile(), e.lambda, opt(cfg, "mu").value_or(e.lambda), p, n);
        }
    }
    throw ConfigError("unhandled family");
}

int cmd_verify(Context& ctx, const Json& cfg) {
    const BarrierSpec spec = build_family(cfg);
    Region region = spec.default_region;
    if (auto v = opt(cfg, "r_lo")) region.r_lo = *v;
    if (auto v = opt(cfg, "r_hi")) region.r_hi = *v;
    if (auto v = opt(cfg, "t_lo")) region.t_lo = *v;
    if (auto v = opt(cfg, "t_hi")) region.t_hi = *v;
    VerifyOptions vo;
    vo.samples = count(cfg, "samples");
    vo.random_samples = count(cfg, "random_samples");
    vo.tolerance = num(cfg, "tolerance");
    vo.seed = cfg.at("seed").get<std::uint64_t>();
    const Verdict expected =
        cfg.at("expect").is_null() ? spec.expected : parse_verdict(cfg.at("expect").get<std::string>());
    const ResidualReport report = verify_sign(spec, region, expected, vo);

    ctx.out << "family " << report.family << " p=" << exponent_label(spec.p) << " n=" << spec.n << '\n'
            << "residual in [" << report.min_residual << ", " << report.max_residual << "] scale " << report.scale
            << '\n'
            << "verdict " << to_string(report.verdict) << ", expected " << to_string(report.expected) << '\n';
    Json m = manifest("verify", cfg);
    m["region"] = {{"r_lo", region.r_lo}, {"r_hi", region.r_hi}, {"t_lo", region.t_lo}, {"t_hi", region.t_hi}};
    m["report"] = to_json(report);
    write_json(written(ctx, ctx.dir / (output_stem("verify-" + report.family, spec.p, spec.n, ctx.timestamp) + ".json")), m);
    return report.matches_expected() ? Success : AssertionFailure;
}

// ---- eigen ----

int cmd_eigen(Context& ctx, const Json& cfg) {
    const Exponent p = exponent(cfg);
    const int n = integer(cfg, "n");
    const double R = num(cfg, "R");
    EigenOptions eo;
    eo.tol = num(cfg, "tol");
    eo.intervals = count(cfg, "intervals");
    eo.start_fraction = num(cfg, "start_fraction");
    const EigenResult e = first_eigenvalue(p, n, R, eo);
    ctx.out.precision(12);
    ctx.out << "lambda = " << e.lambda << '\n';

    const std::string stem = output_stem("eigen", p, n, ctx.timestamp);
    Json m = manifest("eigen", cfg);
    m["eigen"] = to_json(e);
    int code = Success;
    const auto radii = cfg.at("scaling").get<std::vector<double>>();
    if (!radii.empty()) {
        const ScalingResult s = scaling_check(p, n, radii, eo, ctx.jobs);
        ctx.out << "scaling spread = " << s.spread << '\n';
        m["scaling"] = to_json(s);
        if (!(s.spread <= num(cfg, "scaling_tolerance"))) code = AssertionFailure;
    }
    if (auto bl = opt(cfg, "bvp_lambda")) {
        const double delta = num(cfg, "delta");
        const BvpResult b = solve_delta_bvp(p, n, R, *bl, delta, eo.intervals);
        const double bound = blowup_lower_bound(p, *bl, e.lambda, delta);
        ctx.out << "M_lambda = " << b.M_lambda << " (lower bound " << bound << ")\n";
        m["bvp"] = to_json(b);
        m["bvp"]["blowup_lower_bound"] = bound;
        write_profile_csv(written(ctx, ctx.dir / (stem + "-bvp.csv")), b.solution);
    }
    write_profile_csv(written(ctx, ctx.dir / (stem + "-profile.csv")), e.eigenfunction);
    write_json(written(ctx, ctx.dir / (stem + ".json")), m);
    return code;
}

// ---- solve ----

int cmd_solve(Context& ctx, const Json& cfg) {
    SolverConfig sc;
    sc.p = exponent(cfg);
    sc.n = integer(cfg, "n");
    sc.R = num(cfg, "R");
    sc.intervals = count(cfg, "intervals");
    sc.dt = opt(cfg, "dt");
    sc.t_end = num(cfg, "t_end");
    sc.scheme = parse_scheme(cfg.at("scheme").get<std::string>());
    sc.tolerance = num(cfg, "tolerance");
    sc.cfl = num(cfg, "cfl");
    sc.estimate_consistency = cfg.at("estimate_consistency").get<bool>();
    sc.adaptive.dt_initial = opt(cfg, "dt_initial").value_or(0.0);
    sc.adaptive.growth = num(cfg, "growth");
    sc.adaptive.dt_max = opt(cfg, "dt_max").value_or(0.0);
    sc.adaptive.record_intervals = count(cfg, "record_intervals");

    const std::string data = cfg.at("data").get<std::string>();
    const double R = sc.R;
    std::function<double(double, double)> oracle;
    if (data == "constant") {
        const double c = num(cfg, "value");
        sc.initial = [c](double) { return c; };
        sc.boundary = [c](double) { return c; };
    } else if (data == "eigen") {
        EigenOptions eo;
        eo.intervals = count(cfg, "eigen_intervals");
        const EigenResult e = first_eigenvalue(sc.p, sc.n, R, eo);
        const RadialProfile psi = e.eigenfunction.profile();
        const double a = num(cfg, "amplitude");
        const double rate = e.lambda / sc.p.degree();
        sc.initial = [=](double r) { return a * std::max(0.0, psi.value(std::min(r, R))); };
        sc.boundary = [](double) { return 0.0; };
        // Separated solution a psi(r) exp(-lambda t / (p-1)).
        oracle = [=](double r, double t) { return a * std::max(0.0, psi.value(std::min(r, R))) * std::exp(-rate * t); };
    } else if (data == "straddle") {
        const double m = num(cfg, "m");
        const double M = num(cfg, "M");
        sc.initial = [=](double r) { return straddling_data(r, R, m, M); };
        sc.boundary = [](double) { return 1.0; };
    } else if (data == "paraboloid") {
        const double a = num(cfg, "amplitude");
        const double c = num(cfg, "offset");
        sc.initial = [=](double r) { return c + a * (1.0 - (r / R) * (r / R)); };
        sc.boundary = [c](double) { return c; };
    } else {
        throw ConfigError("key 'data': unknown kind '" + data + "' (constant, eigen, straddle, paraboloid)");
    }
    if (auto g = opt(cfg, "boundary")) {
        const double v = *g;
        sc.boundary = [v](double) { return v; };
    }

    const SolverRun run = solve_gamma_p_radial(sc);
    Json m = manifest("solve", cfg);
    m["run"] = to_json(run);
    ctx.out << "levels " << run.field.levels() << ", consistency bound " << run.consistency_bound
            << ", residual audit " << run.audit_residual << " <= " << run.residual_bound << '\n';
    if (oracle) {
        double worst = 0.0;
        for (std::size_t j = 0; j < run.field.levels(); ++j) {
            for (std::size_t i = 0; i < run.field.grid.nodes(); ++i) {
                worst = std::max(worst, std::abs(run.field.values[j][i] -
                                                 oracle(run.field.grid.r(i), run.field.times[j])));
            }
        }
        m["oracle"] = {{"kind", "separated eigen solution"}, {"max_abs_error", worst}};
        ctx.out << "max error vs separated solution " << worst << '\n';
    }
    const std::string stem = output_stem("solve", sc.p, sc.n, ctx.timestamp);
    write_field_csv(written(ctx, ctx.dir / (stem + "-field.csv")), run.field);
    write_json(written(ctx, ctx.dir / (stem + ".json")), m);
    return run.audit_within_bound() ? Success : AssertionFailure;
}

// ---- experiment ----

void print_report(std::ostream& out, const ExperimentReport& rep) {
    out << rep.name << " p=" << exponent_label(rep.p) << " n=" << rep.n << ": " << (rep.passed() ? "pass" : "FAIL")
        << " (" << rep.runtime_seconds << " s)\n";
    for (const auto& q : rep.quantities) {
        if (q.pass && rep.name == "catalog") continue;
        out << "  " << q.name << " = " << q.measured << " " << to_string(q.relation) << " " << q.target << " +- "
            << q.tolerance << (q.pass ? "" : "  FAIL") << '\n';
    }
    for (const auto& [name, ok] : rep.flags) {
        if (!ok) out << "  " << name << " FAIL\n";
    }
}

void write_report(Context& ctx, const Json& cfg, const ExperimentReport& rep) {
    const std::string stem = output_stem(rep.name, rep.p, rep.n, ctx.timestamp);
    Json m = manifest("experiment", cfg);
    m["report"] = to_json(rep);
    for (const auto& t : rep.tables) write_table_csv(written(ctx, ctx.dir / (stem + "-" + t.name + ".csv")), t);
    write_json(written(ctx, ctx.dir / (stem + ".json")), m);
}

int cmd_experiment(Context& ctx, const Json& cfg) {
    const std::string name = cfg.at("experiment").get<std::string>();
    std::vector<ExperimentReport> reports;
    if (name == "decay") {
        DecayOptions o;
        o.intervals = count(cfg, "intervals");
        o.steps = count(cfg, "steps");
        o.efolds = num(cfg, "efolds");
        o.window_fraction = num(cfg, "window_fraction");
        o.relative_tolerance = num(cfg, "relative_tolerance");
        o.estimate_consistency = cfg.at("estimate_consistency").get<bool>();
        reports.push_back(decay_experiment(exponent(cfg), integer(cfg, "n"), num(cfg, "R"), o));
    } else if (name == "flatten") {
        FlattenOptions o;
        o.intervals = count(cfg, "intervals");
        o.tolerance = num(cfg, "tolerance");
        o.horizon_factor = num(cfg, "horizon_factor");
        o.center_tolerance = num(cfg, "center_tolerance");
        o.max_step_fraction = num(cfg, "max_step_fraction");
        const Exponent p = exponent(cfg);
        reports.push_back(flatten_experiment(p, integer(cfg, "n"), num(cfg, "R"), num(cfg, "m"), num(cfg, "M"),
                                             opt(cfg, "alpha").value_or(default_flatten_alpha(p)), o));
    } else if (name == "pl") {
        reports.push_back(phragmen_lindelof_study(exponent(cfg), integer(cfg, "n"), num(cfg, "m"), num(cfg, "M"),
                                                  cfg.at("eps").get<std::vector<double>>(),
                                                  cfg.at("radii").get<std::vector<double>>(), num(cfg, "t_probe")));
    } else {
        VerifyOptions vo;
        vo.samples = count(cfg, "samples");
        vo.random_samples = count(cfg, "random_samples");
        vo.tolerance = num(cfg, "tolerance");
        vo.seed = cfg.at("seed").get<std::uint64_t>();
        std::vector<std::pair<Exponent, int>> cases;
        for (const auto& ps : cfg.at("p")) {
            for (const auto& nv : cfg.at("n")) cases.emplace_back(Exponent::parse(ps.get<std::string>()), nv.get<int>());
        }
        // Batches of `jobs` concurrent sweeps; reports keep the input order.
        for (std::size_t first = 0; first < cases.size(); first += ctx.jobs) {
            std::vector<std::future<ExperimentReport>> batch;
            for (std::size_t k = first; k < std::min(cases.size(), first + ctx.jobs); ++k) {
                const auto [p, n] = cases[k];
                batch.push_back(std::async(ctx.jobs > 1 ? std::launch::async : std::launch::deferred,
                                           [p, n, vo]() { return catalog_experiment(p, n, vo); }));
            }
            for (auto& f : batch) reports.push_back(f.get());
        }
    }
    bool pass = true;
    for (const auto& rep : reports) {
        print_report(ctx.out, rep);
        write_report(ctx, cfg, rep);
        pass = pass && rep.passed();
    }
    return pass ? Success : AssertionFailure;
}

Json load_config_file(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
    // A written manifest replays through its config echo.
    if (j.contains("command") && j.contains("config")) {
        if (j.at("command") != command) {
            throw ConfigError("config file " + path + " was written by '" + j.at("command").get<std::string>() + "'");
        }
        return j.at("config");
    }
    return j;
}

}  // namespace

Json resolve_config(const std::string& command, const std::string& name, const Json& file,
                    const std::vector<std::pair<std::string, std::string>>& flags) {
    std::string experiment = name;
    if (command == "experiment" && experiment.empty()) {
        if (!file.contains("experiment") || !file.at("experiment").is_string()) {
            throw ConfigError("experiment needs a name (decay, flatten, pl, catalog)");
        }
        experiment = file.at("experiment").get<std::string>();
    }
    const Schema& schema = schema_for(command, experiment);
    Json cfg = Json::object();
    if (command == "experiment") cfg["experiment"] = experiment;
    for (const auto& k : schema) cfg[k.name] = k.fallback;
    for (const auto& [key, value] : file.items()) {
        if (command == "experiment" && key == "experiment") {
            if (value != experiment) throw ConfigError("config names experiment " + value.dump());
            continue;
        }
        const Key* k = find_key(schema, key);
        if (!k) throw ConfigError("unknown config key '" + key + "'");
        cfg[key] = from_file(*k, value);
    }
    for (const auto& [key, text] : flags) {
        const Key* k = find_key(schema, key);
        if (!k) throw ConfigError("option --" + key + " does not apply to " + (experiment.empty() ? command : experiment));
        cfg[key] = from_flag(*k, text);
    }
    return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial barrier, eigenvalue and evolution toolkit for the doubly nonlinear p-Laplace equation"};
    app.require_subcommand(1);

    std::map<std::string, std::string> raw;
    std::string config_path;
    std::string out_dir;
    unsigned jobs = 1;
    std::string experiment_name;

    auto add_common = [&](CLI::App* sub, const std::vector<const Schema*>& schemas) {
        sub->add_option("--config", config_path, "JSON config file or a written manifest");
        sub->add_option("--out", out_dir, "output directory (default $TRUDLAB_OUT, then ./trudlab-out)");
        sub->add_option("--jobs", jobs, "parallel sweep entries")->check(CLI::PositiveNumber);
        std::vector<std::string> seen;
        for (const Schema* schema : schemas) {
            for (const auto& k : *schema) {
                if (std::find(seen.begin(), seen.end(), k.name) != seen.end()) continue;
                seen.push_back(k.name);
                sub->add_option("--" + k.name, raw[k.name], k.help);
            }
        }
    };
    CLI::App* verify = app.add_subcommand("verify", "sign test of a barrier family");
    add_common(verify, {&verify_schema()});
    CLI::App* eigen = app.add_subcommand("eigen", "first Dirichlet eigenvalue of the radial p-Laplacian");
    add_common(eigen, {&eigen_schema()});
    CLI::App* solve = app.add_subcommand("solve", "time-step the radial equation on a ball");
    add_common(solve, {&solve_schema()});
    CLI::App* experiment = app.add_subcommand("experiment", "decay, flatten, pl or catalog");
    experiment->add_option("name", experiment_name, "decay, flatten, pl or catalog");
    add_common(experiment, {&experiment_schema("decay"), &experiment_schema("flatten"), &experiment_schema("pl"),
                            &experiment_schema("catalog")});

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Success : UsageError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    try {
        std::vector<std::pair<std::string, std::string>> flags;
        for (const auto& [key, value] : raw) {
            const CLI::Option* o = chosen->get_option_no_throw("--" + key);
            if (o && o->count() > 0) flags.emplace_back(key, value);
        }
        const Json file = config_path.empty() ? Json::object() : load_config_file(config_path, command);
        const Json cfg = resolve_config(command, experiment_name, file, flags);

        Context ctx{out, err, {}, jobs, utc_timestamp()};
        if (!out_dir.empty()) {
            ctx.dir = out_dir;
        } else if (const char* env = std::getenv("TRUDLAB_OUT"); env && *env) {
            ctx.dir = env;
        } else {
            ctx.dir = "trudlab-out";
        }
        if (command == "verify") return cmd_verify(ctx, cfg);
        if (command == "eigen") return cmd_eigen(ctx, cfg);
        if (command == "solve") return cmd_solve(ctx, cfg);
        return cmd_experiment(ctx, cfg);
    } catch (const ConstraintViolation& e) {
        err << "error: " << e.what() << "\nadmissible bound: " << e.bound << '\n';
        return UsageError;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        return AssertionFailure;
    } catch (const std::exception& e) {
        // Config, domain, grid and unsupported-exponent errors, and unwritable outputs.
        err << "error: " << e.what() << '\n';
        return UsageError;
    }
}

}  // namespace trudlab::cli
