#include "cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hwcount/asymp_bulk.hpp"
#include "hwcount/asymp_hard.hpp"
#include "hwcount/asymp_semihard.hpp"
#include "hwcount/ensemble_sim.hpp"
#include "hwcount/mgf_exact.hpp"
#include "hwcount/parallel.hpp"
#include "hwcount/quad.hpp"

namespace hwcount::cli {

namespace {

const std::vector<std::pair<std::string, Command>> kCommands = {
    {"constants", Command::constants}, {"coeffs", Command::coeffs},   {"exact", Command::exact},
    {"cumulants", Command::cumulants}, {"compare", Command::compare}, {"sample", Command::sample},
    {"peak", Command::peak},
};

std::string command_name(Command c) {
    for (const auto& [name, cmd] : kCommands)
        if (cmd == c) return name;
    return "?";
}

Report null_if_nan(double v) { return std::isfinite(v) ? Report(v) : Report(nullptr); }

Report array(const std::vector<double>& v) {
    Report a = Report::array();
    for (double x : v) a.push_back(null_if_nan(x));
    return a;
}

Report matrix(const std::vector<std::vector<double>>& m) {
    Report a = Report::array();
    for (const auto& row : m) a.push_back(array(row));
    return a;
}

bool is_hard(const RunConfig& c) { return c.regime == "hard"; }

void require_asymptotic_regime(const RunConfig& c) {
    if (c.regime == "none")
        throw DomainError("this command needs --regime hard, semihard or bulk; physical --radii are accepted by "
                          "the exact command only");
}

// Four-term expansion a n + b g(n) + c + d / sqrt(n) with g = ln n (hard edge) or sqrt(n).
struct Expansion {
    std::array<double, 4> coeffs{};
    std::array<double, 4> terms{};
    double sum = 0.0;
};

Expansion expand(const RunConfig& c, long n, std::array<double, 4> coeffs) {
    const double nd = static_cast<double>(n);
    const double gauge = is_hard(c) ? std::log(nd) : std::sqrt(nd);
    Expansion e;
    e.coeffs = coeffs;
    e.terms = {coeffs[0] * nd, coeffs[1] * gauge, coeffs[2], coeffs[3] / std::sqrt(nd)};
    for (double t : e.terms) e.sum += t;
    return e;
}

// Asymptotic covariance of N(r_l), N(r_k) (l <= k); l == k gives the variance,
// and `mean` receives the mean expansion at r_l.
Expansion asymptotic_cumulants(const RunConfig& c, std::size_t l, std::size_t k, Expansion* mean) {
    const ModelParams& p = c.params;
    const double tol_hard = c.tol.value_or(1e-12), tol_soft = c.tol.value_or(1e-11);
    std::array<double, 4> mc{}, cc{};
    if (c.regime == "hard") {
        auto h = l == k ? cumulant_coeffs_hard(p, c.t[l], std::nullopt, tol_hard)
                        : cumulant_coeffs_hard(p, c.t[l], c.t[k], tol_hard);
        mc = {h.b1, h.c1, h.d1, h.e1};
        cc = {h.b11, h.c11, h.d11, h.e11};
    } else if (c.regime == "semihard") {
        auto h = l == k ? cumulant_coeffs_semihard(p, c.s[l], std::nullopt, tol_soft)
                        : cumulant_coeffs_semihard(p, c.s[l], c.s[k], tol_soft);
        mc = {h.b1, h.c1, h.d1, h.e1};
        cc = {0.0, h.c11, h.d11, h.e11};
    } else {
        if (mean) {
            auto d = coeff_derivatives_bulk(p, *c.r, {c.s[l]}, {1}, 0.5, tol_soft);
            mc = {d.C1, d.C2, d.C3, d.C4};
        }
        auto d = l == k ? coeff_derivatives_bulk(p, *c.r, {c.s[l]}, {2}, 0.5, tol_soft)
                        : coeff_derivatives_bulk(p, *c.r, {c.s[l], c.s[k]}, {1, 1}, 0.5, tol_soft);
        cc = {d.C1, d.C2, d.C3, d.C4};
    }
    if (mean) *mean = expand(c, p.n, mc);
    return expand(c, p.n, cc);
}

Report expansion_json(const Expansion& e) {
    return Report{{"coefficients", array({e.coeffs.begin(), e.coeffs.end()})},
                  {"terms", array({e.terms.begin(), e.terms.end()})},
                  {"asymptotic", e.sum}};
}

RadiiSet subset(const RadiiSet& rs, std::vector<std::size_t> idx) {
    RadiiSet out;
    for (auto i : idx) {
        out.radius.push_back(rs.radius[i]);
        out.log_ratio.push_back(rs.log_ratio[i]);
    }
    return out;
}

void run_constants(const RunConfig& c, Report& doc) {
    const auto k = universal_constants(c.tol.value_or(1e-12));
    doc["values"] = {{"I", k.I}, {"I1", k.I1}, {"I2", k.I2}, {"I3", k.I3}, {"I4", k.I4}};
    doc["residuals"] = {{"I1_minus_log_2sqrtpi_half", k.I1 - 0.5 * std::log(2.0 * std::sqrt(M_PI))},
                        {"I3_minus_I", k.I3 - k.I},
                        {"I4_minus_I2_plus_I", k.I4 - (k.I2 - k.I)}};
    doc["err_est"] = k.tol;
}

void run_coeffs(const RunConfig& c, const RadiiSpec& spec, Report& doc) {
    require_asymptotic_regime(c);
    const ModelParams& p = c.params;
    ExpansionCoeffs e;
    if (c.regime == "hard") {
        auto h = coeffs_hard<double>(p, spec.shape, spec.u, c.tol.value_or(1e-12));
        e.C1 = h.C1;
        e.C2 = h.C2;
        e.C3 = h.C3;
        e.C4 = h.C4;
        e.error_order = h.error_order;
        e.err_est = h.err_est;
    } else if (c.regime == "semihard") {
        e = coeffs_semihard<double>(p, spec.shape, spec.u, c.tol.value_or(1e-11));
    } else {
        e = coeffs_bulk<double>(p, spec.r, spec.shape, spec.u, c.tol.value_or(1e-11));
    }
    doc["values"] = {{"C1", e.C1},
                     {"C2", e.C2},
                     {"C3", e.C3},
                     {"C4", e.C4},
                     {"C2_gauge", is_hard(c) ? "ln n" : "sqrt n"},
                     {"error_order", e.error_order}};
    doc["err_est"] = e.err_est;
}

void run_exact(const RunConfig& c, const RadiiSpec& spec, Report& doc) {
    const auto rs = radii_set(c.params, spec);
    const auto res = log_mgf_exact(c.params, rs, spec.u);
    doc["values"] = {{"log_mgf", res.log_mgf}, {"radii", array(rs.radius)}};
}

void run_cumulants(const RunConfig& c, const RadiiSpec& spec, Report& doc) {
    require_asymptotic_regime(c);
    const ModelParams& p = c.params;
    const auto rs = radii_set(p, spec);
    const std::size_t m = rs.radius.size();
    double gap = 0.0;
    auto exact = [&](std::vector<std::size_t> idx, MultiIndex j) {
        const auto d = cumulant_exact_checked(p, subset(rs, std::move(idx)), j);
        gap = std::max(gap, std::abs(d.value - d.cross_check));
        return d.value;
    };
    Report means = Report::array(), vars = Report::array(), covs = Report::array();
    Report r_mean = Report::array(), r_var = Report::array(), r_cov = Report::array();
    for (std::size_t l = 0; l < m; ++l) {
        Expansion mean;
        const Expansion var = asymptotic_cumulants(c, l, l, &mean);
        const double km = exact({l}, {1}), kv = exact({l}, {2});
        Report em = expansion_json(mean), ev = expansion_json(var);
        em["index"] = l;
        em["exact"] = km;
        ev["index"] = l;
        ev["exact"] = kv;
        means.push_back(em);
        vars.push_back(ev);
        r_mean.push_back(km - mean.sum);
        r_var.push_back(kv - var.sum);
    }
    for (std::size_t l = 0; l < m; ++l)
        for (std::size_t k = l + 1; k < m; ++k) {
            const Expansion cov = asymptotic_cumulants(c, l, k, nullptr);
            const double kc = exact({l, k}, {1, 1});
            Report ec = expansion_json(cov);
            ec["index"] = {l, k};
            ec["exact"] = kc;
            covs.push_back(ec);
            r_cov.push_back(kc - cov.sum);
        }
    doc["values"] = {{"radii", array(rs.radius)}, {"mean", means}, {"variance", vars}, {"covariance", covs}};
    doc["residuals"] = {{"mean", r_mean}, {"variance", r_var}, {"covariance", r_cov}};
    doc["err_est"] = gap;
}

void run_compare(const RunConfig& c, const RadiiSpec& spec, Report& doc) {
    require_asymptotic_regime(c);
    if (c.n_grid.empty()) throw DomainError("compare needs --n-grid");
    RunConfig cc = c;
    cc.command = Command::coeffs;
    Report coeffs;
    run_coeffs(cc, spec, coeffs);
    const std::array<double, 4> C = {coeffs["values"]["C1"].get<double>(), coeffs["values"]["C2"].get<double>(),
                                     coeffs["values"]["C3"].get<double>(), coeffs["values"]["C4"].get<double>()};
    std::vector<double> ns, ex, res;
    std::array<std::vector<double>, 4> partial;
    for (long n : c.n_grid) {
        ModelParams p = c.params;
        p.n = n;
        const double e = log_mgf_exact(p, radii_set(p, spec), spec.u).log_mgf;
        const Expansion a = expand(c, n, C);
        double s = 0.0;
        for (int k = 0; k < 4; ++k) partial[k].push_back(s += a.terms[k]);
        ns.push_back(static_cast<double>(n));
        ex.push_back(e);
        res.push_back(e - s);
    }
    Report n_col = Report::array();
    for (long n : c.n_grid) n_col.push_back(n);
    doc["values"] = {{"n", n_col},
                     {"log_mgf_exact", array(ex)},
                     {"partial_1", array(partial[0])},
                     {"partial_2", array(partial[1])},
                     {"partial_3", array(partial[2])},
                     {"partial_4", array(partial[3])},
                     {"residual", array(res)},
                     {"coefficients", {{"C1", C[0]}, {"C2", C[1]}, {"C3", C[2]}, {"C4", C[3]}}},
                     {"error_order", coeffs["values"]["error_order"]}};
    doc["residuals"] = array(res);
    doc["err_est"] = coeffs["err_est"];
}

void run_sample(const RunConfig& c, const RadiiSpec& spec, Report& doc) {
    require_asymptotic_regime(c);
    const ModelParams& p = c.params;
    const auto rs = radii_set(p, spec);
    const std::size_t m = rs.radius.size();
    std::vector<double> pm(m), pv(m), scale(m);
    for (std::size_t l = 0; l < m; ++l) {
        Expansion mean;
        pv[l] = asymptotic_cumulants(c, l, l, &mean).sum;
        pm[l] = mean.sum;
        if (!(pv[l] > 0.0)) throw DomainError("predicted variance is not positive; cannot normalize the counts");
        scale[l] = std::sqrt(pv[l]);
    }
    const auto batch = sample_batch(p, rs, c.replicates, c.seed);
    const auto e = empirical_cumulants(batch, pm, scale);
    std::vector<double> zm(m), zv(m), dm(m), dv(m);
    for (std::size_t l = 0; l < m; ++l) {
        dm[l] = e.mean[l] - pm[l];
        dv[l] = e.var[l] - pv[l];
        zm[l] = dm[l] / e.se_mean[l];
        zv[l] = dv[l] / e.se_var[l];
    }
    doc["values"] = {{"replicates", e.replicates},
                     {"radii", array(rs.radius)},
                     {"mean", array(e.mean)},
                     {"variance", array(e.var)},
                     {"se_mean", array(e.se_mean)},
                     {"se_variance", array(e.se_var)},
                     {"covariance", matrix(e.cov)},
                     {"predicted_mean", array(pm)},
                     {"predicted_variance", array(pv)},
                     {"z_mean", array(zm)},
                     {"z_variance", array(zv)},
                     {"ks", array(e.ks)},
                     {"ks_critical_1pct", e.ks_critical}};
    doc["residuals"] = {{"mean", array(dm)}, {"variance", array(dv)}};
    doc["seed"] = c.seed;
}

void run_peak(const RunConfig& c, Report& doc) {
    const ModelParams& p = c.params;
    p.validate();
    const auto v = variance_peak(p);
    const double cr = p.c_rho();
    doc["values"] = {{"t_star", v.t_star},
                     {"b11_star", v.b11_star},
                     {"t_golden", v.t_golden},
                     {"b11_golden", v.b11_golden},
                     {"t_star_scaled", v.t_star * cr / p.b},
                     {"b11_star_scaled", v.b11_star / cr}};
    doc["residuals"] = {{"t_golden_minus_t_star", v.t_golden - v.t_star},
                        {"b11_golden_minus_b11_star", v.b11_golden - v.b11_star}};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string scalar_text(const Report& v) {
    if (v.is_number_float()) return std::isfinite(v.get<double>()) ? format_double(v.get<double>()) : "null";
    return v.dump();
}

bool is_flat(const Report& v) {
    return std::none_of(v.begin(), v.end(), [](const Report& x) { return x.is_structured(); });
}

void emit_json(const Report& v, std::ostream& os, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    if (v.is_object()) {
        if (v.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << pad << Report(it.key()).dump() << ": ";
            emit_json(it.value(), os, indent + 2);
        }
        os << "\n" << std::string(static_cast<std::size_t>(indent), ' ') << "}";
    } else if (v.is_array()) {
        if (is_flat(v)) {
            os << "[";
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar_text(v[i]);
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            os << (i ? ",\n" : "") << pad;
            emit_json(v[i], os, indent + 2);
        }
        os << "\n" << std::string(static_cast<std::size_t>(indent), ' ') << "]";
    } else {
        os << scalar_text(v);
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

void emit_csv(const Report& v, const std::string& path, std::ostream& os) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            emit_csv(it.value(), path.empty() ? it.key() : path + "." + it.key(), os);
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) emit_csv(v[i], path + "." + std::to_string(i), os);
    } else {
        std::string text;
        if (v.is_string())
            text = v.get<std::string>();
        else if (!v.is_null())
            text = scalar_text(v);
        os << csv_field(path) << "," << csv_field(text) << "\r\n";
    }
}

}  // namespace

RadiiSpec radii_spec(const RunConfig& c) {
    const auto with_u = [&](std::size_t m) { return c.u.empty() ? std::vector<double>(m, 0.0) : c.u; };
    if (c.regime == "hard") {
        if (c.t.empty()) throw DomainError("--t is required for the hard regime");
        return RadiiSpec::hard(c.t, with_u(c.t.size()));
    }
    if (c.regime == "semihard") {
        if (c.s.empty()) throw DomainError("--s is required for the semihard regime");
        return RadiiSpec::semihard(c.s, with_u(c.s.size()));
    }
    if (c.regime == "bulk") {
        if (c.s.empty() || !c.r) throw DomainError("--r and --s are required for the bulk regime");
        return RadiiSpec::bulk(*c.r, c.s, with_u(c.s.size()));
    }
    if (c.regime == "none") {
        if (c.radii.empty()) throw DomainError("--radii is required without a regime");
        return RadiiSpec::physical(c.radii, with_u(c.radii.size()));
    }
    throw DomainError("unknown regime " + c.regime);
}

Report run(const RunConfig& c) {
    if (c.tol && !(*c.tol > 0.0)) throw DomainError("--tol must be positive");
    const ModelParams& p = c.params;
    Report doc;
    doc["command"] = command_name(c.command);
    doc["params"] = {{"b", p.b}, {"alpha", p.alpha}, {"rho", p.rho}, {"n", p.n}};
    doc["spec"] = {{"regime", c.regime}, {"t", array(c.t)},         {"s", array(c.s)},
                   {"r", c.r ? Report(*c.r) : Report(nullptr)},     {"radii", array(c.radii)},
                   {"u", array(c.u)}};
    doc["values"] = Report::object();
    doc["residuals"] = Report::object();
    doc["err_est"] = nullptr;
    doc["runtime_ms"] = 0.0;
    doc["seed"] = nullptr;

    p.validate();
    if (c.command == Command::constants) {
        run_constants(c, doc);
        return doc;
    }
    if (c.command == Command::peak) {
        run_peak(c, doc);
        return doc;
    }
    const RadiiSpec spec = radii_spec(c);
    spec.validate(p);
    switch (c.command) {
        case Command::coeffs: run_coeffs(c, spec, doc); break;
        case Command::exact: run_exact(c, spec, doc); break;
        case Command::cumulants: run_cumulants(c, spec, doc); break;
        case Command::compare: run_compare(c, spec, doc); break;
        case Command::sample: run_sample(c, spec, doc); break;
        default: break;
    }
    return doc;
}

std::string to_json(const Report& report) {
    std::ostringstream os;
    emit_json(report, os, 0);
    os << "\n";
    return os.str();
}

std::string to_csv(const Report& report) {
    std::ostringstream os;
    os << "path,value\r\n";
    emit_csv(report, "", os);
    return os.str();
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    std::string command, output = "json";
    CLI::App app{"Disk-counting statistics of the Mittag-Leffler ensemble with a hard wall", "hwcount"};
    std::map<std::string, Command> commands(kCommands.begin(), kCommands.end());
    app.add_option("command", command, "constants | coeffs | exact | cumulants | compare | sample | peak")
        ->required()
        ->check(CLI::IsMember(commands));
    app.add_option("--b", c.params.b, "exponent b > 0")->capture_default_str();
    app.add_option("--alpha", c.params.alpha, "alpha > -1")->capture_default_str();
    app.add_option("--rho", c.params.rho, "wall radius, 0 < rho < b^(-1/(2b))")->capture_default_str();
    app.add_option("--n", c.params.n, "number of particles")->capture_default_str();
    app.add_option("--regime", c.regime, "none | hard | semihard | bulk")
        ->check(CLI::IsMember({"none", "hard", "semihard", "bulk"}))
        ->capture_default_str();
    app.add_option("--t", c.t, "hard-edge t_1 > ... > t_m >= 0")->delimiter(',');
    app.add_option("--s", c.s, "semi-hard (decreasing) or bulk (increasing) shifts")->delimiter(',');
    app.add_option("--r", c.r, "bulk base radius in (0, rho)");
    app.add_option("--radii", c.radii, "physical radii, increasing in (0, rho]")->delimiter(',');
    app.add_option("--u", c.u, "test charges, one per radius (default 0)")->delimiter(',');
    app.add_option("--tol", c.tol, "quadrature tolerance");
    app.add_option("--n-grid", c.n_grid, "particle numbers for compare")->delimiter(',');
    app.add_option("--replicates", c.replicates, "Monte Carlo replicates")->capture_default_str();
    app.add_option("--seed", c.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--output", output, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--out", c.out_path, "write the report to this file instead of stdout");
    app.add_option("--threads", c.threads, "worker cap (default: HW_COUNTS_THREADS, then all cores)")
        ->check(CLI::NonNegativeNumber);

    std::vector<char*> argv;
    std::string prog = "hwcount";
    std::vector<std::string> storage = args;
    argv.push_back(prog.data());
    for (auto& a : storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    c.command = commands.at(command);
    c.output = output == "csv" ? Output::csv : Output::json;

    set_thread_cap(c.threads.value_or(0));
    int code = 0;
    try {
        const auto start = std::chrono::steady_clock::now();
        Report doc = run(c);
        doc["runtime_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        const std::string text = c.output == Output::csv ? to_csv(doc) : to_json(doc);
        if (c.out_path) {
            std::ofstream f(*c.out_path, std::ios::binary);
            if (!f) throw DomainError("cannot open " + *c.out_path + " for writing");
            f << text;
        } else {
            out << text;
        }
    } catch (const Error& e) {
        err << "hwcount: " << e.what() << "\n";
        code = e.validation() ? 2 : 3;
    } catch (const std::exception& e) {
        err << "hwcount: " << e.what() << "\n";
        code = 3;
    }
    set_thread_cap(0);
    return code;
}

}  // namespace hwcount::cli
