#include "eigenbound/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>

#include "eigenbound/bounds.hpp"
#include "eigenbound/errors.hpp"
#include "eigenbound/iterate.hpp"
#include "eigenbound/oracle.hpp"
#include "eigenbound/variational.hpp"

namespace eigenbound {

using nlohmann::json;

namespace {

// 12 significant digits; infinities as strings, NaN as null.
json jnum(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return std::strtod(format_number(v).c_str(), nullptr);
}

json jnums(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(jnum(x));
    return a;
}

std::vector<double> inverses(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(1.0 / x);
    return out;
}

// Node indices for plot series, about 200 points.
std::vector<std::size_t> sample_nodes(const MeasureTable& t) {
    std::vector<std::size_t> idx;
    std::size_t step = std::max<std::size_t>(1, t.nodes() / 200);
    for (std::size_t i = 0; i < t.nodes(); i += step) idx.push_back(i);
    if (idx.back() != t.nodes() - 1) idx.push_back(t.nodes() - 1);
    return idx;
}

json header(const char* command, const RunConfig& c) {
    json r;
    r["command"] = command;
    r["version"] = version;
    r["config"] = echo_config(c);
    r["problem"] = {{"a", c.preset.empty() ? c.a : to_problem(c).a.to_string()},
                    {"b", c.preset.empty() ? c.b : to_problem(c).b.to_string()},
                    {"preset", c.preset},
                    {"D", jnum(c.D)},
                    {"case", to_string(c.boundary)}};
    return r;
}

IterateOptions iterate_options(const RunConfig& c) {
    IterateOptions o;
    o.eps_b = c.eps_b;
    o.renormalize = c.renormalize;
    o.coarse = c.grid;
    return o;
}

// The table every command works on. For D = inf it is the truncation where the
// relevant tail mass became negligible, unless the criterion already forces lambda = 0.
struct Setup {
    ProblemSpec problem;
    std::shared_ptr<const MeasureTable> table;
    bool lambda_zero = false;
    double p = 0.0;
    std::vector<std::string> notes;
};

Setup prepare(const RunConfig& c) {
    Setup s;
    s.problem = to_problem(c);
    if (s.problem.infinite()) {
        HypothesisReport h = hypothesis_check(s.problem);
        if (!h.pass()) {
            std::string msg = h.positivity.pass ? "" : h.positivity.message;
            for (const auto* probe : {&h.left, &h.right})
                if (!probe->message.empty()) msg += (msg.empty() ? "" : "; ") + probe->message;
            throw HypothesisError(msg.empty() ? "hypothesis check failed" : msg);
        }
        s.notes = h.notes;
        if (h.lambda_zero) {
            s.lambda_zero = true;
            s.p = infinity;
            return s;
        }
        s.p = effective_truncation(s.problem);
        s.notes.push_back("D = inf: working on the truncation p = " + format_number(s.p));
    } else {
        s.p = s.problem.right_end;
    }
    s.table = std::make_shared<const MeasureTable>(build_tables(s.problem, s.p));
    if (s.table->stats().unresolved > 0)
        s.notes.push_back(std::to_string(s.table->stats().unresolved) +
                          " panels did not meet the quadrature tolerance");
    return s;
}

json provenance_bounds(BoundaryCase c) {
    const bool nd = c == BoundaryCase::ND;
    json p;
    p["delta"] = nd ? "sup_x mu(0,x) nu(x,p); lambda > 0 iff finite" : "sup_x nu(0,x) mu(x,p); lambda > 0 iff finite";
    p["lower_basic"] = "1/(4 delta) <= lambda";
    p["upper_basic"] = "lambda <= 1/delta";
    p["delta1"] = "sup_x II(sqrt(phi))(x)";
    p["delta1_prime"] = nd ? "sup_x [mu(0,x) phi(x) + (1/phi(x)) int_x^p phi^2 dmu]"
                           : "sup_x [(1/phi(x)) int_0^x phi^2 dmu + phi(x) mu(x,p)]";
    p["lower_improved"] = "1/delta1 <= lambda";
    p["upper_improved"] = "lambda <= 1/delta1_prime, with delta <= delta1_prime <= 2 delta";
    p["phi"] = nd ? "nu(x,p)" : "nu(0,x)";
    return p;
}

json bounds_results(const BoundsReport& r) {
    return {{"delta", jnum(r.delta)},
            {"lower_basic", jnum(r.lower_basic)},
            {"upper_basic", jnum(r.upper_basic)},
            {"delta1", jnum(r.delta1)},
            {"delta1_prime", jnum(r.delta1_prime)},
            {"lower_improved", jnum(r.lower_improved)},
            {"upper_improved", jnum(r.upper_improved)},
            {"argmax_x", jnum(r.x_delta)},
            {"argmax_x_delta1", jnum(r.x_delta1)},
            {"argmax_x_delta1_prime", jnum(r.x_delta1_prime)},
            {"containment", r.containment},
            {"positivity", r.positivity},
            {"right_end_used", jnum(r.right_end)}};
}

struct Verdicts {
    json list = json::array();
    bool all = true;
    void add(const std::string& name, bool pass, double value, double reference, const std::string& note = "") {
        json v = {{"name", name}, {"pass", pass}, {"value", jnum(value)}, {"reference", jnum(reference)}};
        if (!note.empty()) v["note"] = note;
        list.push_back(v);
        all = all && pass;
    }
};

// Relative slack for comparing a bound with the oracle eigenvalue.
constexpr double verify_slack = 1e-6;

bool below(double bound, double lambda) { return bound <= lambda * (1.0 + verify_slack); }
bool above(double bound, double lambda) { return bound >= lambda * (1.0 - verify_slack); }

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const LexError*>(&e) ||
        dynamic_cast<const SyntaxError*>(&e) || dynamic_cast<const RangeError*>(&e))
        return exit_config;
    if (dynamic_cast<const HypothesisError*>(&e)) return exit_hypothesis;
    return exit_degeneration;
}

json error_object(const std::exception& e) {
    const auto* err = dynamic_cast<const Error*>(&e);
    return {{"error", {{"kind", err ? err->kind() : "internal"}, {"message", e.what()}, {"exit_code", exit_code_for(e)}}}};
}

CommandResult cmd_bounds(const RunConfig& c) {
    CommandResult out;
    json& r = out.report = header("bounds", c);
    Setup s = prepare(c);
    BoundsReport b = s.lambda_zero ? degenerate_bounds(c.boundary) : compute_bounds(c.boundary, *s.table, c.eps_b);
    if (s.lambda_zero) b.right_end = infinity;
    r["results"] = bounds_results(b);
    r["provenance"] = provenance_bounds(c.boundary);
    if (s.table && c.boundary == BoundaryCase::NN) {
        IterationTrace eta = eta_sequence(*s.table, 1, iterate_options(c));
        r["results"]["eta_n"] = jnums(eta.values);
        r["results"]["lower_eta"] = jnum(1.0 / eta.values[0]);
        r["provenance"]["eta_n"] = "sup_x I(fbar_1)(x), fbar_1 = sqrt(phi) - pi(sqrt(phi)); 1/eta_1 <= lambda_1";
    }
    json series;
    if (s.table) {
        const MeasureTable& t = *s.table;
        std::vector<double> x, obj, ii;
        std::optional<OperatorValue> II;
        if (c.boundary != BoundaryCase::NN) II = eval_II(c.boundary, power(phi(c.boundary, t), 0.5), false).op;
        for (std::size_t i : sample_nodes(t)) {
            auto m = t.coords_node(i);
            x.push_back(t.grid()[i]);
            obj.push_back(c.boundary == BoundaryCase::ND ? m.mu_head * m.nu_tail : m.nu_head * m.mu_tail);
            if (II) ii.push_back(II->values[i]);
        }
        series["x"] = jnums(x);
        series["delta_objective"] = jnums(obj);
        if (II) series["II_sqrt_phi"] = jnums(ii);
    }
    r["series"] = series;
    r["notes"] = s.notes;
    return out;
}

CommandResult cmd_iterate(const RunConfig& c) {
    CommandResult out;
    json& r = out.report = header("iterate", c);
    Setup s = prepare(c);
    json res;
    res["positivity"] = s.lambda_zero ? "eigenvalue = 0 (delta infinite)" : "positive (delta finite)";
    res["right_end_used"] = jnum(s.p);
    IterateOptions opt = iterate_options(c);
    json series;
    if (!s.lambda_zero) {
        const MeasureTable& t = *s.table;
        if (c.boundary == BoundaryCase::NN) {
            IterationTrace eta = eta_sequence(t, c.n_max, opt);
            res["eta_n"] = jnums(eta.values);
            res["lower_eta"] = jnums(inverses(eta.values));
            res["eta_n_monotonicity"] = to_string(eta.monotonicity);
            res["eta_n_stop"] = to_string(eta.stop);
            json sc = json::array();
            for (const auto& v : eta.sign_changes) sc.push_back(jnums(v));
            series["eta_sign_changes"] = sc;
            series["eta_argmax_x"] = jnums(eta.x_extremum);
            if (!eta.note.empty()) res["eta_n_note"] = eta.note;
        } else {
            IterationTrace low = lower_sequence(c.boundary, t, c.n_max, opt);
            UpperResult up = c.boundary == BoundaryCase::ND ? upper_sequence_nd(t, c.n_max, opt)
                                                            : upper_sequence_dn(t, c.n_max, opt);
            res["delta_n"] = jnums(low.values);
            res["delta_n_prime"] = jnums(up.upper.values);
            res["dbar_n"] = jnums(up.rayleigh.values);
            res["lower_n"] = jnums(inverses(low.values));
            res["upper_n"] = jnums(inverses(up.upper.values));
            res["upper_dbar_n"] = jnums(inverses(up.rayleigh.values));
            res["delta_n_monotonicity"] = to_string(low.monotonicity);
            res["delta_n_prime_monotonicity"] = to_string(up.upper.monotonicity);
            res["dbar_n_monotonicity"] = to_string(up.rayleigh.monotonicity);
            res["delta_n_stop"] = to_string(low.stop);
            res["dbar1_matches_delta1_prime"] = up.dbar1_matches;
            res["dbar1_gap"] = jnum(up.dbar1_gap);
            for (const auto* tr : {&low, &up.upper, &up.rayleigh})
                if (!tr->note.empty()) res[to_string(tr->kind) + "_note"] = tr->note;
            series["delta_n_argmax_x"] = jnums(low.x_extremum);
            series["delta_n_prime_argmin_x"] = jnums(up.upper.x_extremum);
            series["delta_n_prime_x0"] = jnums(up.upper.x0);
            series["delta_n_prime_x1"] = jnums(up.upper.x1);
        }
    }
    r["results"] = res;
    r["series"] = series;
    r["provenance"] = {
        {"delta_n", "sup II(f_n), f_1 = sqrt(phi), f_n = f_{n-1} II(f_{n-1}); 1/delta_n <= lambda, non-increasing"},
        {"delta_n_prime", "sup over localized f_n of inf II(f_n); lambda <= 1/delta_n_prime"},
        {"dbar_n", "sup over localized f_n of mu(f_n^2)/D(f_n); lambda <= 1/dbar_n"},
        {"eta_n", "sup of int_x^p fbar_n dmu / int_x^p fbar_{n-1} dmu; 1/eta_n <= lambda_1"}};
    r["notes"] = s.notes;
    return out;
}

CommandResult cmd_oracle(const RunConfig& c) {
    CommandResult out;
    json& r = out.report = header("oracle", c);
    ProblemSpec problem = to_problem(c);
    json res, series;
    if (problem.infinite()) {
        LimitResult L = infinite_domain_limit(problem);
        res["lambda"] = jnum(L.lambda);
        res["trace"] = jnums(L.trace);
        res["trace_points"] = jnums(L.points);
        res["stop"] = L.stop;
        res["non_monotone"] = L.non_monotone;
        res["N"] = c.N;
    } else {
        auto table = std::make_shared<const MeasureTable>(build_tables(problem, problem.right_end));
        EigenSolution sol = fd_eigensolve(table, c.boundary, c.eps_o);
        EigenDiagnostics d = eigen_residuals(sol);
        res["lambda"] = jnum(sol.lambda);
        res["residual"] = jnum(sol.residual);
        res["N"] = sol.N;
        res["iterations"] = sol.iterations;
        res["I_deviation"] = jnum(d.I_deviation);
        res["II_deviation"] = jnum(d.II_deviation);
        res["monotone"] = d.monotone;
        res["sign_ok"] = d.sign_ok;
        std::vector<double> x, g;
        for (std::size_t i : sample_nodes(*table)) {
            x.push_back(table->grid()[i]);
            g.push_back(sol.eigenfunction.values[i]);
        }
        series["x"] = jnums(x);
        series["eigenfunction"] = jnums(g);
    }
    r["results"] = res;
    r["series"] = series;
    r["provenance"] = {{"lambda", "finite-volume Sturm-Liouville solve, Sturm bisection + inverse iteration"},
                       {"residual", "||T y - lambda y|| / ((||T|| + lambda) ||y||)"},
                       {"trace", "eigenvalues on the truncations (0, p_k)"}};
    return out;
}

CommandResult cmd_verify(const RunConfig& c) {
    CommandResult out;
    json& r = out.report = header("verify", c);
    Setup s = prepare(c);
    Verdicts v;
    json res;
    const BoundaryCase bc = c.boundary;

    if (s.lambda_zero) {
        LimitResult L = infinite_domain_limit(s.problem);
        res["lambda"] = jnum(L.lambda);
        res["trace"] = jnums(L.trace);
        res["trace_points"] = jnums(L.points);
        res["positivity"] = "eigenvalue = 0 (delta infinite)";
        v.add("oracle trace falls toward 0", L.trace.back() <= 1e-3 * L.trace.front(), L.trace.back(),
              L.trace.front());
    } else {
        const MeasureTable& t = *s.table;
        EigenSolution sol = fd_eigensolve(s.table, bc, c.eps_o);
        const double lambda = sol.lambda;
        res["lambda"] = jnum(lambda);
        res["residual"] = jnum(sol.residual);
        res["N"] = sol.N;
        res["right_end_used"] = jnum(s.p);
        IterateOptions opt = iterate_options(c);
        EigenDiagnostics d = eigen_residuals(sol);
        res["I_deviation"] = jnum(d.I_deviation);
        v.add("lambda I(g) = 1 on the eigenfunction", d.I_deviation <= 5e-3, d.I_deviation, 5e-3);

        if (bc == BoundaryCase::NN) {
            IterationTrace eta = eta_sequence(t, c.n_max, opt);
            res["eta_n"] = jnums(eta.values);
            res["eta_n_monotonicity"] = to_string(eta.monotonicity);
            for (std::size_t n = 0; n < eta.values.size(); ++n)
                v.add("1/eta_" + std::to_string(n + 1) + " <= lambda_1", below(1.0 / eta.values[n], lambda),
                      1.0 / eta.values[n], lambda);
            v.add("eta_n monotone", eta.monotonicity != Monotonicity::mixed, eta.values.back(), eta.values.front(),
                  to_string(eta.monotonicity));
            double l0 = fd_eigensolve(s.table, BoundaryCase::ND, c.eps_o).lambda;
            res["lambda0_same_interval"] = jnum(l0);
            v.add("lambda_1 > lambda_0 on (0, p)", lambda > l0, lambda, l0);
        } else {
            BoundsReport b = compute_bounds(bc, t, c.eps_b);
            res["bounds"] = bounds_results(b);
            v.add("1/(4 delta) <= lambda", below(b.lower_basic, lambda), b.lower_basic, lambda);
            v.add("lambda <= 1/delta", above(b.upper_basic, lambda), b.upper_basic, lambda);
            v.add("1/delta1 <= lambda", below(b.lower_improved, lambda), b.lower_improved, lambda);
            v.add("lambda <= 1/delta1'", above(b.upper_improved, lambda), b.upper_improved, lambda);
            v.add("delta <= delta1' <= 2 delta", b.containment, b.delta1_prime, b.delta);

            IterationTrace low = lower_sequence(bc, t, c.n_max, opt);
            UpperResult up = bc == BoundaryCase::ND ? upper_sequence_nd(t, c.n_max, opt)
                                                    : upper_sequence_dn(t, c.n_max, opt);
            res["delta_n"] = jnums(low.values);
            res["delta_n_prime"] = jnums(up.upper.values);
            res["dbar_n"] = jnums(up.rayleigh.values);
            for (std::size_t n = 0; n < low.values.size(); ++n)
                v.add("1/delta_" + std::to_string(n + 1) + " <= lambda", below(1.0 / low.values[n], lambda),
                      1.0 / low.values[n], lambda);
            for (std::size_t n = 0; n < up.upper.values.size(); ++n) {
                v.add("lambda <= 1/delta_" + std::to_string(n + 1) + "'", above(1.0 / up.upper.values[n], lambda),
                      1.0 / up.upper.values[n], lambda);
                v.add("lambda <= 1/dbar_" + std::to_string(n + 1), above(1.0 / up.rayleigh.values[n], lambda),
                      1.0 / up.rayleigh.values[n], lambda);
            }
            bool low_ok = low.monotonicity == Monotonicity::non_increasing || low.monotonicity == Monotonicity::constant;
            v.add("delta_n non-increasing", low_ok, low.values.back(), low.values.front());
            if (bc == BoundaryCase::DN) {
                bool up_ok = up.upper.monotonicity == Monotonicity::non_decreasing ||
                             up.upper.monotonicity == Monotonicity::constant;
                v.add("delta_n' non-decreasing", up_ok, up.upper.values.back(), up.upper.values.front());
            }
            v.add("dbar_1 = delta_1'", up.dbar1_matches, up.rayleigh.values[0], b.delta1_prime);

            res["II_deviation"] = jnum(d.II_deviation);
            v.add("lambda II(g) = 1 on the eigenfunction", d.II_deviation <= 5e-3, d.II_deviation, 5e-3);

            if (!s.problem.infinite()) {
                DualityResult du = duality_pair(s.problem);
                res["duality"] = {{"lambda_nd", jnum(du.lambda_nd)},
                                  {"lambda_dn_dual", jnum(du.lambda_dn_dual)},
                                  {"delta", jnum(du.delta)},
                                  {"delta_dual", jnum(du.delta_dual)}};
                v.add("lambda_ND(L) = lambda_DN(L*)",
                      std::abs(du.lambda_nd - du.lambda_dn_dual) <= 1e-3 * du.lambda_nd, du.lambda_dn_dual,
                      du.lambda_nd);
                v.add("delta = delta*", std::abs(du.delta - du.delta_dual) <= 10.0 * c.eps_b, du.delta_dual,
                      du.delta);
            }
        }
    }
    r["results"] = res;
    r["verdicts"] = v.list;
    r["all_pass"] = v.all;
    r["notes"] = s.notes;
    out.exit_code = v.all ? exit_ok : exit_bracketing;
    return out;
}

CommandResult run_command(std::string_view command, const RunConfig& c) {
    try {
        if (command == "bounds") return cmd_bounds(c);
        if (command == "iterate") return cmd_iterate(c);
        if (command == "oracle") return cmd_oracle(c);
        if (command == "verify") return cmd_verify(c);
        throw ConfigError("unknown command '" + std::string(command) + "'");
    } catch (const std::exception& e) {
        CommandResult out;
        out.report = error_object(e);
        out.report["command"] = std::string(command);
        out.exit_code = exit_code_for(e);
        return out;
    }
}

namespace {

void flatten(const json& j, const std::string& prefix, std::ostringstream& o) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), o);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", o);
    } else {
        std::string v = j.is_string() ? j.get<std::string>() : j.dump();
        if (v.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            v = q + "\"";
        }
        o << prefix << "," << v << "\n";
    }
}

}  // namespace

std::string to_csv(const json& report) {
    std::ostringstream o;
    o << "quantity,value\n";
    for (auto it = report.begin(); it != report.end(); ++it) {
        if (it.key() == "config") continue;
        flatten(it.value(), it.key(), o);
    }
    return o.str();
}

}  // namespace eigenbound
