#include "eigenbound/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "eigenbound/errors.hpp"

namespace eigenbound {

namespace {

const num::PanelRule& rule() { return num::panel_rule(); }

constexpr int endpoint_layers = 10;
constexpr int max_split_depth = 48;
constexpr int probe_pieces = 40;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

bool is_zero(const Expr& e) {
    return !e.empty() && e.root()->kind == NodeKind::constant && e.root()->value == 0.0;
}

struct Sampled {
    Samples t{}, a{}, r{}, c{}, m{}, n{};
    double c_end = 0.0;
    bool converged = true;
    bool finite = true;
};

double eval_coefficient(const Expr& e, double x, const char* name) {
    try {
        return e(x);
    } catch (const DomainError& err) {
        throw HypothesisError(std::string(name) + " cannot be evaluated at x = " + fmt(x) + ": " +
                              err.what());
    }
}

bool panel_error_ok(const Samples& v, double eps, bool& finite) {
    const auto& R = rule();
    double k = R.integrate(v), g = R.integrate_gauss(v);
    double scale = 0.0;
    for (std::size_t q = 0; q < R.size; ++q) scale += R.weight[q] * std::abs(v[q]);
    if (!std::isfinite(k) || !std::isfinite(g)) {
        finite = false;
        return true;
    }
    return std::abs(k - g) <= eps * std::max(scale, 1e-300);
}

// Samples the coefficients and both densities on [l, l+h] given C at l.
Sampled sample_panel(const Expr& a, const Expr& b, bool b_zero, double l, double h, double c_left,
                     double eps) {
    const auto& R = rule();
    Sampled s;
    for (std::size_t q = 0; q < R.size; ++q) {
        double t = l + (R.node[q] + 1.0) * h / 2.0;
        double av = eval_coefficient(a, t, "a");
        if (!(av > 0.0) || !std::isfinite(av))
            throw HypothesisError("a(" + fmt(t) + ") = " + fmt(av) + " is not positive");
        s.t[q] = t;
        s.a[q] = av;
        s.r[q] = b_zero ? 0.0 : eval_coefficient(b, t, "b") / av;
    }
    for (std::size_t q = 0; q < R.size; ++q) {
        double acc = 0.0;
        for (std::size_t j = 0; j < R.size; ++j) acc += R.left[q][j] * s.r[j];
        s.c[q] = c_left + acc * h / 2.0;
        s.m[q] = std::exp(s.c[q]) / s.a[q];
        s.n[q] = std::exp(-s.c[q]);
    }
    s.c_end = c_left + R.integrate(s.r) * h / 2.0;
    bool ok = panel_error_ok(s.r, eps, s.finite);
    ok = panel_error_ok(s.m, eps, s.finite) && ok;
    ok = panel_error_ok(s.n, eps, s.finite) && ok;
    s.converged = ok;
    return s;
}

Panel make_panel(const Sampled& s, double l, double r) {
    const auto& R = rule();
    Panel p;
    p.x = l;
    p.h = r - l;
    p.t = s.t;
    p.m = s.m;
    p.n = s.n;
    double hh = p.h / 2.0;
    p.mu = R.integrate(s.m) * hh;
    p.nu = R.integrate(s.n) * hh;
    for (std::size_t q = 0; q < R.size; ++q) {
        double ml = 0, mr = 0, nl = 0, nr = 0;
        for (std::size_t j = 0; j < R.size; ++j) {
            ml += R.left[q][j] * s.m[j];
            mr += R.right[q][j] * s.m[j];
            nl += R.left[q][j] * s.n[j];
            nr += R.right[q][j] * s.n[j];
        }
        p.mu_left[q] = ml * hh;
        p.mu_right[q] = mr * hh;
        p.nu_left[q] = nl * hh;
        p.nu_right[q] = nr * hh;
    }
    hermite_moments(p);
    return p;
}

std::vector<double> initial_grid(double p, int n) {
    double hb = p / n;
    std::vector<double> g;
    g.push_back(0.0);
    for (int j = endpoint_layers; j >= 1; --j) g.push_back(hb * std::ldexp(1.0, -j));
    for (int i = 1; i < n; ++i) g.push_back(p * i / n);
    for (int j = 1; j <= endpoint_layers; ++j) g.push_back(p - hb * std::ldexp(1.0, -j));
    g.push_back(p);
    return g;
}

// Non-integrable when the dyadic pieces stop shrinking.
// Overflowed pieces are left to the table's overflow flags.
bool pieces_decay(const std::vector<double>& pieces) {
    for (double v : pieces)
        if (!std::isfinite(v)) return true;
    std::size_t n = pieces.size();
    for (std::size_t k = n - 8; k + 1 < n; ++k) {
        if (pieces[k] <= 0.0) return true;
        if (pieces[k + 1] / pieces[k] < 0.98) return true;
    }
    return false;
}

double sum(const std::vector<double>& v, std::size_t from) {
    double s = 0.0;
    for (std::size_t i = from; i < v.size(); ++i) s += v[i];
    return s;
}

}  // namespace

std::string to_string(BoundaryCase c) {
    switch (c) {
    case BoundaryCase::ND: return "ND";
    case BoundaryCase::DN: return "DN";
    case BoundaryCase::NN: return "NN";
    }
    return "?";
}

std::optional<BoundaryCase> boundary_from_string(std::string_view s) {
    if (s == "ND") return BoundaryCase::ND;
    if (s == "DN") return BoundaryCase::DN;
    if (s == "NN") return BoundaryCase::NN;
    return std::nullopt;
}

std::vector<double> default_truncation_schedule() {
    std::vector<double> s;
    for (int n = 1; n <= 12; ++n) s.push_back(std::ldexp(1.0, n));
    return s;
}

void ProblemSpec::validate() const {
    std::vector<std::string> errs;
    if (a.empty()) errs.push_back("coefficient a is missing");
    if (b.empty()) errs.push_back("coefficient b is missing");
    if (!(right_end > 0.0)) errs.push_back("D must be positive");
    if (grid_size < 16) errs.push_back("grid size N must be at least 16");
    if (truncation_schedule.empty()) errs.push_back("truncation schedule is empty");
    for (std::size_t i = 0; i < truncation_schedule.size(); ++i) {
        if (!(truncation_schedule[i] > 0.0) || !std::isfinite(truncation_schedule[i]))
            errs.push_back("truncation points must be positive and finite");
        if (i > 0 && !(truncation_schedule[i] > truncation_schedule[i - 1]))
            errs.push_back("truncation schedule must be strictly increasing");
    }
    if (!(tol.quadrature > 0.0)) errs.push_back("quadrature tolerance must be positive");
    if (!(tol.bound > 0.0)) errs.push_back("bound tolerance must be positive");
    if (!(tol.oracle > 0.0)) errs.push_back("oracle tolerance must be positive");
    if (errs.empty()) return;
    std::string msg;
    for (auto& e : errs) msg += (msg.empty() ? "" : "; ") + e;
    throw ConfigError(msg);
}

ProblemSpec make_problem(Coefficients c, double right_end, BoundaryCase boundary) {
    ProblemSpec p;
    p.a = std::move(c.a);
    p.b = std::move(c.b);
    p.right_end = right_end;
    p.boundary = boundary;
    return p;
}

ProblemSpec truncate(const ProblemSpec& problem, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw RangeError("truncation point must be positive and finite");
    if (!problem.infinite() && p >= problem.right_end)
        throw RangeError("truncation point " + fmt(p) + " is not below D = " + fmt(problem.right_end));
    ProblemSpec out = problem;
    out.right_end = p;
    return out;
}

void hermite_moments(Panel& p) {
    const auto& R = rule();
    p.hm.fill(0.0);
    p.hm_nu_right.fill(0.0);
    p.hm_nu_left.fill(0.0);
    for (std::size_t q = 0; q < R.size; ++q) {
        double t = (R.node[q] + 1.0) / 2.0;
        double t2 = t * t, t3 = t2 * t;
        std::array<double, 4> H = {2 * t3 - 3 * t2 + 1, p.h * (t3 - 2 * t2 + t), -2 * t3 + 3 * t2,
                                   p.h * (t3 - t2)};
        double w = R.weight[q] * p.h / 2.0 * p.m[q];
        for (int k = 0; k < 4; ++k) {
            p.hm[k] += w * H[k];
            p.hm_nu_right[k] += w * p.nu_right[q] * H[k];
            p.hm_nu_left[k] += w * p.nu_left[q] * H[k];
        }
    }
}

MeasureTable MeasureTable::build(const ProblemSpec& problem, double right_end) {
    if (!(right_end > 0.0) || !std::isfinite(right_end))
        throw RangeError("tables need a finite positive right end");
    const double p = right_end;
    auto pos = validate_positive(problem.a, p, 64);
    if (!pos.pass) throw HypothesisError("a must be positive on (0, D): " + pos.message);
    for (auto probe : {probe_left(problem.a, problem.b, p), probe_right(problem.a, problem.b, p)})
        if (!probe.ratio_integrable || !probe.weight_integrable)
            throw HypothesisError(probe.message);

    MeasureTable t;
    const bool b_zero = is_zero(problem.b);
    const double eps = problem.tol.quadrature;
    const std::size_t budget = 64 * static_cast<std::size_t>(problem.grid_size) + 1024;
    double c_run = 0.0;
    t.grid_.push_back(0.0);
    t.cumulant_.push_back(0.0);

    auto accept = [&](const Sampled& s, double l, double r) {
        t.panels_.push_back(make_panel(s, l, r));
        c_run = s.c_end;
        t.grid_.push_back(r);
        t.cumulant_.push_back(c_run);
    };
    std::function<void(double, double, int)> refine = [&](double l, double r, int depth) {
        Sampled s = sample_panel(problem.a, problem.b, b_zero, l, r - l, c_run, eps);
        bool can_split = depth < max_split_depth && (r - l) > p * 1e-15 &&
                         t.panels_.size() + 2 < budget;
        if (!s.converged && s.finite && can_split) {
            ++t.stats_.splits;
            double mid = l + (r - l) / 2.0;
            refine(l, mid, depth + 1);
            refine(mid, r, depth + 1);
            return;
        }
        if (!s.converged) ++t.stats_.unresolved;
        accept(s, l, r);
    };
    auto g = initial_grid(p, problem.grid_size);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) refine(g[i], g[i + 1], 0);
    t.grid_.back() = p;

    std::size_t nn = t.grid_.size();
    t.m_node_.resize(nn);
    t.n_node_.resize(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        double av = 0.0;
        try {
            av = problem.a(t.grid_[i]);
        } catch (const DomainError&) {
            av = 0.0;
        }
        t.m_node_[i] = av > 0.0 ? std::exp(t.cumulant_[i]) / av : infinity;
        t.n_node_[i] = std::exp(-t.cumulant_[i]);
    }
    t.finish();
    return t;
}

void MeasureTable::finish() {
    std::size_t nn = grid_.size();
    mu_cum_.assign(nn, 0.0);
    nu_cum_.assign(nn, 0.0);
    mu_tail_.assign(nn, 0.0);
    nu_tail_.assign(nn, 0.0);
    mu_overflow_ = nu_overflow_ = false;
    auto capped = [](double v, bool& flag) {
        if (!(v <= mass_cap)) {
            flag = true;
            return mass_cap;
        }
        return v;
    };
    for (std::size_t i = 0; i + 1 < nn; ++i) {
        mu_cum_[i + 1] = capped(mu_cum_[i] + panels_[i].mu, mu_overflow_);
        nu_cum_[i + 1] = capped(nu_cum_[i] + panels_[i].nu, nu_overflow_);
    }
    for (std::size_t i = nn - 1; i-- > 0;) {
        mu_tail_[i] = capped(mu_tail_[i + 1] + panels_[i].mu, mu_overflow_);
        nu_tail_[i] = capped(nu_tail_[i + 1] + panels_[i].nu, nu_overflow_);
    }
}

MeasureTable build_tables(const ProblemSpec& problem, double right_end) {
    MeasureTable t = MeasureTable::build(problem, right_end);
    if (t.mu_overflow() && problem.boundary != BoundaryCase::ND)
        throw DivergenceError("mu(0, " + fmt(right_end) + ") exceeds the overflow guard; the " +
                              to_string(problem.boundary) + " case needs it finite");
    return t;
}

MeasureTable MeasureTable::dual() const {
    MeasureTable d = *this;
    d.dual_ = !dual_;
    for (auto& p : d.panels_) {
        std::swap(p.m, p.n);
        std::swap(p.mu, p.nu);
        std::swap(p.mu_left, p.nu_left);
        std::swap(p.mu_right, p.nu_right);
        hermite_moments(p);
    }
    std::swap(d.mu_cum_, d.nu_cum_);
    std::swap(d.mu_tail_, d.nu_tail_);
    std::swap(d.m_node_, d.n_node_);
    std::swap(d.mu_overflow_, d.nu_overflow_);
    for (std::size_t i = 0; i < d.cumulant_.size(); ++i) d.cumulant_[i] = -std::log(d.n_node_[i]);
    return d;
}

std::size_t MeasureTable::locate(double x) const {
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    std::ptrdiff_t i = (it - grid_.begin()) - 1;
    if (i < 0) i = 0;
    if (i >= static_cast<std::ptrdiff_t>(panels_.size())) i = static_cast<std::ptrdiff_t>(panels_.size()) - 1;
    return static_cast<std::size_t>(i);
}

std::size_t MeasureTable::nearest_node(double x) const {
    std::size_t i = locate(x);
    return (x - grid_[i] <= grid_[i + 1] - x) ? i : i + 1;
}

namespace {
double local_s(const Panel& p, double x) { return std::clamp(2.0 * (x - p.x) / p.h - 1.0, -1.0, 1.0); }
}  // namespace

double MeasureTable::mu_cum_at(double x) const {
    std::size_t i = locate(x);
    const Panel& p = panels_[i];
    return mu_cum_[i] + p.h / 2.0 * rule().integrate_to(p.m, local_s(p, x));
}

double MeasureTable::nu_cum_at(double x) const {
    std::size_t i = locate(x);
    const Panel& p = panels_[i];
    return nu_cum_[i] + p.h / 2.0 * rule().integrate_to(p.n, local_s(p, x));
}

double MeasureTable::mu_tail_at(double x) const {
    std::size_t i = locate(x);
    const Panel& p = panels_[i];
    return mu_tail_[i + 1] + p.h / 2.0 * rule().integrate_from(p.m, local_s(p, x));
}

double MeasureTable::nu_tail_at(double x) const {
    std::size_t i = locate(x);
    const Panel& p = panels_[i];
    return nu_tail_[i + 1] + p.h / 2.0 * rule().integrate_from(p.n, local_s(p, x));
}

double MeasureTable::between(bool mu, double alpha, double beta) const {
    if (!(alpha >= 0.0) || !(beta <= right_end()) || !(alpha <= beta))
        throw RangeError("interval (" + fmt(alpha) + ", " + fmt(beta) + ") is not inside [0, " +
                         fmt(right_end()) + "]");
    if (alpha == beta) return 0.0;
    const auto& R = rule();
    const auto& cum = mu ? mu_cum_ : nu_cum_;
    std::size_t i = locate(alpha), j = locate(beta);
    const Panel& pi = panels_[i];
    const Panel& pj = panels_[j];
    const Samples& vi = mu ? pi.m : pi.n;
    const Samples& vj = mu ? pj.m : pj.n;
    double sa = local_s(pi, alpha), sb = local_s(pj, beta);
    if (i == j) {
        if (sa == -1.0) return pi.h / 2.0 * R.integrate_to(vi, sb);
        if (sb == 1.0) return pi.h / 2.0 * R.integrate_from(vi, sa);
        return pi.h / 2.0 * (R.integrate_to(vi, sb) - R.integrate_to(vi, sa));
    }
    return pi.h / 2.0 * R.integrate_from(vi, sa) + (cum[j] - cum[i + 1]) +
           pj.h / 2.0 * R.integrate_to(vj, sb);
}

double MeasureTable::mu_between(double alpha, double beta) const { return between(true, alpha, beta); }
double MeasureTable::nu_between(double alpha, double beta) const { return between(false, alpha, beta); }

MeasureCoordinates MeasureTable::coords_at(double x) const {
    return {mu_cum_at(x), mu_tail_at(x), nu_cum_at(x), nu_tail_at(x)};
}

MeasureCoordinates MeasureTable::coords_at(std::size_t i, std::size_t q) const {
    const Panel& p = panels_[i];
    return {mu_cum_[i] + p.mu_left[q], mu_tail_[i + 1] + p.mu_right[q], nu_cum_[i] + p.nu_left[q],
            nu_tail_[i + 1] + p.nu_right[q]};
}

MeasureCoordinates MeasureTable::coords_node(std::size_t i) const {
    return {mu_cum_[i], mu_tail_[i], nu_cum_[i], nu_tail_[i]};
}

std::string MeasureTable::to_csv() const {
    std::ostringstream out;
    out << "x,C,mu_cum,nu_cum,mu_tail,nu_tail\n";
    for (std::size_t i = 0; i < grid_.size(); ++i)
        out << fmt(grid_[i]) << ',' << fmt(cumulant_[i]) << ',' << fmt(mu_cum_[i]) << ','
            << fmt(nu_cum_[i]) << ',' << fmt(mu_tail_[i]) << ',' << fmt(nu_tail_[i]) << '\n';
    return out.str();
}

Cumulative::Cumulative(const MeasureTable& table, Against against, const Weight& w) : table_(&table) {
    const auto& R = rule();
    const auto& panels = table.panel_data();
    integrand_.resize(panels.size());
    prefix_.assign(table.nodes(), 0.0);
    suffix_.assign(table.nodes(), 0.0);
    std::vector<double> mass(panels.size());
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const Panel& p = panels[i];
        const Samples& dens = against == Against::mu ? p.m : p.n;
        for (std::size_t q = 0; q < R.size; ++q) integrand_[i][q] = w(table.coords_at(i, q)) * dens[q];
        mass[i] = R.integrate(integrand_[i]) * p.h / 2.0;
    }
    for (std::size_t i = 0; i < panels.size(); ++i) prefix_[i + 1] = prefix_[i] + mass[i];
    for (std::size_t i = panels.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + mass[i];
}

double Cumulative::head(double x) const {
    std::size_t i = table_->locate(x);
    const Panel& p = table_->panel_data()[i];
    return prefix_[i] + p.h / 2.0 * rule().integrate_to(integrand_[i], local_s(p, x));
}

double Cumulative::tail(double x) const {
    std::size_t i = table_->locate(x);
    const Panel& p = table_->panel_data()[i];
    return suffix_[i + 1] + p.h / 2.0 * rule().integrate_from(integrand_[i], local_s(p, x));
}

namespace {

// Integrals of b/a and e^C/a over dyadic pieces shrinking toward one endpoint.
// `toward_right` selects the endpoint p; c_start is C at the outer end of the first piece.
EndpointProbe run_probe(const Expr& a, const Expr& b, double p, bool toward_right, double c_start,
                        const char* where) {
    EndpointProbe out;
    const auto& R = rule();
    const double h0 = p / 8.0;
    std::vector<std::pair<double, double>> pieces;
    for (int k = 0; k < probe_pieces; ++k) {
        double outer = h0 * std::ldexp(1.0, -k), inner = h0 * std::ldexp(1.0, -k - 1);
        if (toward_right)
            pieces.emplace_back(p - outer, p - inner);
        else
            pieces.emplace_back(inner, outer);
    }
    const bool b_zero = is_zero(b);
    std::vector<double> ratio_abs(probe_pieces), ratio_signed(probe_pieces);
    try {
        for (int k = 0; k < probe_pieces; ++k) {
            auto [l, r] = pieces[k];
            Samples v{}, va{};
            for (std::size_t q = 0; q < R.size; ++q) {
                double t = l + (R.node[q] + 1.0) * (r - l) / 2.0;
                double av = a(t);
                v[q] = b_zero ? 0.0 : b(t) / av;
                va[q] = std::abs(v[q]);
            }
            ratio_signed[k] = R.integrate(v) * (r - l) / 2.0;
            ratio_abs[k] = R.integrate(va) * (r - l) / 2.0;
        }
    } catch (const DomainError& e) {
        out.ratio_integrable = out.weight_integrable = false;
        out.message = std::string("coefficients undefined near ") + where + ": " + e.what();
        return out;
    }
    if (!pieces_decay(ratio_abs)) {
        out.ratio_integrable = false;
        out.weight_integrable = false;
        out.message = std::string("b/a does not look integrable near ") + where;
        return out;
    }
    // C at the left end of each piece.
    std::vector<double> c_left(probe_pieces);
    if (toward_right) {
        double c = c_start;
        for (int k = 0; k < probe_pieces; ++k) {
            c_left[k] = c;
            c += ratio_signed[k];
        }
    } else {
        for (int k = 0; k < probe_pieces; ++k) c_left[k] = sum(ratio_signed, k + 1);
    }
    std::vector<double> weight(probe_pieces);
    try {
        for (int k = 0; k < probe_pieces; ++k) {
            auto [l, r] = pieces[k];
            Sampled s = sample_panel(a, b, b_zero, l, r - l, c_left[k], 1.0);
            weight[k] = R.integrate(s.m) * (r - l) / 2.0;
        }
    } catch (const HypothesisError& e) {
        out.weight_integrable = false;
        out.message = e.what();
        return out;
    }
    if (!pieces_decay(weight)) {
        out.weight_integrable = false;
        out.message = std::string("e^C/a does not look integrable near ") + where;
    }
    return out;
}

}  // namespace

EndpointProbe probe_left(const Expr& a, const Expr& b, double p) {
    return run_probe(a, b, p, false, 0.0, "0");
}

EndpointProbe probe_right(const Expr& a, const Expr& b, double p) {
    // C(p - p/8): the left probe's pieces cover (0, p/8], then a composite rule.
    const auto& R = rule();
    const double h0 = p / 8.0;
    double c = 0.0;
    const bool b_zero = is_zero(b);
    try {
        if (!b_zero) {
            for (int k = 0; k < probe_pieces; ++k) {
                double l = h0 * std::ldexp(1.0, -k - 1), r = h0 * std::ldexp(1.0, -k);
                Samples v{};
                for (std::size_t q = 0; q < R.size; ++q) {
                    double t = l + (R.node[q] + 1.0) * (r - l) / 2.0;
                    v[q] = b(t) / a(t);
                }
                c += R.integrate(v) * (r - l) / 2.0;
            }
            const int panels = 256;
            double span = p - 2.0 * h0;
            for (int i = 0; i < panels; ++i) {
                double l = h0 + span * i / panels, r = h0 + span * (i + 1) / panels;
                Samples v{};
                for (std::size_t q = 0; q < R.size; ++q) {
                    double t = l + (R.node[q] + 1.0) * (r - l) / 2.0;
                    v[q] = b(t) / a(t);
                }
                c += R.integrate(v) * (r - l) / 2.0;
            }
        }
    } catch (const DomainError& e) {
        EndpointProbe out;
        out.ratio_integrable = out.weight_integrable = false;
        out.message = std::string("coefficients undefined on (0, D): ") + e.what();
        return out;
    }
    if (!std::isfinite(c)) {
        // C is not finite before reaching the right end; the left probe reports the cause.
        return EndpointProbe{};
    }
    return run_probe(a, b, p, true, c, "D");
}

HypothesisReport hypothesis_check(const ProblemSpec& problem) {
    HypothesisReport rep;
    rep.infinite = problem.infinite();
    const double p_local = rep.infinite ? problem.truncation_schedule.front() : problem.right_end;
    const double p_pos = rep.infinite ? problem.truncation_schedule.back() : problem.right_end;
    rep.positivity = validate_positive(problem.a, p_pos, 256);
    if (!rep.positivity.pass) return rep;
    rep.left = probe_left(problem.a, problem.b, p_local);
    if (!rep.infinite) rep.right = probe_right(problem.a, problem.b, p_local);
    if (!rep.pass()) return rep;
    if (!rep.infinite) {
        try {
            MeasureTable t = MeasureTable::build(problem, problem.right_end);
            rep.mu_diverges = t.mu_overflow();
            rep.nu_diverges = t.nu_overflow();
        } catch (const Error& e) {
            rep.notes.push_back(e.what());
        }
    } else {
        // Masses over the truncation schedule; a measure diverges if it overflows
        // or its dyadic increments stop shrinking.
        enum class State { open, converged, diverged };
        State mu_state = State::open, nu_state = State::open;
        auto update = [&](const std::vector<double>& tr, bool overflow, State& st) {
            if (st != State::open) return;
            if (overflow) {
                st = State::diverged;
                return;
            }
            std::size_t n = tr.size();
            if (n >= 2) {
                double inc = tr[n - 1] - tr[n - 2];
                if (inc <= problem.tol.quadrature * tr[n - 1]) st = State::converged;
            }
        };
        for (double p : problem.truncation_schedule) {
            MeasureTable t = MeasureTable::build(problem, p);
            rep.trace_points.push_back(p);
            rep.mu_trace.push_back(t.mu_overflow() ? infinity : t.mu_total());
            rep.nu_trace.push_back(t.nu_overflow() ? infinity : t.nu_total());
            update(rep.mu_trace, t.mu_overflow(), mu_state);
            update(rep.nu_trace, t.nu_overflow(), nu_state);
            if (mu_state != State::open && nu_state != State::open) break;
        }
        auto settle = [](const std::vector<double>& tr, State st) {
            if (st != State::open) return st == State::diverged;
            std::size_t n = tr.size();
            if (n < 3) return false;
            double d1 = tr[n - 1] - tr[n - 2], d0 = tr[n - 2] - tr[n - 3];
            if (d0 <= 0.0) return d1 > 0.0;
            return d1 / d0 >= 0.999;
        };
        rep.mu_diverges = settle(rep.mu_trace, mu_state);
        rep.nu_diverges = settle(rep.nu_trace, nu_state);
        if (rep.mu_diverges) rep.notes.push_back("mu(0, inf) diverges");
        if (rep.nu_diverges) rep.notes.push_back("nu(0, inf) diverges");
    }
    rep.lambda_zero = problem.boundary == BoundaryCase::ND ? rep.nu_diverges : rep.mu_diverges;
    if (rep.lambda_zero)
        rep.notes.push_back(problem.boundary == BoundaryCase::ND
                                ? "nu(0, D) is infinite, so the principal eigenvalue is 0"
                                : "mu(0, D) is infinite, so the eigenvalue is 0");
    return rep;
}

}  // namespace eigenbound
