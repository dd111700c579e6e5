#include "eigenbound/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <utility>

#include "eigenbound/bounds.hpp"
#include "eigenbound/errors.hpp"
#include "eigenbound/variational.hpp"

namespace eigenbound {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void require_n(int n_max) {
    if (n_max < 1) throw RangeError("n_max must be at least 1, got " + std::to_string(n_max));
}

void require_delta_finite(BoundaryCase c, const MeasureTable& t) {
    if (!std::isfinite(delta(c, t).value))
        throw CriterionDegenerate("delta is infinite, so the iteration has no finite bound to improve");
}

double sup_norm(const GridFunction& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

void normalize(GridFunction& f) {
    double m = sup_norm(f);
    if (m > 0.0 && std::isfinite(m)) f.scale(1.0 / m);
}

void require_positive(const GridFunction& f, std::size_t first, std::size_t last, int step) {
    for (std::size_t i = first; i <= last; ++i)
        if (!(f.values[i] > 0.0))
            throw DegenerationError("iterate " + std::to_string(step) + " is not positive at node " +
                                    std::to_string(i) + " (x = " + fmt(f.table->grid()[i]) + ")");
}

bool converged(const std::vector<double>& v, double eps) {
    if (v.size() < 2) return false;
    double a = v[v.size() - 2], b = v.back();
    return std::abs(b - a) < eps * std::abs(b);
}

void finish(IterationTrace& tr, double eps_b) { tr.monotonicity = classify(tr.values, 10.0 * eps_b); }

// One localized test-function family, indexed by node pairs. For DN the second index is unused.
struct FamilyValues {
    std::vector<double> upper;
    std::vector<double> rayleigh;
    std::vector<double> x_inf;
};

class LocalizedSearch {
public:
    LocalizedSearch(BoundaryCase c, const MeasureTable& t, int n_max, const IterateOptions& opt)
        : c_(c), t_(t), n_max_(n_max), opt_(opt) {}

    // Values for the family pinned at nodes (i0, i1); nullopt when the pair is not admissible.
    const std::optional<FamilyValues>& at(std::size_t i0, std::size_t i1) {
        auto key = std::make_pair(i0, i1);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(key, evaluate(i0, i1, false)).first->second;
    }

    std::optional<FamilyValues> evaluate(std::size_t i0, std::size_t i1, bool refine) const {
        const auto& x = t_.grid();
        const bool nd = c_ == BoundaryCase::ND;
        if (nd ? (i0 >= i1 || i1 < 2) : i0 < 1) return std::nullopt;
        FamilyValues out;
        try {
            GridFunction f = nd ? localized_nd(t_, x[i0], x[i1]) : localized_dn(t_, x[i0]);
            for (int n = 1; n <= n_max_; ++n) {
                double energy = dirichlet_energy(f);
                out.rayleigh.push_back(energy > 0.0 ? l2_norm_sq(f) / energy : infinity);
                IIResult r = eval_II(c_, f, refine);
                out.upper.push_back(r.op.inf);
                out.x_inf.push_back(r.op.x_argmin);
                if (n == n_max_) break;
                f = clamp(std::move(r.product), i0, i1);
                if (opt_.renormalize) normalize(f);
            }
        } catch (const DomainError&) {
            return std::nullopt;
        } catch (const DegenerationError&) {
            return std::nullopt;
        }
        return out;
    }

    // Best cached pair for step n (0-based).
    std::pair<std::size_t, std::size_t> best(int n) const {
        double bv = -infinity;
        std::pair<std::size_t, std::size_t> bk{0, 0};
        for (const auto& [k, v] : cache_)
            if (v && v->upper[n] > bv) {
                bv = v->upper[n];
                bk = k;
            }
        return bk;
    }

    double best_rayleigh(int n) const {
        double bv = -infinity;
        for (const auto& [k, v] : cache_)
            if (v) bv = std::max(bv, v->rayleigh[n]);
        return bv;
    }

    double value(std::size_t i0, std::size_t i1, int n) {
        const auto& v = at(i0, i1);
        return v ? v->upper[n] : -infinity;
    }

    bool empty() const {
        for (const auto& [k, v] : cache_)
            if (v) return false;
        return true;
    }

private:
    // ND: (f II(f))(x v x0) on [0, x1), zero beyond. DN: (f II(f))(x ^ x0).
    GridFunction clamp(GridFunction g, std::size_t i0, std::size_t i1) const {
        const std::size_t N = g.size();
        if (c_ == BoundaryCase::ND) {
            for (std::size_t i = 0; i < i0; ++i) {
                g.values[i] = g.values[i0];
                g.deriv[i] = g.deriv_left[i] = 0.0;
            }
            g.deriv_left[i0] = 0.0;
            for (std::size_t i = i1; i < N; ++i) {
                g.values[i] = 0.0;
                g.deriv[i] = 0.0;
                if (i > i1) g.deriv_left[i] = 0.0;
            }
            g.deriv[i1] = 0.0;
            g.lo = 0;
            g.hi = i1;
            g.outside = Outside::zero;
        } else {
            for (std::size_t i = i0 + 1; i < N; ++i) {
                g.values[i] = g.values[i0];
                g.deriv[i] = g.deriv_left[i] = 0.0;
            }
            g.deriv[i0] = 0.0;
            g.lo = 0;
            g.hi = i0;
            g.outside = Outside::constant;
        }
        return g;
    }

    BoundaryCase c_;
    const MeasureTable& t_;
    int n_max_;
    IterateOptions opt_;
    std::map<std::pair<std::size_t, std::size_t>, std::optional<FamilyValues>> cache_;
};

// Coarse grid, local refinement rounds around the best cell, then a node-level pattern search.
void search(LocalizedSearch& s, const MeasureTable& t, bool two_d, const std::vector<double>& x0_grid,
            const std::vector<double>& x1_grid, int n_max, const IterateOptions& opt) {
    const double p = t.right_end();
    const std::size_t last = t.nodes() - 1;
    for (double a : x0_grid)
        for (double b : two_d ? x1_grid : std::vector<double>{p}) s.at(t.nearest_node(a), t.nearest_node(b));
    if (s.empty()) throw DegenerationError("no admissible localized test function on the search grid");

    const double h0 = p / std::max(opt.coarse, 1);
    for (int n = 0; n < n_max; ++n) {
        auto [i0, i1] = s.best(n);
        double h = h0;
        for (int round = 0; round < opt.refine_rounds; ++round) {
            h /= 2.0;
            double c0 = t.grid()[i0], c1 = t.grid()[i1];
            int half = opt.refine_width / 2;
            for (int j = -half; j <= half; ++j)
                for (int k = -half; k <= (two_d ? half : -half); ++k) {
                    double a = std::clamp(c0 + j * h, 0.0, p);
                    double b = two_d ? std::clamp(c1 + k * h, 0.0, p) : p;
                    s.at(t.nearest_node(a), t.nearest_node(b));
                }
            std::tie(i0, i1) = s.best(n);
        }
        if (!opt.pattern_search) continue;
        double bv = s.value(i0, i1, n);
        for (std::ptrdiff_t step = 8; step >= 1; step /= 2) {
            bool moved = true;
            for (int guard = 0; moved && guard < 256; ++guard) {
                moved = false;
                for (std::ptrdiff_t d0 = -1; d0 <= 1; ++d0)
                    for (std::ptrdiff_t d1 = two_d ? -1 : 0; d1 <= (two_d ? 1 : 0); ++d1) {
                        if (d0 == 0 && d1 == 0) continue;
                        std::ptrdiff_t j0 = static_cast<std::ptrdiff_t>(i0) + d0 * step;
                        std::ptrdiff_t j1 = static_cast<std::ptrdiff_t>(i1) + d1 * step;
                        if (j0 < 0 || j1 < 0 || j0 > static_cast<std::ptrdiff_t>(last) ||
                            j1 > static_cast<std::ptrdiff_t>(last))
                            continue;
                        double v = s.value(j0, j1, n);
                        if (v > bv) {
                            bv = v;
                            i0 = j0;
                            i1 = j1;
                            moved = true;
                        }
                    }
            }
        }
    }
}

UpperResult run_upper(BoundaryCase c, const MeasureTable& t, int n_max, const std::vector<double>& x0_grid,
                      const std::vector<double>& x1_grid, const IterateOptions& opt) {
    require_n(n_max);
    require_delta_finite(c, t);
    LocalizedSearch s(c, t, n_max, opt);
    search(s, t, c == BoundaryCase::ND, x0_grid, x1_grid, n_max, opt);

    UpperResult r;
    r.upper.boundary = r.rayleigh.boundary = c;
    r.upper.kind = TraceKind::upper;
    r.rayleigh.kind = TraceKind::rayleigh;
    for (int n = 0; n < n_max; ++n) {
        auto [i0, i1] = s.best(n);
        // Polishing can only lower the inf, keeping 1/delta_n' on the safe side.
        auto polished = s.evaluate(i0, i1, true);
        double v = polished ? polished->upper[n] : s.value(i0, i1, n);
        r.upper.values.push_back(v);
        r.upper.x_extremum.push_back(polished ? polished->x_inf[n] : t.grid()[i0]);
        r.upper.x0.push_back(t.grid()[i0]);
        r.upper.x1.push_back(t.grid()[i1]);
        r.rayleigh.values.push_back(s.best_rayleigh(n));
    }
    finish(r.upper, opt.eps_b);
    finish(r.rayleigh, opt.eps_b);

    double node_sup = delta1_prime(c, t, false).value;
    r.dbar1_gap = std::abs(r.rayleigh.values[0] - node_sup) / node_sup;
    r.dbar1_matches = r.dbar1_gap <= 10.0 * opt.eps_b;
    if (!r.dbar1_matches)
        r.rayleigh.note = "dbar_1 differs from delta_1' by " + fmt(r.dbar1_gap) + " (relative)";

    if (c == BoundaryCase::DN) {
        // For n = 1 the inf sits at x0; compare against the scan.
        auto [i0, i1] = s.best(0);
        GridFunction f = localized_dn(t, t.grid()[i0]);
        IIResult ii = eval_II(c, f, false);
        double at_x0 = ii.op.values[i0];
        double scan = s.value(i0, i1, 0);
        if (std::abs(at_x0 - scan) > 10.0 * opt.eps_b * scan)
            r.upper.note = "n = 1 inf not at x0: scan " + fmt(scan) + ", value at x0 " + fmt(at_x0);
    }
    return r;
}

}  // namespace

std::string to_string(TraceKind k) {
    switch (k) {
    case TraceKind::lower: return "lower";
    case TraceKind::upper: return "upper";
    case TraceKind::rayleigh: return "rayleigh";
    case TraceKind::eta: return "eta";
    }
    return "?";
}

std::string to_string(Monotonicity m) {
    switch (m) {
    case Monotonicity::constant: return "constant";
    case Monotonicity::non_increasing: return "non_increasing";
    case Monotonicity::non_decreasing: return "non_decreasing";
    case Monotonicity::mixed: return "mixed";
    }
    return "?";
}

std::string to_string(StopReason s) {
    switch (s) {
    case StopReason::max_n: return "max_n";
    case StopReason::converged: return "converged";
    case StopReason::degenerate: return "degenerate";
    }
    return "?";
}

Monotonicity classify(const std::vector<double>& v, double slack) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    const double tol = slack * scale;
    bool up = false, down = false;
    for (std::size_t i = 1; i < v.size(); ++i) {
        double d = v[i] - v[i - 1];
        if (d > tol) up = true;
        if (d < -tol) down = true;
    }
    if (up && down) return Monotonicity::mixed;
    if (up) return Monotonicity::non_decreasing;
    if (down) return Monotonicity::non_increasing;
    return Monotonicity::constant;
}

IterationTrace lower_sequence(BoundaryCase c, const MeasureTable& t, int n_max, const IterateOptions& opt) {
    require_n(n_max);
    if (c == BoundaryCase::NN) throw DomainError("lower_sequence covers ND and DN; use eta_sequence for NN");
    require_delta_finite(c, t);
    IterationTrace tr;
    tr.boundary = c;
    tr.kind = TraceKind::lower;
    GridFunction f = power(phi(c, t), 0.5);
    const std::size_t N = t.nodes();
    for (int n = 1; n <= n_max; ++n) {
        try {
            require_positive(f, 1, N - 2, n);
        } catch (const DegenerationError& e) {
            tr.stop = StopReason::degenerate;
            tr.note = e.what();
            if (tr.values.empty()) throw;
            break;
        }
        IIResult r = eval_II(c, f);
        tr.values.push_back(r.op.sup);
        tr.x_extremum.push_back(r.op.x_argmax);
        if (converged(tr.values, opt.eps_b)) {
            tr.stop = StopReason::converged;
            break;
        }
        f = std::move(r.product);
        if (opt.renormalize) normalize(f);
    }
    finish(tr, opt.eps_b);
    return tr;
}

std::vector<double> default_x0_grid(double p, int count) {
    std::vector<double> g;
    for (int k = 0; k < count; ++k) g.push_back(p * k / count);
    return g;
}

std::vector<double> default_x1_grid(double p, int count) {
    std::vector<double> g;
    for (int k = 1; k <= count; ++k) g.push_back(p * k / count);
    return g;
}

UpperResult upper_sequence_nd(const MeasureTable& t, int n_max, const std::vector<double>& x0_grid,
                              const std::vector<double>& x1_grid, const IterateOptions& opt) {
    return run_upper(BoundaryCase::ND, t, n_max, x0_grid, x1_grid, opt);
}

UpperResult upper_sequence_nd(const MeasureTable& t, int n_max, const IterateOptions& opt) {
    double p = t.right_end();
    return upper_sequence_nd(t, n_max, default_x0_grid(p, opt.coarse), default_x1_grid(p, opt.coarse), opt);
}

UpperResult upper_sequence_dn(const MeasureTable& t, int n_max, const std::vector<double>& x0_grid,
                              const IterateOptions& opt) {
    if (t.mu_overflow()) throw DivergenceError("mu(0, p) is infinite");
    return run_upper(BoundaryCase::DN, t, n_max, x0_grid, {}, opt);
}

UpperResult upper_sequence_dn(const MeasureTable& t, int n_max, const IterateOptions& opt) {
    return upper_sequence_dn(t, n_max, default_x1_grid(t.right_end(), opt.coarse), opt);
}

IterationTrace eta_sequence(const MeasureTable& t, int n_max, const IterateOptions& opt) {
    require_n(n_max);
    if (t.mu_overflow()) throw DivergenceError("mu(0, p) is infinite, so centering is undefined");
    require_delta_finite(BoundaryCase::NN, t);
    return eta_sequence(power(phi(BoundaryCase::NN, t), 0.5), n_max, opt);
}

IterationTrace eta_sequence(const GridFunction& f1, int n_max, const IterateOptions& opt) {
    require_n(n_max);
    const MeasureTable& t = *f1.table;
    const auto& x = t.grid();
    const std::size_t N = t.nodes();
    IterationTrace tr;
    tr.boundary = BoundaryCase::NN;
    tr.kind = TraceKind::eta;

    auto centered = [&](const GridFunction& f, int n) {
        GridFunction g = center(f);
        double before = sup_norm(f), after = sup_norm(g);
        if (!(after > 1e-12 * before))
            throw DegenerationError("centered iterate " + std::to_string(n) + " vanishes identically");
        return g;
    };
    auto sign_changes = [&](const GridFunction& g) {
        std::vector<double> out;
        for (std::size_t i = 0; i + 1 < N; ++i) {
            double a = g.values[i], b = g.values[i + 1];
            if (a == 0.0 && i > 0) out.push_back(x[i]);
            else if (a * b < 0.0) out.push_back(x[i] + (x[i + 1] - x[i]) * a / (a - b));
        }
        return out;
    };

    GridFunction prev = centered(f1, 1);
    {
        OperatorValue I = eval_I(BoundaryCase::DN, prev);
        tr.values.push_back(I.sup);
        tr.x_extremum.push_back(I.x_argmax);
        tr.sign_changes.push_back(sign_changes(prev));
    }
    for (int n = 2; n <= n_max; ++n) {
        GridFunction next = centered(ii_product(BoundaryCase::DN, prev), n);
        auto num = inner_integrals(BoundaryCase::DN, next);
        auto den = inner_integrals(BoundaryCase::DN, prev);
        double den_scale = 0.0;
        for (std::size_t i = 1; i + 1 < N; ++i) den_scale = std::max(den_scale, std::abs(den[i]));
        double best = -infinity, at = 0.0;
        std::size_t skipped = 0;
        for (std::size_t i = 1; i + 1 < N; ++i) {
            if (!(std::abs(den[i]) > 1e-14 * den_scale)) {
                ++skipped;
                continue;
            }
            double v = num[i] / den[i];
            if (v > best) {
                best = v;
                at = x[i];
            }
        }
        if (!std::isfinite(best)) {
            tr.stop = StopReason::degenerate;
            tr.note = "suffix integral of the previous iterate vanishes on the whole interior";
            break;
        }
        if (skipped > 0)
            tr.note = "step " + std::to_string(n) + ": " + std::to_string(skipped) +
                      " nodes dropped where the suffix integral vanishes";
        tr.values.push_back(best);
        tr.x_extremum.push_back(at);
        tr.sign_changes.push_back(sign_changes(next));
        if (converged(tr.values, opt.eps_b)) {
            tr.stop = StopReason::converged;
            break;
        }
        prev = std::move(next);
        if (opt.renormalize) normalize(prev);
    }
    finish(tr, opt.eps_b);
    return tr;
}

double truncated_inf_II(const GridFunction& g, double x_cut) {
    const MeasureTable& t = *g.table;
    std::size_t k = t.nearest_node(x_cut);
    if (k < 2) throw RangeError("truncation point too close to 0");
    GridFunction f = g;
    for (std::size_t i = k; i < f.size(); ++i) f.values[i] = f.deriv[i] = f.deriv_left[i] = 0.0;
    f.hi = k;
    f.outside = Outside::zero;
    return eval_II(BoundaryCase::ND, f).op.inf;
}

}  // namespace eigenbound
