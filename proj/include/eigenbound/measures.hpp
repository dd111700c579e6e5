#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eigenbound/coeffexpr.hpp"
#include "eigenbound/numerics.hpp"

namespace eigenbound {

// ND: Neumann at 0, Dirichlet at the right end. DN: the reverse. NN: Neumann at both.
enum class BoundaryCase { ND, DN, NN };

std::string to_string(BoundaryCase c);
std::optional<BoundaryCase> boundary_from_string(std::string_view s);

struct Tolerances {
    double quadrature = 1e-10;
    double bound = 1e-8;
    double oracle = 1e-6;
};

constexpr double infinity = std::numeric_limits<double>::infinity();
// Cumulative masses above this are treated as divergent.
constexpr double mass_cap = 1e300;

std::vector<double> default_truncation_schedule();

struct ProblemSpec {
    Expr a;
    Expr b;
    double right_end = 1.0;
    BoundaryCase boundary = BoundaryCase::ND;
    // Number of uniform bulk panels; endpoint layers and adaptive splits add more.
    int grid_size = 2000;
    std::vector<double> truncation_schedule = default_truncation_schedule();
    Tolerances tol;

    bool infinite() const { return right_end == infinity; }
    // Throws ConfigError listing every violated constraint.
    void validate() const;
};

ProblemSpec make_problem(Coefficients c, double right_end, BoundaryCase boundary);
ProblemSpec truncate(const ProblemSpec& problem, double p);

using Samples = num::PanelRule::Samples;

// Head and tail masses of both measures at one point.
struct MeasureCoordinates {
    double mu_head = 0.0;
    double mu_tail = 0.0;
    double nu_head = 0.0;
    double nu_tail = 0.0;
};

struct Panel {
    double x = 0.0;
    double h = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    Samples t{};
    Samples m{};  // density of mu at the rule nodes
    Samples n{};  // density of nu
    Samples mu_left{}, mu_right{};
    Samples nu_left{}, nu_right{};
    // Moments of the cubic Hermite basis on the panel against mu:
    // plain, weighted by nu(t, right end of panel), weighted by nu(left end, t).
    std::array<double, 4> hm{}, hm_nu_right{}, hm_nu_left{};
};

struct BuildStats {
    std::size_t splits = 0;
    std::size_t unresolved = 0;
};

class MeasureTable {
public:
    static MeasureTable build(const ProblemSpec& problem, double right_end);

    // The table of the dual operator: mu and nu exchange roles.
    MeasureTable dual() const;
    bool is_dual() const { return dual_; }

    std::size_t nodes() const { return grid_.size(); }
    std::size_t panels() const { return panels_.size(); }
    double right_end() const { return grid_.back(); }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& cumulant() const { return cumulant_; }
    const std::vector<double>& mu_cum() const { return mu_cum_; }
    const std::vector<double>& nu_cum() const { return nu_cum_; }
    const std::vector<double>& mu_tail() const { return mu_tail_; }
    const std::vector<double>& nu_tail() const { return nu_tail_; }
    // Densities at the nodes; may be infinite at an endpoint where a vanishes.
    const std::vector<double>& mu_density() const { return m_node_; }
    const std::vector<double>& nu_density() const { return n_node_; }
    const std::vector<Panel>& panel_data() const { return panels_; }
    const BuildStats& stats() const { return stats_; }

    bool mu_overflow() const { return mu_overflow_; }
    bool nu_overflow() const { return nu_overflow_; }
    double mu_total() const { return mu_cum_.back(); }
    double nu_total() const { return nu_cum_.back(); }

    double mu_cum_at(double x) const;
    double nu_cum_at(double x) const;
    double mu_tail_at(double x) const;
    double nu_tail_at(double x) const;
    double mu_between(double alpha, double beta) const;
    double nu_between(double alpha, double beta) const;
    MeasureCoordinates coords_at(double x) const;
    MeasureCoordinates coords_at(std::size_t panel, std::size_t q) const;
    MeasureCoordinates coords_node(std::size_t i) const;

    // Panel i with x_i <= x < x_{i+1}; the last panel for x = p.
    std::size_t locate(double x) const;
    std::size_t nearest_node(double x) const;

    std::string to_csv() const;

private:
    double between(bool mu, double alpha, double beta) const;
    void finish();

    std::vector<double> grid_, cumulant_, mu_cum_, nu_cum_, mu_tail_, nu_tail_, m_node_, n_node_;
    std::vector<Panel> panels_;
    BuildStats stats_;
    bool mu_overflow_ = false;
    bool nu_overflow_ = false;
    bool dual_ = false;
};

// build_tables: MeasureTable::build plus the finiteness rule for DN/NN.
MeasureTable build_tables(const ProblemSpec& problem, double right_end);

void hermite_moments(Panel& p);

// Running integral of w dmu (or w dnu), where w is given as a function of the
// measure coordinates at each point.
class Cumulative {
public:
    using Weight = std::function<double(const MeasureCoordinates&)>;
    enum class Against { mu, nu };

    Cumulative(const MeasureTable& table, Against against, const Weight& w);

    double head(double x) const;
    double tail(double x) const;
    double head_node(std::size_t i) const { return prefix_[i]; }
    double tail_node(std::size_t i) const { return suffix_[i]; }
    double total() const { return prefix_.back(); }

private:
    const MeasureTable* table_;
    std::vector<Samples> integrand_;
    std::vector<double> prefix_, suffix_;
};

struct EndpointProbe {
    bool ratio_integrable = true;   // b/a
    bool weight_integrable = true;  // e^C/a
    std::string message;
};

struct HypothesisReport {
    PositivityCheck positivity;
    EndpointProbe left;
    EndpointProbe right;
    bool infinite = false;
    std::vector<double> trace_points;
    std::vector<double> mu_trace;
    std::vector<double> nu_trace;
    bool mu_diverges = false;
    bool nu_diverges = false;
    // The criterion forces the principal eigenvalue to vanish.
    bool lambda_zero = false;
    std::vector<std::string> notes;

    bool pass() const {
        return positivity.pass && left.ratio_integrable && left.weight_integrable &&
               right.ratio_integrable && right.weight_integrable;
    }
};

HypothesisReport hypothesis_check(const ProblemSpec& problem);

// Dyadic-piece probes of local integrability at the endpoints of (0, p).
EndpointProbe probe_left(const Expr& a, const Expr& b, double p);
EndpointProbe probe_right(const Expr& a, const Expr& b, double p);

}  // namespace eigenbound
