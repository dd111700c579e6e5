#pragma once

#include <memory>

#include "eigenbound/coeffexpr.hpp"
#include "eigenbound/measures.hpp"

namespace suite {

using namespace eigenbound;

inline ProblemSpec laplacian(BoundaryCase c, double D = 1.0) { return make_problem(*preset("laplacian"), D, c); }
inline ProblemSpec ou(BoundaryCase c, double D) { return make_problem(*preset("ou"), D, c); }
inline ProblemSpec varying(BoundaryCase c) { return make_problem({parse("1+x^2"), parse("0")}, 1.0, c); }

inline std::shared_ptr<const MeasureTable> table(const ProblemSpec& p) {
    return std::make_shared<const MeasureTable>(build_tables(p, p.right_end));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace suite
