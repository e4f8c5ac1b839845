#pragma once

#include "adaptrom/linalg.hpp"

#include <functional>
#include <span>
#include <vector>

namespace adaptrom {

/// N x M collection of solved states, one column per schedule entry.
struct SnapshotMatrix {
    Matrix data;
    std::vector<double> parameters;

    Index rows() const noexcept { return data.rows(); }
    Index cols() const noexcept { return data.cols(); }
};

/// Orthonormal POD vectors ordered by nonincreasing singular value.
struct PodBasis {
    Matrix vectors;
    Vector singular_values;

    Index size() const noexcept { return vectors.cols(); }
};

/// Runs `solve` at every scheduled parameter. A NonConvergence from the solver
/// is re-raised with the offending parameter appended to its context.
SnapshotMatrix collect_snapshots(std::span<const double> schedule, const std::function<Vector(double)>& solve);

/// Equally spaced parameters lo < p_1 < ... < p_count = hi (the left end excluded).
std::vector<double> uniform_schedule(double lo, double hi, int count);

/// Dropped directions have sigma <= kRankTolerance * sigma_1.
inline constexpr double kRankTolerance = 1e-12;

PodBasis pod_compute(const SnapshotMatrix& snapshots, bool mean_subtract = false);

/// Trial basis of the first n POD vectors plus the remaining vectors kept
/// for the POD-append enrichment.
struct TruncatedBasis {
    Matrix trial;
    Matrix remainder;
};

TruncatedBasis truncate(const PodBasis& basis, Index n);

/// Flips each column so its largest-magnitude entry (first one on ties) is positive.
void fix_column_signs(Matrix& vectors);

}  // namespace adaptrom
