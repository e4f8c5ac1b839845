#include "adaptrom/pod.hpp"

#include "adaptrom/errors.hpp"

#include <cmath>
#include <string>

namespace adaptrom {

SnapshotMatrix collect_snapshots(std::span<const double> schedule, const std::function<Vector(double)>& solve) {
    if (schedule.empty()) throw InvalidArgument("collect_snapshots: empty schedule");
    SnapshotMatrix out;
    out.parameters.assign(schedule.begin(), schedule.end());
    for (std::size_t j = 0; j < schedule.size(); ++j) {
        Vector x;
        try {
            x = solve(schedule[j]);
        } catch (const NonConvergence& e) {
            throw NonConvergence(e.iterations(), e.residual_norm(),
                                 "snapshot at parameter " + std::to_string(schedule[j]));
        }
        if (!x.allFinite()) throw NonFinite("snapshot at parameter " + std::to_string(schedule[j]) + " is not finite");
        if (j == 0) out.data.resize(x.size(), static_cast<Index>(schedule.size()));
        if (x.size() != out.data.rows()) throw DimensionMismatch("collect_snapshots: solution length changed");
        out.data.col(static_cast<Index>(j)) = x;
    }
    return out;
}

std::vector<double> uniform_schedule(double lo, double hi, int count) {
    if (count < 1) throw InvalidArgument("uniform_schedule: count must be positive");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) out[static_cast<std::size_t>(j)] = lo + (hi - lo) * (j + 1) / count;
    return out;
}

void fix_column_signs(Matrix& vectors) {
    for (Index c = 0; c < vectors.cols(); ++c) {
        Index arg = 0;
        double best = -1.0;
        for (Index r = 0; r < vectors.rows(); ++r) {
            if (std::abs(vectors(r, c)) > best) {
                best = std::abs(vectors(r, c));
                arg = r;
            }
        }
        if (vectors.rows() > 0 && vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
    }
}

PodBasis pod_compute(const SnapshotMatrix& snapshots, bool mean_subtract) {
    if (snapshots.cols() < 1 || snapshots.rows() < 1) throw InvalidArgument("pod_compute: empty snapshot matrix");
    if (!snapshots.data.allFinite()) throw NonFinite("pod_compute: snapshot matrix has NaN/Inf entries");
    Matrix x = snapshots.data;
    if (mean_subtract) x.colwise() -= x.rowwise().mean();
    if (x.cwiseAbs().maxCoeff() == 0.0) throw AllZeroSnapshots("pod_compute: every snapshot is zero");

    Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU);
    const Vector& sigma = svd.singularValues();
    const double cutoff = kRankTolerance * sigma(0);
    Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;

    PodBasis out;
    out.vectors = svd.matrixU().leftCols(rank);
    out.singular_values = sigma.head(rank);
    fix_column_signs(out.vectors);
    return out;
}

TruncatedBasis truncate(const PodBasis& basis, Index n) {
    if (n < 1) throw InvalidArgument("truncate: n must be at least 1");
    if (n > basis.size())
        throw TruncationTooLarge("truncate: requested " + std::to_string(n) + " of " + std::to_string(basis.size()) +
                                 " POD vectors");
    return {basis.vectors.leftCols(n), basis.vectors.rightCols(basis.size() - n)};
}

}  // namespace adaptrom
