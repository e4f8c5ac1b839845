#include "adaptrom/errors.hpp"

#include <sstream>

namespace adaptrom {

namespace {

std::string nonconvergence_message(int iterations, double residual_norm, const std::string& context) {
    std::ostringstream os;
    os << "no convergence after " << iterations << " iterations (residual norm " << residual_norm << ")";
    if (!context.empty()) os << ": " << context;
    return os.str();
}

}  // namespace

NonConvergence::NonConvergence(int iterations, double residual_norm, const std::string& context)
    : Error("NonConvergence", nonconvergence_message(iterations, residual_norm, context)),
      iterations_(iterations),
      residual_norm_(residual_norm) {}

SingularJacobian::SingularJacobian(int iteration, std::string kind)
    : Error(std::move(kind), "singular Jacobian at iteration " + std::to_string(iteration)),
      iteration_(iteration) {}

AdaptationBudgetExhausted::AdaptationBudgetExhausted(int adaptations, double final_eps)
    : Error("AdaptationBudgetExhausted",
            "adaptation budget of " + std::to_string(adaptations) +
                " rounds exhausted, final eps " + std::to_string(final_eps)),
      final_eps_(final_eps) {}

}  // namespace adaptrom
