#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace adaptrom {

// Every failure raised by the library carries a stable kind string so the CLI
// can report it in machine-readable form.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ADAPTROM_SIMPLE_ERROR(Name)                                   \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

ADAPTROM_SIMPLE_ERROR(DimensionMismatch);
ADAPTROM_SIMPLE_ERROR(InvalidArgument);
ADAPTROM_SIMPLE_ERROR(NonFinite);
ADAPTROM_SIMPLE_ERROR(OverflowGuard);
ADAPTROM_SIMPLE_ERROR(LogDomain);
ADAPTROM_SIMPLE_ERROR(NegativeConductivity);
ADAPTROM_SIMPLE_ERROR(AllZeroSnapshots);
ADAPTROM_SIMPLE_ERROR(TruncationTooLarge);
ADAPTROM_SIMPLE_ERROR(ZeroRomSolution);
ADAPTROM_SIMPLE_ERROR(ZeroLocalResidual);
ADAPTROM_SIMPLE_ERROR(RankDeficientLocalJacobian);
ADAPTROM_SIMPLE_ERROR(PoolExhausted);
ADAPTROM_SIMPLE_ERROR(BadMagic);
ADAPTROM_SIMPLE_ERROR(TruncatedFile);
ADAPTROM_SIMPLE_ERROR(VersionMismatch);
ADAPTROM_SIMPLE_ERROR(ShapeMismatch);
ADAPTROM_SIMPLE_ERROR(ConfigError);
ADAPTROM_SIMPLE_ERROR(IoError);

#undef ADAPTROM_SIMPLE_ERROR

class NonConvergence : public Error {
public:
    NonConvergence(int iterations, double residual_norm, const std::string& context = {});

    int iterations() const noexcept { return iterations_; }
    double residual_norm() const noexcept { return residual_norm_; }

private:
    int iterations_;
    double residual_norm_;
};

class SingularJacobian : public Error {
public:
    explicit SingularJacobian(int iteration, std::string kind = "SingularJacobian");

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

class SingularReducedJacobian : public SingularJacobian {
public:
    explicit SingularReducedJacobian(int iteration)
        : SingularJacobian(iteration, "SingularReducedJacobian") {}
};

class AdaptationBudgetExhausted : public Error {
public:
    AdaptationBudgetExhausted(int adaptations, double final_eps);

    double final_eps() const noexcept { return final_eps_; }

private:
    double final_eps_;
};

}  // namespace adaptrom
