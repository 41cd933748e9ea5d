#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coolmap {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NotHermitian,
    NotUnitTrace,
    NotPSD,
    NotUnitary,
    IncompleteKraus,
    BadPartition,
    DegenerateLevels,
    DegenerateGaps,
    InvalidProbability,
    InvalidUTCS,
    NotUTMajorized,
    NonFiniteBeta,
    ZeroCoherenceMismatch,
    CertificateInconsistent,
    NotOptimallyCoherent,
    CompletenessDefect,
    WeightsNotNormalized,
    IrrationalWeight,
    SupportViolation,
    InvalidGPKraus,
    NotNecessaryConditions,
    DegenerateEdgeCase,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the library is reported through this type. `magnitude`
// carries the measured violation (eigenvalue, defect, margin) when one exists
// and `indices` the 1-based level indices involved.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, double magnitude = 0.0,
          std::vector<int> indices = {});

    ErrorKind kind() const noexcept { return kind_; }
    double magnitude() const noexcept { return magnitude_; }
    const std::vector<int>& indices() const noexcept { return indices_; }

private:
    ErrorKind kind_;
    double magnitude_;
    std::vector<int> indices_;
};

} // namespace coolmap
