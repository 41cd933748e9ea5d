#include "coolmap/error.hpp"

namespace coolmap {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotUnitTrace: return "NotUnitTrace";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::IncompleteKraus: return "IncompleteKraus";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::DegenerateLevels: return "DegenerateLevels";
    case ErrorKind::DegenerateGaps: return "DegenerateGaps";
    case ErrorKind::InvalidProbability: return "InvalidProbability";
    case ErrorKind::InvalidUTCS: return "InvalidUTCS";
    case ErrorKind::NotUTMajorized: return "NotUTMajorized";
    case ErrorKind::NonFiniteBeta: return "NonFiniteBeta";
    case ErrorKind::ZeroCoherenceMismatch: return "ZeroCoherenceMismatch";
    case ErrorKind::CertificateInconsistent: return "CertificateInconsistent";
    case ErrorKind::NotOptimallyCoherent: return "NotOptimallyCoherent";
    case ErrorKind::CompletenessDefect: return "CompletenessDefect";
    case ErrorKind::WeightsNotNormalized: return "WeightsNotNormalized";
    case ErrorKind::IrrationalWeight: return "IrrationalWeight";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::InvalidGPKraus: return "InvalidGPKraus";
    case ErrorKind::NotNecessaryConditions: return "NotNecessaryConditions";
    case ErrorKind::DegenerateEdgeCase: return "DegenerateEdgeCase";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string message, double magnitude, std::vector<int> indices)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      magnitude_(magnitude),
      indices_(std::move(indices))
{
}

} // namespace coolmap
