#include "metric_energy/error.hpp"

namespace metric_energy {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::NonpositiveOffDiagonal: return "NonpositiveOffDiagonal";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::NotMassZero: return "NotMassZero";
    case ErrorCode::NotMassOne: return "NotMassOne";
    case ErrorCode::PositiveEnergy: return "PositiveEnergy";
    case ErrorCode::ZeroDistance: return "ZeroDistance";
    case ErrorCode::NotQuasihypermetric: return "NotQuasihypermetric";
    case ErrorCode::InconsistentClassification: return "InconsistentClassification";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::WrongStatus: return "WrongStatus";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
    case ErrorCode::UnknownExperiment: return "UnknownExperiment";
  }
  return "Unknown";
}

}  // namespace metric_energy
