#include "curveflow/error.hpp"
#include "curveflow/event.hpp"

namespace curveflow {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Extinct: return "extinct";
    case ErrorKind::FitFailure: return "fit-failure";
    case ErrorKind::TimestepTooLarge: return "timestep-too-large";
    case ErrorKind::GeometryDegenerate: return "geometry-degenerate";
    case ErrorKind::NumericalBreakdown: return "numerical-breakdown";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ExtinctionApproach: return "extinction-approach";
    case EventKind::CurvatureBlowup: return "curvature-blowup";
    case EventKind::EmbeddednessLoss: return "embeddedness-loss";
    case EventKind::Convexification: return "convexification";
    case EventKind::NeckPinch: return "neck-pinch";
    case EventKind::TorusCollapse: return "torus-collapse";
    case EventKind::PoleExtinction: return "pole-extinction";
  }
  return "unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (EventKind k : {EventKind::ExtinctionApproach, EventKind::CurvatureBlowup,
                      EventKind::EmbeddednessLoss, EventKind::Convexification,
                      EventKind::NeckPinch, EventKind::TorusCollapse, EventKind::PoleExtinction}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

}  // namespace curveflow
