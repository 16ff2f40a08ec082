#pragma once

#include <optional>
#include <string_view>

#include "curveflow/vec2.hpp"

namespace curveflow {

enum class EventKind {
  ExtinctionApproach,
  CurvatureBlowup,
  EmbeddednessLoss,
  Convexification,
  NeckPinch,
  TorusCollapse,
  PoleExtinction,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

struct Event {
  EventKind kind = EventKind::ExtinctionApproach;
  double time = 0.0;
  std::optional<Vec2> location;
};

}  // namespace curveflow
