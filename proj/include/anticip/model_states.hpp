#pragma once

// Extremal (minimum / maximum anticipation) model states: constant or
// alternating spectral differences, with closed-form anticipation
// probabilities that serve as oracles for the transform pipeline.

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "anticip/spectral_core.hpp"

namespace anticip {

enum class ModelKind { kConstPeriodic, kAltPeriodic, kConstContinuous, kAltContinuous };

std::string_view to_string(ModelKind kind);
// Accepts "const-periodic", "alt-periodic", "const-continuous", "alt-continuous".
ModelKind parse_model_kind(std::string_view name);

inline bool is_periodic(ModelKind kind) {
  return kind == ModelKind::kConstPeriodic || kind == ModelKind::kAltPeriodic;
}

struct ModelSpec {
  ModelKind kind = ModelKind::kConstPeriodic;
  std::size_t size = 2;  // period p or number of cells M
  double y = 1.0;

  // Throws std::invalid_argument for size < 2 or |y| > 1, DegenerateModel for
  // alternating kinds of odd size.
  void validate() const;
};

using SpectralDifference = std::variant<PeriodicSpectralDifference, ContinuousSpectralDifference>;

SpectralDifference make_model(const ModelSpec& spec);

// Closed-form p_n of the model state.
double closed_form_pn(const ModelSpec& spec, Index n);

}  // namespace anticip
