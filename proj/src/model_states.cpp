#include "anticip/model_states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "anticip/error.hpp"
#include "summation.hpp"

namespace anticip {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kConstPeriodic: return "const-periodic";
    case ModelKind::kAltPeriodic: return "alt-periodic";
    case ModelKind::kConstContinuous: return "const-continuous";
    case ModelKind::kAltContinuous: return "alt-continuous";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (auto kind : {ModelKind::kConstPeriodic, ModelKind::kAltPeriodic,
                    ModelKind::kConstContinuous, ModelKind::kAltContinuous}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
  if (size < 2) throw std::invalid_argument("model size must be at least 2");
  if (!(std::fabs(y) <= 1.0)) throw std::invalid_argument("model amplitude y must lie in [-1, 1]");
  const bool alternating = kind == ModelKind::kAltPeriodic || kind == ModelKind::kAltContinuous;
  if (alternating && size % 2 != 0) {
    throw DegenerateModel("alternating model of odd size " + std::to_string(size) +
                          " degenerates to an orthogonal evolution with half the step size");
  }
}

SpectralDifference make_model(const ModelSpec& spec) {
  spec.validate();
  std::vector<double> values(spec.size, spec.y);
  if (spec.kind == ModelKind::kAltPeriodic || spec.kind == ModelKind::kAltContinuous) {
    for (std::size_t k = 1; k < values.size(); k += 2) values[k] = -spec.y;
  }
  if (is_periodic(spec.kind)) return PeriodicSpectralDifference(std::move(values));
  return ContinuousSpectralDifference(std::move(values));
}

double closed_form_pn(const ModelSpec& spec, Index n) {
  spec.validate();
  const double y2 = spec.y * spec.y;
  const auto size = static_cast<long long>(spec.size);
  const double sz = static_cast<double>(spec.size);
  const double omega = static_cast<double>(n) - 0.5;
  // Angle pi (n - 1/2) / size, with 2n - 1 reduced modulo 4 size.
  const double angle = std::numbers::pi *
                       static_cast<double>(detail::floor_mod(2 * n - 1, 4 * size)) / (2.0 * sz);

  switch (spec.kind) {
    case ModelKind::kConstPeriodic: {
      if (detail::floor_mod(2 * n - 1, size) == 0) return y2 / (sz * sz);
      const double s = sz * std::sin(angle);
      return y2 / (s * s);
    }
    case ModelKind::kAltPeriodic: {
      const double c = sz * std::cos(angle);
      return y2 / (c * c);
    }
    case ModelKind::kConstContinuous:
      return y2 / (std::numbers::pi * std::numbers::pi * omega * omega);
    case ModelKind::kAltContinuous: {
      const double t = spec.y * std::tan(angle) / (std::numbers::pi * omega);
      return t * t;
    }
  }
  throw std::logic_error("closed_form_pn: unhandled model kind");
}

}  // namespace anticip
