#pragma once
// Declarative scene configs for the command-line tool: a curve, an exponent
// field, a weight, optional operator symbols, and a focus point, loaded from
// a versioned JSON document (field "schema" must equal 1).

#include <optional>
#include <string>

#include "sio/fredholm.hpp"

namespace sio {

struct SceneConfig {
  std::string name;  // free-form label echoed in reports
  SpaceSpec space;
  std::optional<PCSymbol> symbol_a;
  std::optional<PCSymbol> symbol_b;
  cplx point{};  // focus point for point-local commands
  bool has_point = false;
  double tol = 1e-3;
};

// Parse a scene from JSON text.  Unknown curve/factor/symbol kinds, missing
// fields, wrong schema versions, or singularity points off the curve throw
// std::invalid_argument with a field-path diagnostic.
SceneConfig parse_scene(const std::string& json_text);

// Read the file and parse it; file-system errors also surface as
// std::invalid_argument.
SceneConfig load_scene(const std::string& path);

}  // namespace sio
