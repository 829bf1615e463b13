#pragma once

namespace multone {

/// Selects the OpenMP kernel or its serial reference.
enum class Execution { serial, parallel };

}  // namespace multone
