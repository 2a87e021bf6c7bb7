#pragma once

namespace sg {

/// Selects the serial reference loop or the OpenMP kernel. Both produce
/// bitwise-identical results; the serial path is kept for testing.
enum class Execution { Serial, Parallel };

} // namespace sg
