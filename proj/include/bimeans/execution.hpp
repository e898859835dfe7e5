#pragma once

namespace bimeans {

/// Kernels come in two flavours: a plain loop kept as the reference, and an
/// OpenMP version. Both produce bit-identical results.
enum class Execution { Serial, Parallel };

}  // namespace bimeans
