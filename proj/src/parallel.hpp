#pragma once

// Element-wise map kernels. The serial loop is the reference; the OpenMP
// loop writes each slot independently so results are bit-identical.

#include <cstddef>
#include <span>

#include "bimeans/execution.hpp"

namespace bimeans::detail {

template <typename In, typename Out, typename Fn>
void map_serial(std::span<const In> in, std::span<Out> out, Fn&& fn) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
}

template <typename In, typename Out, typename Fn>
void map_parallel(std::span<const In> in, std::span<Out> out, Fn&& fn) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = fn(in[i]);
}

template <typename In, typename Out, typename Fn>
void map(Execution exec, std::span<const In> in, std::span<Out> out, Fn&& fn) {
  if (exec == Execution::Serial) {
    map_serial(in, out, fn);
  } else {
    map_parallel(in, out, fn);
  }
}

}  // namespace bimeans::detail
