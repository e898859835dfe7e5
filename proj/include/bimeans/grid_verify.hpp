#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bimeans/execution.hpp"
#include "bimeans/means.hpp"

namespace bimeans {

/// Per-pair outcome of every inequality checked on a random grid. Margins are
/// dimensionless: chain and simple margins over A(a,b), L_p and containment
/// margins over M(a,b).
struct PairCheck {
  double chain_min_gap = 0.0;
  double lp_lower = 0.0;
  double lp_upper = 0.0;
  double simple_min = 0.0;
  double nesting_min = 0.0;
  double qa_lower = 0.0;  ///< (M - lower) / M
  double qa_upper = 0.0;  ///< (upper - M) / M
  double ca_lower = 0.0;
  double ca_upper = 0.0;
  bool chain_ok = false;
  bool lp_ok = false;
  bool simple_ok = false;
  bool nesting_ok = false;
  bool qa_ok = true;
  bool ca_ok = true;
};

struct KyFanCheck {
  double min_log_gap = 0.0;
  bool ok = false;
};

struct GridOptions {
  bool qa = true;
  bool ca = true;
  double p0 = 0.0;
};

struct GridSummary {
  std::size_t pairs = 0;
  std::size_t ky_fan_pairs = 0;
  std::size_t chain_violations = 0;
  std::size_t ky_fan_violations = 0;
  std::size_t lp_violations = 0;
  std::size_t simple_violations = 0;
  std::size_t nesting_violations = 0;
  std::size_t qa_violations = 0;
  std::size_t ca_violations = 0;
  double worst_chain_gap = 0.0;
  double worst_ky_fan_gap = 0.0;
  double worst_qa_margin = 0.0;
  double worst_ca_margin = 0.0;
  std::optional<std::size_t> first_failure;

  std::size_t total_violations() const {
    return chain_violations + ky_fan_violations + lp_violations + simple_violations +
           nesting_violations + qa_violations + ca_violations;
  }
  bool pass() const { return total_violations() == 0; }
};

/// Containment tolerance: an endpoint may overshoot M by at most this many ulps.
inline constexpr double kContainmentUlps = 4.0;

PairCheck check_pair(const PositivePair& pair, const GridOptions& options);
KyFanCheck check_ky_fan_pair(const PositivePair& pair);

/// Runs check_pair / check_ky_fan_pair over both grids and merges the
/// outcome in index order. Rows are written when the output vectors are given.
GridSummary verify_grid(std::span<const PositivePair> pairs,
                        std::span<const PositivePair> ky_fan_pairs, const GridOptions& options,
                        Execution exec, std::vector<PairCheck>* rows = nullptr,
                        std::vector<KyFanCheck>* ky_fan_rows = nullptr);

}  // namespace bimeans
