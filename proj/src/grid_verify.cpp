#include "bimeans/grid_verify.hpp"

#include <algorithm>
#include <limits>

#include "bimeans/sharp_bounds.hpp"
#include "bimeans/ulp.hpp"
#include "parallel.hpp"

namespace bimeans {

namespace {

struct Containment {
  double lower = 0.0;
  double upper = 0.0;
  bool ok = false;
};

Containment containment(BoundFamily family, const PositivePair& pair, double m) {
  const Enclosure e = enclose(family, pair);
  const double slack = kContainmentUlps * ulp(m);
  Containment c;
  c.lower = (m - e.lower) / m;
  c.upper = (e.upper - m) / m;
  c.ok = m - e.lower >= -slack && e.upper - m >= -slack;
  return c;
}

}  // namespace

PairCheck check_pair(const PositivePair& pair, const GridOptions& options) {
  PairCheck row;
  const ChainReport chain = chain_check(pair);
  row.chain_min_gap = *std::min_element(chain.gaps.begin(), chain.gaps.end()) / chain.scale;
  row.chain_ok = chain.ordered;

  const LpBoundsReport lp = lp_bounds_check(pair, options.p0);
  row.lp_lower = lp.lower_margin / lp.neuman_sandor;
  row.lp_upper = lp.upper_margin / lp.neuman_sandor;
  row.lp_ok = lp.holds;

  const SimpleBoundsReport simple = simple_bounds_check(pair);
  row.simple_min = std::min({simple.qa.geometric_margin, simple.qa.convex_margin,
                             simple.ca.geometric_margin, simple.ca.convex_margin}) /
                   chain.scale;
  row.nesting_min = std::min({simple.qa.lower_gain, simple.qa.upper_gain, simple.ca.lower_gain,
                              simple.ca.upper_gain}) /
                    chain.scale;
  row.simple_ok = simple.holds;
  row.nesting_ok = simple.sharp_inside;

  const double m = lp.neuman_sandor;
  if (options.qa) {
    const Containment c = containment(BoundFamily::QA, pair, m);
    row.qa_lower = c.lower;
    row.qa_upper = c.upper;
    row.qa_ok = c.ok;
  }
  if (options.ca) {
    const Containment c = containment(BoundFamily::CA, pair, m);
    row.ca_lower = c.lower;
    row.ca_upper = c.upper;
    row.ca_ok = c.ok;
  }
  return row;
}

KyFanCheck check_ky_fan_pair(const PositivePair& pair) {
  const KyFanReport report = ky_fan_check(pair);
  return {*std::min_element(report.log_gaps.begin(), report.log_gaps.end()), report.increasing};
}

GridSummary verify_grid(std::span<const PositivePair> pairs,
                        std::span<const PositivePair> ky_fan_pairs, const GridOptions& options,
                        Execution exec, std::vector<PairCheck>* rows,
                        std::vector<KyFanCheck>* ky_fan_rows) {
  // Constants are initialised before any worker thread touches them.
  (void)sharp_constants();

  std::vector<PairCheck> local_rows;
  std::vector<KyFanCheck> local_kf;
  auto& out = rows ? *rows : local_rows;
  auto& kf_out = ky_fan_rows ? *ky_fan_rows : local_kf;
  out.assign(pairs.size(), PairCheck{});
  kf_out.assign(ky_fan_pairs.size(), KyFanCheck{});

  detail::map(exec, pairs, std::span<PairCheck>(out),
              [&options](const PositivePair& p) { return check_pair(p, options); });
  detail::map(exec, ky_fan_pairs, std::span<KyFanCheck>(kf_out),
              [](const PositivePair& p) { return check_ky_fan_pair(p); });

  constexpr double inf = std::numeric_limits<double>::infinity();
  GridSummary s;
  s.pairs = pairs.size();
  s.ky_fan_pairs = ky_fan_pairs.size();
  s.worst_chain_gap = inf;
  s.worst_ky_fan_gap = inf;
  s.worst_qa_margin = inf;
  s.worst_ca_margin = inf;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const PairCheck& r = out[i];
    s.chain_violations += !r.chain_ok;
    s.lp_violations += !r.lp_ok;
    s.simple_violations += !r.simple_ok;
    s.nesting_violations += !r.nesting_ok;
    s.qa_violations += !r.qa_ok;
    s.ca_violations += !r.ca_ok;
    s.worst_chain_gap = std::min(s.worst_chain_gap, r.chain_min_gap);
    if (options.qa) s.worst_qa_margin = std::min({s.worst_qa_margin, r.qa_lower, r.qa_upper});
    if (options.ca) s.worst_ca_margin = std::min({s.worst_ca_margin, r.ca_lower, r.ca_upper});
    const bool ok = r.chain_ok && r.lp_ok && r.simple_ok && r.nesting_ok && r.qa_ok && r.ca_ok;
    if (!ok && !s.first_failure) s.first_failure = i;
  }
  for (const KyFanCheck& k : kf_out) {
    s.ky_fan_violations += !k.ok;
    s.worst_ky_fan_gap = std::min(s.worst_ky_fan_gap, k.min_log_gap);
  }
  return s;
}

}  // namespace bimeans
