#include "ciu/gate.hpp"

#include "ciu/errors.hpp"

namespace ciu {

int apply_gate(int word_label, double ciu_score, double threshold) {
  if (word_label == 0) return 0;
  return ciu_score >= threshold ? 1 : 0;
}

void RoutingConfig::validate() const {
  if (!(0.0 < band_low && band_low < band_high && band_high < 1.0)) {
    throw ValidationError("routing band must satisfy 0 < low < high < 1");
  }
}

RoutingReport route_low_confidence(std::vector<TokenDecision> decisions,
                                   const RoutingConfig& cfg) {
  cfg.validate();
  RoutingReport report;
  report.decisions = std::move(decisions);
  const auto in_band = [&](double s) {
    return s >= cfg.band_low && s <= cfg.band_high;
  };
  for (TokenDecision& d : report.decisions) {
    const double effective_ciu = d.word_label == 1 ? d.ciu_score : 0.0;
    d.routed = in_band(d.word_score) || in_band(effective_ciu);
    if (d.routed) ++report.routed_count;
  }
  report.routed_fraction =
      report.decisions.empty()
          ? 0.0
          : static_cast<double>(report.routed_count) /
                static_cast<double>(report.decisions.size());
  return report;
}

}  // namespace ciu
