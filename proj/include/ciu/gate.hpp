#pragma once

#include <string>
#include <vector>

namespace ciu {

// WORD gate: CIU is forced to 0 whenever the WORD decision is 0; a gate can
// only flip CIU predictions from 1 to 0, never 0 to 1.
int apply_gate(int word_label, double ciu_score, double threshold);

struct TokenDecision {
  std::string transcript_id;
  int utterance_index = 0;
  int token_index = 0;
  std::string surface;
  double word_score = 0.0;  // raw, uncalibrated
  double ciu_score = 0.0;   // raw, uncalibrated
  int word_label = 0;
  int ciu_label = 0;  // post-gate
  bool routed = false;
};

struct RoutingConfig {
  double band_low = 0.4;
  double band_high = 0.6;
  void validate() const;  // throws ValidationError
};

struct RoutingReport {
  std::vector<TokenDecision> decisions;  // input order, routed flags set
  size_t routed_count = 0;
  double routed_fraction = 0.0;
};

// Routes every token whose word score or effective (post-gate) CIU score
// falls inside [band_low, band_high], endpoints inclusive.
RoutingReport route_low_confidence(std::vector<TokenDecision> decisions,
                                   const RoutingConfig& cfg);

}  // namespace ciu
