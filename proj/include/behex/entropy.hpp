#pragma once

#include <stdexcept>

namespace behex::entropy {

// Prelec weighting parameters. `beta` is tied to `alpha` so that the
// weighted entropy keeps the usual entropy axioms; construct via
// BehaviorParam::from_alpha unless you have a reason to set beta yourself.
struct BehaviorParam {
  double alpha = 1.0;
  double beta = 1.0;

  static BehaviorParam from_alpha(double alpha);
};

// beta = exp((1-alpha) * log(log 2)) = (log 2)^(1-alpha). Throws on alpha <= 0.
double beta_from_alpha(double alpha);

// Prelec weighting w(p) = exp(-beta * (-log p)^alpha), with w(0) = 0 and
// w(1) = 1 taken as the limit values.
double prelec_weight(double p, const BehaviorParam& params);

// Behavioral entropy H_alpha(p) = -w(p) log w(p) - w(1-p) log w(1-p), in
// nats, with 0 log 0 = 0. For alpha = 1 this is the Shannon binary entropy.
// Note: the log base is not fixed by the entropy axioms; natural log is used
// throughout this library, so H(0.5) = log 2 ~ 0.693147.
double behavioral_entropy(double p, const BehaviorParam& params);

inline double behavioral_entropy(double p, double alpha) {
  return behavioral_entropy(p, BehaviorParam::from_alpha(alpha));
}

// Shannon binary entropy in nats (alpha = 1 shortcut, no weighting applied).
double shannon_entropy(double p);

}  // namespace behex::entropy
