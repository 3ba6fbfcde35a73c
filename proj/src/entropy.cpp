#include "behex/entropy.hpp"

#include <cmath>

namespace behex::entropy {

namespace {
constexpr double kLog2 = 0.6931471805599453;

double xlogx(double w) {
  if (w <= 0.0 || w >= 1.0) return 0.0;
  return -w * std::log(w);
}
}  // namespace

double beta_from_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("beta_from_alpha: alpha must be > 0");
  return std::exp((1.0 - alpha) * std::log(kLog2));
}

BehaviorParam BehaviorParam::from_alpha(double alpha) {
  return BehaviorParam{alpha, beta_from_alpha(alpha)};
}

double prelec_weight(double p, const BehaviorParam& params) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("prelec_weight: p must be in [0,1]");
  if (!(params.alpha > 0.0) || !(params.beta > 0.0))
    throw std::domain_error("prelec_weight: alpha and beta must be > 0");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return std::exp(-params.beta * std::pow(-std::log(p), params.alpha));
}

double behavioral_entropy(double p, const BehaviorParam& params) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("behavioral_entropy: p must be in [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return xlogx(prelec_weight(p, params)) + xlogx(prelec_weight(1.0 - p, params));
}

double shannon_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("shannon_entropy: p must be in [0,1]");
  return xlogx(p) + xlogx(1.0 - p);
}

}  // namespace behex::entropy
