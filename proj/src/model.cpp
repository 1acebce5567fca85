#include "immunesim/model.hpp"

#include <cmath>
#include <string>

#include "immunesim/errors.hpp"

namespace immunesim {

namespace {

void check_hill_args(double y, double eta, double n) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("Hill half-max value must be positive and finite, got " + std::to_string(eta));
  }
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw DomainError("Hill exponent must be >= 1, got " + std::to_string(n));
  }
  if (!(y >= 0.0)) {
    throw DomainError("Hill argument must be a non-negative concentration, got " + std::to_string(y));
  }
}

// (y/eta)^n; the ratio form keeps y == eta exactly at 1.
double hill_ratio(double y, double eta, double n) { return std::pow(y / eta, n); }

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string("parameter ") + name + " must be positive and finite, got " +
                          std::to_string(value));
  }
}

void require_exponent(double value, const char* name) {
  if (!(value >= 1.0) || !std::isfinite(value)) {
    throw ValidationError(std::string("Hill exponent ") + name + " must be >= 1, got " +
                          std::to_string(value));
  }
}

}  // namespace

double hill_up(double y, double eta, double n) {
  check_hill_args(y, eta, n);
  const double r = hill_ratio(y, eta, n);
  if (std::isinf(r)) return 1.0;
  return r / (1.0 + r);
}

double hill_down(double y, double eta, double n) {
  check_hill_args(y, eta, n);
  const double r = hill_ratio(y, eta, n);
  if (std::isinf(r)) return 0.0;
  return 1.0 / (1.0 + r);
}

void Parameters::validate() const {
#define IMMUNESIM_POSITIVE(field) require_positive(field, #field)
  IMMUNESIM_POSITIVE(beta1);
  IMMUNESIM_POSITIVE(k1);
  IMMUNESIM_POSITIVE(mu1);
  IMMUNESIM_POSITIVE(lambda2);
  IMMUNESIM_POSITIVE(lambda3);
  IMMUNESIM_POSITIVE(mu2);
  IMMUNESIM_POSITIVE(mu3);
  IMMUNESIM_POSITIVE(gamma3);
  IMMUNESIM_POSITIVE(y2m);
  IMMUNESIM_POSITIVE(k2);
  IMMUNESIM_POSITIVE(k3);
  IMMUNESIM_POSITIVE(k4);
  IMMUNESIM_POSITIVE(k5);
  IMMUNESIM_POSITIVE(k6);
  IMMUNESIM_POSITIVE(k7);
  IMMUNESIM_POSITIVE(k8);
  IMMUNESIM_POSITIVE(k9);
  IMMUNESIM_POSITIVE(k10);
  IMMUNESIM_POSITIVE(k11);
  IMMUNESIM_POSITIVE(k12);
  IMMUNESIM_POSITIVE(k13);
  IMMUNESIM_POSITIVE(q4);
  IMMUNESIM_POSITIVE(q5);
  IMMUNESIM_POSITIVE(q6);
  IMMUNESIM_POSITIVE(q7);
  IMMUNESIM_POSITIVE(eta45);
  IMMUNESIM_POSITIVE(eta47);
  IMMUNESIM_POSITIVE(eta57);
  IMMUNESIM_POSITIVE(eta55);
  IMMUNESIM_POSITIVE(eta54);
  IMMUNESIM_POSITIVE(eta64);
  IMMUNESIM_POSITIVE(eta67);
  IMMUNESIM_POSITIVE(eta75);
  IMMUNESIM_POSITIVE(etaM4);
  IMMUNESIM_POSITIVE(etaM7);
  IMMUNESIM_POSITIVE(D1);
  IMMUNESIM_POSITIVE(D2);
  IMMUNESIM_POSITIVE(D3);
  IMMUNESIM_POSITIVE(lambda12);
  IMMUNESIM_POSITIVE(lambda13);
  IMMUNESIM_POSITIVE(alpha1);
  IMMUNESIM_POSITIVE(alpha2);
#undef IMMUNESIM_POSITIVE
#define IMMUNESIM_EXPONENT(field) require_exponent(field, #field)
  IMMUNESIM_EXPONENT(n47);
  IMMUNESIM_EXPONENT(n45);
  IMMUNESIM_EXPONENT(n55);
  IMMUNESIM_EXPONENT(n75);
  IMMUNESIM_EXPONENT(n54);
  IMMUNESIM_EXPONENT(n57);
  IMMUNESIM_EXPONENT(n64);
  IMMUNESIM_EXPONENT(n67);
  IMMUNESIM_EXPONENT(nM4);
  IMMUNESIM_EXPONENT(nM7);
#undef IMMUNESIM_EXPONENT
}

double activation_rate(double y4, double y7, const Parameters& p) {
  return p.gamma3 + p.k6 * hill_up(y4, p.etaM4, p.exponent(p.nM4)) *
                        hill_down(y7, p.etaM7, p.exponent(p.nM7));
}

std::array<double, 3> cellular_rhs(double y1, double y2, double y3, double y4, double y7,
                                   const Parameters& p) {
  return cellular_rates(y1, y2, y3, activation_rate(y4, y7, p), p);
}

std::array<double, 3> cellular_rates(double y1, double y2, double y3, double rate,
                                     const Parameters& p) {
  const double activation = rate * y1 * y2;
  const double f1 = p.beta1 * (1.0 - y1 / p.k1) * y1 - p.mu1 * y1 - p.lambda2 * y1 * y2 -
                    p.lambda3 * y1 * y3;
  const double f2 = p.mu2 * (1.0 - y2 / p.y2m) * y2 - activation;
  const double f3 = activation - p.mu3 * y3;
  return {f1, f2, f3};
}

std::array<double, 4> cytokine_rhs(double y4, double y5, double y6, double y7, double avg_y3,
                                   const Parameters& p) {
  const double tnf_production =
      p.k7 * hill_down(y5, p.eta45, p.exponent(p.n45)) * hill_down(y7, p.eta47, p.exponent(p.n47));
  const double il6_production = (p.k8 + p.k9 * hill_up(y4, p.eta54, p.exponent(p.n54))) *
                                hill_down(y5, p.eta55, p.exponent(p.n55)) *
                                hill_down(y7, p.eta57, p.exponent(p.n57));
  const double il8_production = (p.k10 + p.k11 * hill_up(y4, p.eta64, p.exponent(p.n64))) *
                                hill_down(y7, p.eta67, p.exponent(p.n67));
  const double il10_production = p.k12 + p.k13 * hill_up(y5, p.eta75, p.exponent(p.n75));

  return {tnf_production * avg_y3 - p.k2 * (y4 - p.q4),
          il6_production * avg_y3 - p.k3 * (y5 - p.q5),
          il8_production * avg_y3 - p.k4 * (y6 - p.q6),
          il10_production * avg_y3 - p.k5 * (y7 - p.q7)};
}

Rates rhs(const StatePoint& s, double avg_y3, const Parameters& p) {
  if (!(avg_y3 >= 0.0)) {
    throw DomainError("average activated-macrophage concentration must be >= 0, got " +
                      std::to_string(avg_y3));
  }
  const auto cells = cellular_rhs(s.y1, s.y2, s.y3, s.y4, s.y7, p);
  const auto cyto = cytokine_rhs(s.y4, s.y5, s.y6, s.y7, avg_y3, p);
  return {cells[0], cells[1], cells[2], cyto[0], cyto[1], cyto[2], cyto[3]};
}

}  // namespace immunesim
