#include "edprof/random.hpp"

#include <cmath>
#include <numbers>

namespace edprof::rng {

std::uint64_t Engine::index(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

double Engine::open_uniform() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

double Engine::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = open_uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

double Engine::gamma(double shape) {
  if (shape < 1.0) {
    // Boost to shape + 1 and scale back.
    const double g = gamma(shape + 1.0);
    return g * std::pow(open_uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = open_uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

namespace {

// log of a Gamma(shape) draw; stays finite for tiny shapes where the draw
// itself underflows.
double log_gamma_draw(Engine& e, double shape) {
  if (shape < 1.0) return std::log(e.gamma(shape + 1.0)) + std::log(e.open_uniform()) / shape;
  return std::log(e.gamma(shape));
}

}  // namespace

double Engine::beta(double a, double b) {
  const double lx = log_gamma_draw(*this, a);
  const double ly = log_gamma_draw(*this, b);
  return 1.0 / (1.0 + std::exp(ly - lx));
}

}  // namespace edprof::rng
