#pragma once

#include <cstdint>

#include "diffgeo/circle_diffeo.hpp"
#include "diffgeo/interval_diffeo.hpp"

namespace diffgeo {

// Deterministic splitmix64 stream: fixed algorithm and constants, so a
// seed reproduces the same family members on every platform and build.
class Sampler {
 public:
  explicit Sampler(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Random member of the interval test families.
  IntervalDiffeo interval_member(int k, int n) {
    if (uniform() < 0.5) return from_family("exp", {uniform(-3.0, 3.0)}, k, n);
    return from_family("mobius", {uniform(-0.6, 2.0)}, k, n);
  }

  // Narrower parameter band: keeps order-5 jets well-conditioned.
  IntervalDiffeo interval_member_moderate(int k, int n) {
    if (uniform() < 0.5) return from_family("exp", {uniform(-2.0, 2.0)}, k, n);
    return from_family("mobius", {uniform(-0.5, 1.5)}, k, n);
  }

  // rotation(t) o cosine stabilizer, the circle test family.
  CircleDiffeo circle_member(int k, int n) {
    double a = uniform(-0.85, 0.85);
    double t = uniform(0.0, 1.0);
    return cosine_circle(a, t, k, n);
  }

  // Gentler amplitudes, for stress chains that compose several members:
  // short products stay resolvable on the default grid.
  CircleDiffeo circle_member_moderate(int k, int n) {
    double a = uniform(-0.6, 0.6);
    double t = uniform(0.0, 1.0);
    return cosine_circle(a, t, k, n);
  }

 private:
  uint64_t state_;
};

}  // namespace diffgeo
