#include "cellex/random.hpp"

#include <cmath>
#include <numbers>

#include "cellex/error.hpp"

namespace cellex {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyGraph: return "empty_graph";
    case Errc::Malformed: return "malformed";
    case Errc::DimensionMismatch: return "dimension_mismatch";
    case Errc::EndpointRange: return "endpoint_range";
    case Errc::InvalidArgument: return "invalid_argument";
    case Errc::Overflow: return "overflow";
    case Errc::Consistency: return "consistency";
    case Errc::NonFinite: return "non_finite";
    case Errc::DomainMismatch: return "domain_mismatch";
    case Errc::Io: return "io";
  }
  return "unknown";
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling on the top of the range to avoid modulo bias.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

double Rng::normal() {
  // Box-Muller; one value per call keeps the stream position simple.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

}  // namespace cellex
