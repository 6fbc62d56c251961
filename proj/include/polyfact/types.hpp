// Common scalar/matrix aliases and small numeric helpers.
#ifndef POLYFACT_TYPES_HPP
#define POLYFACT_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace polyfact {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct PolyfactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// splitmix64; used to derive independent per-realization seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(base ^ (a * 0x100000001b3ULL)) ^ b);
}

} // namespace polyfact

#endif
