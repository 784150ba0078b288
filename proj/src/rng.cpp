#include "hierfdr/rng.hpp"

#include <bit>

namespace hfdr::rng {

std::uint64_t derive_seed(std::uint64_t base_seed, double sigma, std::uint64_t replicate_index) {
    std::uint64_t state = std::bit_cast<std::uint64_t>(sigma);
    std::uint64_t h = splitmix64(state);
    state ^= replicate_index + 0x632BE59BD9B4E019ULL;
    h ^= splitmix64(state);
    return base_seed ^ h;
}

} // namespace hfdr::rng
