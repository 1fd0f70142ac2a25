#include "mempoolsim/random_stream.hpp"

#include <cmath>

namespace mempoolsim {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t stream_id) {
    return RandomStream(mix_seed(mix_seed(seed) ^ mix_seed(stream_id * 0x632be59bd9b4e019ULL)));
}

double RandomStream::exponential(double rate) {
    return -std::log(uniform()) / rate;
}

std::uint64_t derive_run_seed(std::uint64_t base, std::uint64_t cell, std::uint64_t replication) {
    return mix_seed(base ^ mix_seed((cell << 32) ^ replication ^ 0xa0761d6478bd642fULL));
}

}  // namespace mempoolsim
