#pragma once

#include <cstdint>
#include <string_view>

namespace tvgp {

/// splitmix64 step, used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for (master, trial, stream tag). Tags keep the environment and
/// algorithm streams disjoint, so policy choices never perturb the
/// environment path.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                 std::string_view tag) {
    std::uint64_t h = splitmix64(master ^ 0x6a09e667f3bcc908ULL);
    h = splitmix64(h ^ trial);
    for (const char c : tag) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
    return h;
}

}  // namespace tvgp
