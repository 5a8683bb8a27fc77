#include "pa/rng.hpp"

namespace pa {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t master, std::string_view stage) {
    return mix64(master ^ fnv1a64(stage));
}

std::uint64_t sub_seed(std::uint64_t master, std::string_view stage, std::uint64_t index) {
    return mix64(sub_seed(master, stage) + index);
}

} // namespace pa
