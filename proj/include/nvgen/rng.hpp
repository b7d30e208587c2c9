#ifndef NVGEN_RNG_HPP
#define NVGEN_RNG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace nvgen {

// Deterministic splitmix64 stream. Campaigns derive one independent child
// stream per attempt, so results do not depend on evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, n), n > 0
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  int pick(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  template <typename T>
  const T& choose(const std::vector<T>& v) {
    return v[pick(static_cast<int>(v.size()))];
  }

  // k distinct indices from [0, n), in draw order
  std::vector<int> sampleWithoutReplacement(int n, int k) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::vector<int> out;
    for (int i = 0; i < k && i < n; ++i) {
      int j = i + pick(n - i);
      std::swap(idx[i], idx[j]);
      out.push_back(idx[i]);
    }
    return out;
  }

  static Rng child(std::uint64_t seed, std::uint64_t salt1, std::uint64_t salt2 = 0) {
    Rng mixer(seed ^ (salt1 * 0x9e3779b97f4a7c15ULL) ^ (salt2 * 0xc2b2ae3d27d4eb4fULL));
    return Rng(mixer.next());
  }

 private:
  std::uint64_t state_;
};

// FNV-1a, used for content-addressed trace cache files.
inline std::uint64_t hash64(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hashHex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace nvgen

#endif  // NVGEN_RNG_HPP
