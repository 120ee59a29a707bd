#pragma once

// Reproducible randomness: seeded streams, counter-based lattice weights,
// planar Poisson samples and exponential clocks.
//
// Every generator here is a pure function of its seed material, so the same
// SeedSpec reproduces a run bit-for-bit on one platform. Nothing is shared
// between streams; replicates can run concurrently.

#include <array>
#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

namespace growth::randkit {

// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Namespaces for purpose_tag so that different uses of one master seed never
// collide.
namespace purpose {
inline constexpr std::uint32_t kWeights = 1;
inline constexpr std::uint32_t kClocks = 2;
inline constexpr std::uint32_t kInitial = 3;
inline constexpr std::uint32_t kPoisson = 4;
inline constexpr std::uint32_t kEnvironment = 5;
inline constexpr std::uint32_t kControl = 6;
}  // namespace purpose

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    std::uint32_t purpose_tag = 0;

    SeedSpec with_stream(std::uint64_t id) const { return {master_seed, id, purpose_tag}; }
    SeedSpec with_purpose(std::uint32_t tag) const { return {master_seed, stream_id, tag}; }

    // 64-bit key that identifies the stream.
    std::uint64_t key() const noexcept;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

// xoshiro256** seeded through splitmix64. Satisfies
// std::uniform_random_bit_generator, so <random> distributions accept it.
class Stream {
public:
    using result_type = std::uint64_t;

    explicit Stream(const SeedSpec& seed) : Stream(seed.key()) {}
    explicit Stream(std::uint64_t key);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    // Uniform on the open interval (0,1).
    double uniform_open() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }
    // Unbiased integer in [0, n), n >= 1 (Lemire's multiply-shift with rejection).
    std::uint64_t below(std::uint64_t n) noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> s_{};
};

// Exponential sample with density rate*exp(-rate*t); strictly positive.
double sample_exponential(double rate, Stream& stream);

// Poisson(mean) count.
std::int64_t sample_poisson(double mean, Stream& stream);

struct Exponential {
    double rate = 1.0;
};
// Support {1,2,3,...}, P{Y=k} = q(1-q)^(k-1).
struct Geometric {
    double q = 0.5;
};
using WeightLaw = std::variant<Exponential, Geometric>;

double law_mean(const WeightLaw& law);
const char* law_name(const WeightLaw& law);

enum class Orientation {
    Quadrant,    // Y(i,j), i,j >= 1
    TasepWedge,  // X(i,j) = Y(i-j,-j), j < 0 and j < i
};

// IID lattice weights generated on demand from (seed, law, site). A wedge
// field and a quadrant field with the same seed and law describe the same
// underlying weights under the relabeling X(i,j) = Y(i-j,-j).
class WeightField {
public:
    WeightField(SeedSpec seed, WeightLaw law, Orientation orientation = Orientation::Quadrant);

    const SeedSpec& seed() const { return seed_; }
    const WeightLaw& law() const { return law_; }
    Orientation orientation() const { return orientation_; }

    bool in_domain(std::int64_t i, std::int64_t j) const noexcept;

    // Throws DomainError outside the orientation domain.
    double at(std::int64_t i, std::int64_t j) const;

    // Same weights, other labeling.
    WeightField reoriented(Orientation o) const { return {seed_, law_, o}; }

    // Quadrant weight without a domain check; i,j >= 1 assumed.
    double quadrant_unchecked(std::int64_t i, std::int64_t j) const noexcept;

private:
    SeedSpec seed_;
    WeightLaw law_;
    Orientation orientation_;
    std::uint64_t key_;
};

double site_weight(const WeightField& field, std::int64_t i, std::int64_t j);

// Rectangle (a,b] x (s,t]; x is space, time is the vertical coordinate.
struct Rect {
    double a = 0, s = 0, b = 0, t = 0;
    double width() const { return b - a; }
    double height() const { return t - s; }
    double area() const { return (b > a && t > s) ? (b - a) * (t - s) : 0.0; }
    bool contains(double x, double time) const { return x > a && x <= b && time > s && time <= t; }
};

struct PlanarPoint {
    double x = 0;
    double time = 0;
};

struct PlanarPoints {
    Rect rect;
    std::vector<PlanarPoint> points;
};

// Homogeneous Poisson process of the given intensity restricted to rect.
// Throws ArgumentError for a negative rate.
PlanarPoints sample_poisson_points(const Rect& rect, double rate, const SeedSpec& seed);

}  // namespace growth::randkit
